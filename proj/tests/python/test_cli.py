# Copyright 2026 The Forge Authors
# SPDX-License-Identifier: Apache-2.0
import json
import os
import pathlib
import subprocess

import pytest

FORGE = os.environ.get("FORGE_BIN", "forge")
CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"


def forge(*args):
    return subprocess.run([FORGE, *map(str, args)], capture_output=True, text=True)


def test_help_exits_zero():
    r = forge("--help")
    assert r.returncode == 0
    for sub in ("classify", "clean", "dedup", "mine", "rm", "score", "train", "eval", "experiment", "synth"):
        assert sub in r.stdout


def test_missing_input_is_exit_2(tmp_path):
    r = forge("--out-dir", tmp_path, "clean")
    assert r.returncode == 2
    assert "missing input" in r.stderr


def test_config_errors_are_exit_3(tmp_path):
    assert forge("--config", tmp_path / "nope.conf", "synth").returncode == 3
    bad = tmp_path / "bad.conf"
    bad.write_text("[train]\nstepz = 3\n")
    assert forge("--config", bad, "synth").returncode == 3
    assert forge("--threads", "0", "--out-dir", tmp_path, "synth").returncode == 3
    assert forge("--no-such-flag", "synth").returncode == 3


def test_stage_chain(tmp_path):
    base = ["--config", CONFIGS / "pipeline.conf", "--out-dir", tmp_path]
    for stage in (["synth"], ["classify", "train"], ["classify", "score"], ["clean"], ["dedup"], ["mine"],
                  ["rm", "train"], ["rm", "score"], ["score"], ["train", "--steps", "40"], ["eval"]):
        r = forge(*base, *stage)
        assert r.returncode == 0, (stage, r.stderr)
    report = json.loads((tmp_path / "eval" / "report.json").read_text())
    assert 0.0 <= report["result"]["accuracy"] <= 1.0
    assert (tmp_path / "train" / "model.bin").exists()


def test_score_mode_mismatch_fails(tmp_path):
    base = ["--config", CONFIGS / "pipeline.conf", "--out-dir", tmp_path]
    for stage in (["synth"], ["rm", "train"], ["score", "--mode", "rho1", "--input", tmp_path / "data" / "domain.jsonl"]):
        assert forge(*base, *stage).returncode == 0
    r = forge(*base, "train", "--mode", "mucpt", "--steps", "5", "--domain", tmp_path / "data" / "domain.jsonl")
    assert r.returncode == 4
    assert "score records are RHO1" in r.stderr
