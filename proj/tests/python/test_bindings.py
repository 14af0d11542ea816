# Copyright 2026 The Forge Authors
# SPDX-License-Identifier: Apache-2.0
import math
import random

import pytest

import forge


def test_tokenize_and_normalize():
    assert forge.tokenize("Hello, World!") == ["hello", ",", "world", "!"]
    assert forge.normalize_text(forge.normalize_text("  a \t b  ")) == forge.normalize_text("  a \t b  ")


def test_mucpt_weights_floor():
    assert forge.mucpt_weights([0.5, 4.0], 2.0, 0.05) == pytest.approx([4.0, 0.5])
    assert forge.mucpt_weights([0.0], 1.0, 0.1) == pytest.approx([10.0])


def test_rho1_keeps_largest_excess():
    assert forge.rho1_select([3.0, 1.0, 2.0], [1.0, 1.0, 1.0], 0.5) == [True, False, True]


def test_schedule_defaults():
    total = 20000
    warm = math.ceil(0.0005 * total)
    assert forge.lr_at(warm, total) == 6e-5
    assert forge.lr_at(total, total) == 3e-5
    assert forge.lr_at(warm + (total - warm) // 2, total) == pytest.approx(4.5e-5, rel=1e-12)
    with pytest.raises(forge.InvalidArgument):
        forge.lr_at(total + 1, total)


def test_ngram_distribution_sums_to_one():
    lm = forge.NGramLM(["the cat sat", "the dog sat"])
    total = sum(lm.prob("<s>", "the", w) for w in lm.vocab)
    assert total == pytest.approx(1.0, abs=1e-12)
    assert len(lm.nll("the cat sat")) == 4


def test_minhash_tracks_exact_jaccard():
    rng = random.Random(3)
    a = [f"w{rng.randrange(5000)}" for _ in range(200)]
    b = list(a)
    for i in range(0, 200, 20):
        b[i] = "edit"
    exact = forge.exact_jaccard(a, b)
    est = sum(forge.minhash_jaccard(a, b, seed=s) for s in range(40)) / 40
    assert abs(est - exact) < 0.05


def test_pii_and_answers():
    text, counts = forge.mask_pii("write to a.b@example.com")
    assert "[EMAIL]" in text
    assert sum(counts.values()) == 1
    assert forge.normalize_answer("The Blue-Rain!") == "blue rain"
    assert forge.agreement("it was Ann Lee", "ann lee") == 1


def test_run_stage_missing_input(tmp_path):
    with pytest.raises(FileNotFoundError):
        forge.run_stage("clean", "", tmp_path)
    with pytest.raises(forge.ConfigError):
        forge.run_stage("clean", "[bogus]\nx = 1\n", tmp_path)


def test_run_stage_synth(tmp_path):
    report = forge.run_stage("synth", "[synth]\nn_domain_docs = 20\nn_general_docs = 10\n", tmp_path)
    assert report["stage"] == "synth"
    assert (tmp_path / "data").is_dir()
