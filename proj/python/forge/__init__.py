# Copyright 2026 The Forge Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the forge corpus pipeline and scoring toolkit."""

import json as _json

from ._forge import (  # noqa: F401
    ConfigError,
    Error,
    FormatError,
    InvalidArgument,
    MissingInput,
    NGramLM,
    agreement,
    build_vocab,
    detect_language,
    exact_jaccard,
    lr_at,
    mask_pii,
    minhash_jaccard,
    mucpt_weights,
    normalize_answer,
    normalize_text,
    quality_score,
    rho1_select,
    route,
    set_num_threads,
    tokenize,
)
from . import _forge

__version__ = "0.1.0"


def run_stage(stage, config_text="", out_dir=""):
    """Run one pipeline stage and return its report as a dict."""
    return _json.loads(_forge.run_stage(stage, config_text, str(out_dir)))


def run_experiment(config_text="", out_dir=""):
    """Run the experiment matrix and return the comparison CSV text."""
    return _forge.run_experiment(config_text, str(out_dir))
