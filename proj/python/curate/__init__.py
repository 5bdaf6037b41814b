# Copyright 2026 The Curate Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the curate image curation pipeline."""

import json
import os

from . import _core
from ._core import (
    Error,
    blur_score,
    derive_seed,
    flat_gate,
    retain_top_fraction,
    to_grayscale,
)

__all__ = [
    "Error",
    "blur_score",
    "degrade_once",
    "derive_seed",
    "flat_gate",
    "retain_top_fraction",
    "run",
    "to_grayscale",
]

__version__ = "0.1.0"


def degrade_once(image, seed, config=None):
    """Degrades an HxW or HxWx3 uint8 array.

    Returns the LQ array and the list of applied operations.
    """
    lq, ops = _core.degrade_once(image, seed, json.dumps(config) if config else "")
    return lq, json.loads(ops)


def run(inputs, output, *, bypass=(), iqa_fraction=0.2, epochs=4, seed=0,
        workers=1, resume=False, scorer_cmd=None, through="degrade"):
    """Runs the pipeline through `through` and returns per-stage counts."""
    stats = _core.run(
        [os.fspath(p) for p in inputs], os.fspath(output),
        [os.fspath(p) for p in bypass], iqa_fraction, epochs, seed, workers,
        resume, scorer_cmd, through)
    return json.loads(stats)
