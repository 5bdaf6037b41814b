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

import math

import numpy as np
import pytest
from PIL import Image

import curate


def textured(size=480, amplitude=95.0, period=12.0, phase=0.4):
    x = np.arange(size)
    w = 2 * math.pi / period
    s = np.sin(w * x + phase)
    v = np.rint(128 + amplitude * np.outer(s, s)).astype(np.uint8)
    return np.repeat(v[:, :, None], 3, axis=2)


def test_grayscale_luma():
    rgb = np.array([[[255, 0, 0], [0, 255, 0], [0, 0, 255]]], dtype=np.uint8)
    np.testing.assert_allclose(curate.to_grayscale(rgb)[0],
                               [0.299 * 255, 0.587 * 255, 0.114 * 255], atol=1e-9)


def test_blur_score_matches_numpy():
    rng = np.random.default_rng(0)
    img = rng.integers(0, 256, size=(40, 50), dtype=np.uint8)
    g = np.pad(img.astype(np.float64), 1, mode="edge")
    lap = (g[:-2, 1:-1] + g[2:, 1:-1] + g[1:-1, :-2] + g[1:-1, 2:] - 4 * g[1:-1, 1:-1])
    assert curate.blur_score(img) == pytest.approx(lap.var(), rel=1e-12)


def test_gates_on_constructed_images():
    assert curate.blur_score(np.full((64, 64, 3), 90, np.uint8)) == 0.0
    img = textured()
    assert 150 <= curate.blur_score(img) <= 8000
    flat = curate.flat_gate(img)
    assert flat["passed"] and flat["patch_count"] == 4 and flat["flat_count"] == 0
    const = curate.flat_gate(np.zeros((480, 480), np.uint8))
    assert not const["passed"] and const["flat_ratio"] == 1.0


def test_retain_top_fraction():
    scores = [(chr(ord("a") + i), float(i + 1)) for i in range(10)]
    assert sorted(curate.retain_top_fraction(scores, 0.2)) == ["i", "j"]
    with pytest.raises(curate.Error):
        curate.retain_top_fraction(scores, 0.0)


def test_derive_seed_and_degrade():
    assert curate.derive_seed(42, "abc", 0) == 10494995213819346311
    img = textured(size=256)
    lq, ops = curate.degrade_once(img, 7)
    lq2, ops2 = curate.degrade_once(img, 7)
    assert lq.shape == img.shape and lq.dtype == np.uint8
    assert np.array_equal(lq, lq2) and ops == ops2
    assert ops[-1]["op"] == "jpeg"


def test_run_pipeline(tmp_path):
    src = tmp_path / "in"
    src.mkdir()
    for i in range(3):
        Image.fromarray(textured(phase=0.3 * i)).save(src / f"t{i}.png")
    Image.fromarray(np.full((480, 480, 3), 7, np.uint8)).save(src / "flat.png")
    stats = curate.run([src], tmp_path / "out", epochs=1, iqa_fraction=0.5)
    by_stage = {s["stage"]: s for s in stats["stages"]}
    assert by_stage["blur"]["reject"] == 1
    assert by_stage["select"]["pass"] == 2
    assert stats["pairs"] == 2
    assert (tmp_path / "out" / "manifest.ndjson").exists()
    with pytest.raises(ValueError):
        curate.run([src], tmp_path / "out2", through="nowhere")
