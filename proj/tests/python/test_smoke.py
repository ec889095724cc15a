import json
import math
import os
import subprocess
import tempfile

import pytest

exsets = pytest.importorskip("exsets")

GOLDEN = math.log((1 + math.sqrt(5)) / 2)


def test_golden_mean_entropy():
    assert abs(exsets.survivor_entropy(2, ["11"]) - GOLDEN) < 1e-9
    assert exsets.word_count(2, ["11"], 5) == "13"


def test_bowen_root():
    assert abs(exsets.bowen_root(2, [], [-math.log(3)] * 2) - math.log(2) / math.log(3)) < 1e-10
    with pytest.raises(ValueError):
        exsets.bowen_root(2, [], [-1.0, 0.0])


def test_young_and_box_dimension():
    assert abs(exsets.young_dimension(math.log(2), -math.log(3), math.log(3)) - 2 * math.log(2) / math.log(3)) < 1e-12
    pts = exsets.horseshoe_sample([3, 3], [1 / 3, 1 / 3], 8)
    scales = [3.0**-k for k in range(2, 7)]
    assert abs(exsets.box_dimension(pts, scales) - 2 * math.log(2) / math.log(3)) < 0.05


def test_fixed_point_report():
    r = exsets.fixed_point_report([3, 3], [1 / 3, 1 / 3], 6)
    assert abs(r["survivor_entropy"] - math.log(2)) < 0.02
    assert r["thmB_dim"] == "satisfied"


@pytest.mark.skipif("EXSETS_CLI" not in os.environ, reason="CLI path not given")
def test_cli_entropy_json():
    with tempfile.TemporaryDirectory() as out:
        cfg = os.path.join(os.environ["EXSETS_SCENARIOS"], "experiments", "golden-mean.yaml")
        subprocess.run([os.environ["EXSETS_CLI"], "entropy", "--config", cfg, "--out", out], check=True)
        with open(os.path.join(out, "entropy.json")) as fh:
            report = json.load(fh)
        assert abs(report["survivor_entropy"] - GOLDEN) < 1e-9
