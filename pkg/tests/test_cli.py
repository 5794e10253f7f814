import json
import subprocess
import sys
from pathlib import Path

import pytest

from swarmform.cli import main
from swarmform.traceio import TRACE_HEADER, read_trace

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def files(d):
    return {p.relative_to(d): p.read_bytes() for p in sorted(Path(d).rglob("*")) if p.is_file()}


def test_form_writes_trace_and_summary(tmp_path):
    assert main(["form", "--config", str(CONFIGS / "tunnel.toml"), "--out", str(tmp_path),
                 "--frames", "500"]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert [t[2] for t in summary["transitions"]] == ["Flattening", "Flattened", "Restoring", "Normal"]
    assert summary["final_centroid"][0] > summary["course_exit_x"]
    assert summary["restored_residual"] < 1e-3
    assert (tmp_path / "trace.csv").read_text().splitlines()[0] == ",".join(TRACE_HEADER)
    assert len(list((tmp_path / "frames").glob("*.svg"))) >= 5


def test_form_flags_override_config(tmp_path):
    assert main(["form", "--config", str(CONFIGS / "funnel.toml"), "--out", str(tmp_path),
                 "--n", "4", "--method", "moebius", "--variant", "exact", "--angle", "10"]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["n"] == 4 and summary["method"] == "moebius"


def test_transform(tmp_path):
    assert main(["transform", "--n", "6", "--method", "macro", "--angle", "15",
                 "--out", str(tmp_path)]) == 0
    s = json.loads((tmp_path / "summary.json").read_text())
    assert s["case"] in (3, 4) and s["transform_time"] > 0 and len(s["final_positions"]) == 6
    assert len(read_trace(tmp_path / "trace.csv")) % 6 == 0


def test_sweep_collisions(tmp_path):
    assert main(["sweep-collisions", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "collisions.json").read_text())
    assert data["collisions"] == {"3": [0, 0, 0, 1], "4": [0, 0, 2, 0], "5": [0, 1, 0, 0],
                                  "6": [0, 3, 0, 2]}
    assert (tmp_path / "collisions.csv").read_text().splitlines()[0] == "n,15,30,45,60"


def test_sweep_time(tmp_path):
    assert main(["sweep-time", "--method", "moebius", "--ns", "3", "4", "--out", str(tmp_path)]) == 0
    rows = json.loads((tmp_path / "sweep_time_moebius.json").read_text())
    assert [r["n"] for r in rows] == [3, 4]
    assert set(rows[0]) == {"method", "n", "transform_time", "collisions", "max_displacement",
                            "mean_displacement"}


def test_render(tmp_path):
    main(["transform", "--n", "3", "--out", str(tmp_path / "run")])
    assert main(["render", str(tmp_path / "run" / "trace.csv"), "--out", str(tmp_path / "svg"),
                 "--every", "100"]) == 0
    assert list((tmp_path / "svg").glob("frame_*.svg"))


@pytest.mark.parametrize("args", [
    ["form", "--config", "/nonexistent/file.toml"],
    ["form", "--n", "2"],
])
def test_invalid_config_exit_code(tmp_path, args):
    assert main(args + ["--out", str(tmp_path)]) == 1


def test_bad_config_content_exit_code(tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[primitives]\nn = 5\nmystery = 1\n")
    assert main(["form", "--config", str(cfg), "--out", str(tmp_path)]) == 1


def test_divergence_exit_code(tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[sim]\npropulsion = nan\n")
    assert main(["form", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "swarmform", "sweep-collisions", "--n", "3",
                          "--angle", "60", "--out", str(tmp_path)], capture_output=True, text=True)
    assert out.returncode == 0 and "60" in out.stdout


def test_outputs_are_byte_identical(tmp_path):
    for d in ("a", "b"):
        main(["form", "--config", str(CONFIGS / "funnel.toml"), "--out", str(tmp_path / d)])
        main(["sweep-time", "--ns", "3", "5", "--out", str(tmp_path / d)])
    assert files(tmp_path / "a") == files(tmp_path / "b")
