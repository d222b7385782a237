import json
import os

import numpy as np
import pytest

from choroidseg.cli import main
from choroidseg.config import load_config, parse_config_text
from choroidseg.errors import ParseError
from choroidseg.phantom import make_phantom
from choroidseg.scan_io import save_scan

from conftest import write_pgm


@pytest.fixture(scope="module")
def phantom_scan(tmp_path_factory):
    base = tmp_path_factory.mktemp("scans")
    rng = np.random.default_rng(60)
    ph = make_phantom(
        96, 64, rng, band_top=24, band_height=6, slope=0.0,
        choroid_thickness=30, n_vessels=0, noise_sigma=2.0,
    )
    path = base / "scan.pgm"
    save_scan(ph.image, str(path))
    return str(path), ph


def test_segment_writes_outputs(phantom_scan, tmp_path):
    path, _ = phantom_scan
    out = tmp_path / "out"
    code = main(["segment", path, "--out", str(out), "--overlay"])
    assert code == 0
    assert (out / "scan.result.json").exists()
    assert (out / "scan.thickness.csv").exists()
    assert (out / "scan.overlay.png").exists()


def test_segment_overlay_has_green_lines(phantom_scan, tmp_path):
    from PIL import Image

    path, _ = phantom_scan
    out = tmp_path / "out"
    assert main(["segment", path, "--out", str(out), "--overlay"]) == 0
    img = np.asarray(Image.open(out / "scan.overlay.png"))
    green = (img[:, :, 1] == 255) & (img[:, :, 0] == 0) & (img[:, :, 2] == 0)
    assert green.sum() >= img.shape[1]  # at least one green pixel per column


def test_segment_partial_failure(phantom_scan, tmp_path, capsys):
    path, _ = phantom_scan
    bad = tmp_path / "bad.pgm"
    bad.write_bytes(b"garbage")
    out = tmp_path / "out"
    code = main(["segment", path, str(bad), "--out", str(out)])
    assert code == 1
    assert (out / "scan.result.json").exists()
    assert "bad.pgm" in capsys.readouterr().err


def test_segment_bad_config_usage_error(phantom_scan, tmp_path, capsys):
    path, _ = phantom_scan
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("nonsense_key = 5\n")
    assert main(["segment", path, "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_segment_result_embeds_config(phantom_scan, tmp_path):
    path, _ = phantom_scan
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("gamma = 0.3\nroi_offset_px = 7\n")
    out = tmp_path / "out"
    assert main(["segment", path, "--config", str(cfg), "--out", str(out)]) == 0
    result = json.loads((out / "scan.result.json").read_text())
    assert result["config"]["gamma"] == 0.3
    assert result["config"]["roi_offset_px"] == 7


def test_eval_perfect_labels(phantom_scan, tmp_path, capsys):
    path, _ = phantom_scan
    out = tmp_path / "out"
    assert main(["segment", path, "--out", str(out)]) == 0
    result = json.loads((out / "scan.result.json").read_text())
    labels = tmp_path / "labels.csv"
    lines = ["layer,col,row"]
    for c in (5, 20, 40):
        lines.append(f"RPE,{c},{result['rpe'][c]}")
        lines.append(f"CHOROID,{c},{result['choroid'][c]}")
    labels.write_text("\n".join(lines) + "\n")
    code = main(["eval", str(out / "scan.result.json"), str(labels)])
    assert code == 0
    out_text = capsys.readouterr().out
    assert "0.00 px" in out_text


def test_eval_json_offsets(phantom_scan, tmp_path, capsys):
    path, _ = phantom_scan
    out = tmp_path / "out"
    assert main(["segment", path, "--out", str(out)]) == 0
    result = json.loads((out / "scan.result.json").read_text())
    labels = tmp_path / "labels.csv"
    rows = [f"RPE,{c},{result['rpe'][c] + 4}" for c in (6, 18, 30)]
    labels.write_text("layer,col,row\n" + "\n".join(rows) + "\n")
    code = main(["eval", str(out / "scan.result.json"), str(labels), "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["RPE"]["mean_unsigned_px"] == 4.0
    assert payload["RPE"]["mean_unsigned_mm"] == pytest.approx(0.01548668, abs=1e-12)
    assert payload["RPE"]["mean_unsigned_mm"] == pytest.approx(
        payload["RPE"]["mean_unsigned_px"] * 0.00387167, abs=1e-15
    )


def test_thickness_map_cli(phantom_scan, tmp_path):
    path, _ = phantom_scan
    out = tmp_path / "out"
    assert main(["segment", path, "--out", str(out)]) == 0
    result_path = str(out / "scan.result.json")
    map_base = str(tmp_path / "volume")
    code = main(["thickness-map", result_path, result_path, "--out", map_base])
    assert code == 0
    assert os.path.exists(map_base + ".csv")
    assert os.path.exists(map_base + ".png")
    assert os.path.exists(map_base + ".minmax.txt")


def test_phantom_command(tmp_path):
    scan = tmp_path / "ph.pgm"
    labels = tmp_path / "ph_labels.csv"
    code = main([
        "phantom", "--out", str(scan), "--labels", str(labels),
        "--rows", "96", "--cols", "64", "--seed", "3",
    ])
    assert code == 0
    assert scan.exists() and labels.exists()
    assert labels.read_text().startswith("layer,col,row")


def test_config_file_parsing(tmp_path):
    cfg = parse_config_text(
        "# comment line\n"
        "gamma = 0.5\n"
        "apply_alpha_mean = true\n"
        "window = 7\n"
        "enhance_order = homomorphic_first\n"
    )
    assert cfg.gamma == 0.5
    assert cfg.apply_alpha_mean is True
    assert cfg.neutro.window == 7
    assert cfg.enhance_order == "homomorphic_first"


def test_config_file_errors(tmp_path):
    with pytest.raises(ParseError):
        parse_config_text("gamma 0.5\n")
    with pytest.raises(ParseError):
        parse_config_text("mystery = 1\n")
    with pytest.raises(ParseError):
        load_config(str(tmp_path / "absent.cfg"))


def test_usage_error_exit_code():
    assert main(["segment"]) == 2
    assert main(["no-such-command"]) == 2
