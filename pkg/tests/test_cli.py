"""CLI behavior: exit codes, file outputs, determinism."""

import json

import numpy as np
import pytest

from dsm2d.cli import main

# note the = form: argparse would otherwise read "-1,..." as an option
COARSE = ["--grid=-1,1,-1,1,0.02"]


def _scene_doc():
    return {
        "background_permeability": 1.0,
        "inclusions": [
            {"center": [0.7, 0.5], "radius": 0.1, "permeability": 5.0},
        ],
        "wavelength": 0.4,
        "incident_direction_degrees": 45.0,
        "num_observation_directions": 256,
    }


@pytest.fixture()
def scene_file(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(_scene_doc()))
    return path


def _read_bytes(directory, names):
    return {name: (directory / name).read_bytes() for name in names}


def test_missing_scene_exits_2_without_outputs(tmp_path):
    out = tmp_path / "out"
    code = main(["synthesize", "--scene", str(tmp_path / "absent.json"),
                 "--out", str(out)])
    assert code == 2
    assert not out.exists()


def test_synthesize_writes_256_rows(tmp_path, scene_file):
    out = tmp_path / "out"
    assert main(["synthesize", "--scene", str(scene_file),
                 "--out", str(out)]) == 0
    lines = (out / "farfield.csv").read_text().strip().splitlines()
    assert len(lines) == 257
    sidecar = json.loads((out / "farfield.json").read_text())
    assert sidecar["wavelength"] == 0.4
    assert sidecar["noise"]["snr_db"] == "inf"


def test_synthesize_deterministic_with_noise(tmp_path, scene_file):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["synthesize", "--scene", str(scene_file),
            "--snr-db", "20", "--seed", "7"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    names = ["farfield.csv", "farfield.json"]
    assert _read_bytes(out1, names) == _read_bytes(out2, names)


def test_overwrite_needs_force(tmp_path, scene_file):
    out = tmp_path / "out"
    args = ["synthesize", "--scene", str(scene_file), "--out", str(out)]
    assert main(args) == 0
    assert main(args) == 2
    assert main(args + ["--force"]) == 0


def test_bad_grid_spec_exits_2(tmp_path, scene_file):
    assert main(["predict", "--scene", str(scene_file),
                 "--grid", "0,1,0,1", "--out", str(tmp_path / "p")]) == 2


def test_image_pipeline_reports_demo_peaks(tmp_path, scene_file):
    data_dir = tmp_path / "data"
    assert main(["synthesize", "--scene", str(scene_file),
                 "--out", str(data_dir)]) == 0
    img_dir = tmp_path / "img"
    assert main(["image", "--data", str(data_dir / "farfield.csv"),
                 "--out", str(img_dir), *COARSE]) == 0
    report = json.loads((img_dir / "peaks.json").read_text())
    top = report["peaks"][:2]
    got = sorted((p["x"], p["y"]) for p in top)
    for (x, y), want in zip(got, [(0.6171, 0.4171), (0.7829, 0.5829)]):
        assert np.hypot(x - want[0], y - want[1]) < 0.02
    assert report["residual"] < 1e-3
    assert (img_dir / "map.pgm").exists()
    assert len(report["predicted"]) == 2


def test_image_all_zero_data_exits_1(tmp_path):
    from dsm2d.forward import FarFieldData, write_far_field
    from dsm2d.model import WaveContext, make_observation_set

    obs = make_observation_set(64)
    silent = FarFieldData(observation_set=obs,
                          incident_direction=np.array([1.0, 0.0]),
                          samples=np.zeros(64, dtype=complex))
    write_far_field(silent, tmp_path / "farfield.csv",
                    wave=WaveContext.from_degrees(0.4, 45.0))
    code = main(["image", "--data", str(tmp_path / "farfield.csv"),
                 "--out", str(tmp_path / "img"), *COARSE])
    assert code == 1


def test_image_without_wavelength_exits_2(tmp_path, scene_file):
    data_dir = tmp_path / "data"
    assert main(["synthesize", "--scene", str(scene_file),
                 "--out", str(data_dir)]) == 0
    (data_dir / "farfield.json").unlink()  # drop the sidecar
    assert main(["image", "--data", str(data_dir / "farfield.csv"),
                 "--out", str(tmp_path / "img"), *COARSE]) == 2


def test_predict_outputs_closed_form_peaks(tmp_path, scene_file):
    out = tmp_path / "pred"
    assert main(["predict", "--scene", str(scene_file),
                 "--out", str(out), *COARSE]) == 0
    report = json.loads((out / "predicted_peaks.json").read_text())
    assert report["offset_radius"] == pytest.approx(0.11721443248831907,
                                                    rel=1e-12)
    got = sorted((p["x"], p["y"]) for p in report["predicted"])
    assert np.allclose(got[0], [0.6171168799345768, 0.4171168799345768],
                       atol=1e-12)
    assert np.allclose(got[1], [0.7828831200654232, 0.5828831200654232],
                       atol=1e-12)
    assert (out / "analytic_map.csv").exists()
    assert (out / "analytic_map.pgm").exists()


def test_example_ex2_predicts_six_peaks(tmp_path):
    out = tmp_path / "ex2"
    assert main(["example", "ex2", "--out", str(out), *COARSE]) == 0
    report = json.loads((out / "report.json").read_text())
    assert len(report["predicted"]) == 6
    assert report["residual"] <= 1e-3


def test_example_ex2_peaks_land_away_from_centers(tmp_path):
    # With equal permeabilities every indicator peak is displaced from the
    # true centers; none may sit within 0.05 of any of them.
    out = tmp_path / "ex2"
    assert main(["example", "ex2", "--out", str(out), *COARSE]) == 0
    peaks = json.loads((out / "peaks.json").read_text())["peaks"]
    assert peaks
    centers = [(0.7, 0.5), (-0.7, 0.0), (0.2, -0.5)]
    for p in peaks:
        assert all(np.hypot(p["x"] - cx, p["y"] - cy) >= 0.05
                   for cx, cy in centers)


def test_example_ex3_top_pair_marks_weakest_inclusion(tmp_path):
    # The lowest-permeability inclusion scatters strongest, so the two
    # highest peaks must both sit nearest to its center (0.2, -0.5).
    out = tmp_path / "ex3"
    assert main(["example", "ex3", "--out", str(out), *COARSE]) == 0
    peaks = json.loads((out / "peaks.json").read_text())["peaks"]
    centers = [(0.7, 0.5), (-0.7, 0.0), (0.2, -0.5)]
    for p in peaks[:2]:
        dists = [np.hypot(p["x"] - cx, p["y"] - cy) for cx, cy in centers]
        assert int(np.argmin(dists)) == 2


def test_example_ex3_contrast_factors(tmp_path):
    out = tmp_path / "ex3"
    assert main(["example", "ex3", "--out", str(out), *COARSE]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["contrast_factors"] == pytest.approx(
        [1.0 / 11.0, 1.0 / 7.0, 1.0 / 3.0], rel=1e-15)


def test_example_thread_count_does_not_change_bytes(tmp_path):
    out1, out2 = tmp_path / "t1", tmp_path / "t4"
    assert main(["example", "ex1", "--out", str(out1), *COARSE,
                 "--threads", "1"]) == 0
    assert main(["example", "ex1", "--out", str(out2), *COARSE,
                 "--threads", "4"]) == 0
    names = ["farfield.csv", "map.csv", "map.pgm", "analytic_map.csv",
             "analytic_map.pgm", "peaks.json", "predicted_peaks.json",
             "report.json"]
    assert _read_bytes(out1, names) == _read_bytes(out2, names)
