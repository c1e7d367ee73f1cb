import json

import numpy as np
import pytest

from app.cli import main
from app.imaging.imageio import read_binary_layer, read_general_layer, read_tri_layer, write_image
from app.models.images import RgbImage
from tests.helpers import uniform_histogram_image, zero_layers


@pytest.fixture
def triple(tmp_path, capsys):
    prefix = tmp_path / "fixture"
    code = main(["gen", "--width", "96", "--height", "80", "--colors", "4",
                 "--seed", "3", "--out-prefix", str(prefix)])
    assert code == 0
    return json.loads(capsys.readouterr().out)


def embed_args(triple, out):
    return ["embed", "--general", triple["general"], "--binary", triple["binary"],
            "--tri", triple["tri"], "--out", str(out)]


def test_gen_is_deterministic(tmp_path, triple, capsys):
    main(["gen", "--width", "96", "--height", "80", "--colors", "4",
          "--seed", "3", "--out-prefix", str(tmp_path / "again")])
    again = json.loads(capsys.readouterr().out)
    assert read_general_layer(again["general"]) == read_general_layer(triple["general"])
    assert read_tri_layer(again["tri"]) == read_tri_layer(triple["tri"])


def test_gen_writes_sparse_illustration(triple):
    general = read_general_layer(triple["general"])
    for index in range(3):
        assert len(np.unique(general.samples[..., index])) <= 4


def test_embed_then_extract(tmp_path, triple, capsys):
    marked = tmp_path / "marked.png"
    report = tmp_path / "report.json"
    assert main(embed_args(triple, marked) + ["--report", str(report)]) == 0
    assert marked.exists()

    data = json.loads(report.read_text())
    assert data["report_version"] == 1
    assert [c["channel"] for c in data["channels"]] == ["R", "B"]
    assert data["metrics"]["g"]["psnr"] == "inf"

    outputs = {name: tmp_path / f"restored_{name}.png" for name in ("general", "binary", "tri")}
    code = main(["extract", "--marked", str(marked),
                 "--out-general", str(outputs["general"]),
                 "--out-binary", str(outputs["binary"]),
                 "--out-tri", str(outputs["tri"])])
    assert code == 0
    assert read_general_layer(outputs["general"]) == read_general_layer(triple["general"])
    assert read_binary_layer(outputs["binary"]) == read_binary_layer(triple["binary"])
    assert read_tri_layer(outputs["tri"]) == read_tri_layer(triple["tri"])


def test_capacity_matches_embed(tmp_path, triple, capsys):
    assert main(["capacity", "--general", triple["general"], "--binary", triple["binary"],
                 "--tri", triple["tri"]]) == 0
    plan = json.loads(capsys.readouterr().out)
    assert plan["feasible"] is True

    report = tmp_path / "report.json"
    assert main(embed_args(triple, tmp_path / "marked.png") + ["--report", str(report)]) == 0
    embedded = json.loads(report.read_text())
    assert [c["rounds"] for c in plan["channels"]] == [c["rounds"] for c in embedded["channels"]]


def test_metrics_of_identical_files(triple, capsys):
    assert main(["metrics", "--a", triple["general"], "--b", triple["general"]]) == 0
    report = json.loads(capsys.readouterr().out)
    for key in ("luminance", "r", "g", "b"):
        assert report[key]["psnr"] == "inf"
        assert report[key]["mssim"] == 1.0


def test_shortfall_exits_2(tmp_path, capsys):
    general = uniform_histogram_image(64, 64)
    binary, tri = zero_layers(64, 64)
    paths = {name: tmp_path / f"{name}.png" for name in ("general", "binary", "tri")}
    write_image(general, paths["general"])
    write_image(binary, paths["binary"])
    write_image(tri, paths["tri"])

    code = main(["embed", "--general", str(paths["general"]), "--binary", str(paths["binary"]),
                 "--tri", str(paths["tri"]), "--out", str(tmp_path / "marked.png")])
    assert code == 2
    assert "shortfall:" in capsys.readouterr().err
    assert not (tmp_path / "marked.png").exists()


def test_missing_file_exits_1(tmp_path, triple, capsys):
    args = embed_args(triple, tmp_path / "marked.png")
    args[args.index("--general") + 1] = str(tmp_path / "absent.png")
    assert main(args) == 1
    assert "error:" in capsys.readouterr().err


def test_dimension_mismatch_exits_3(tmp_path, triple, capsys):
    binary, _ = zero_layers(40, 40)
    small = tmp_path / "small.png"
    write_image(binary, small)
    args = embed_args(triple, tmp_path / "marked.png")
    args[args.index("--binary") + 1] = str(small)
    assert main(args) == 3


def test_unmarked_image_exits_4(tmp_path, capsys):
    plain = tmp_path / "plain.png"
    write_image(RgbImage(np.zeros((32, 32, 3), dtype=np.uint8)), plain)
    code = main(["extract", "--marked", str(plain),
                 "--out-general", str(tmp_path / "g.png"),
                 "--out-binary", str(tmp_path / "b.png"),
                 "--out-tri", str(tmp_path / "t.png")])
    assert code == 4
    assert not (tmp_path / "g.png").exists()
