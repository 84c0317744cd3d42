import json
import subprocess
import sys

import pytest

from tetrabeacon.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def spiral3_file(tmp_path, capsys):
    out = tmp_path / "spiral3.json"
    code, _, _ = run(capsys, "gen", "spiral3d", "--corners", "3",
                     "-o", str(out))
    assert code == 0
    return out


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0


def test_usage_error_exits_2(capsys):
    assert main(["no-such-command"]) == 2


def test_gen_bound_pipeline(capsys, spiral3_file):
    code, out, _ = run(capsys, "bound", str(spiral3_file))
    assert code == 0
    assert out.strip() == "m=8, budget=3"


def test_bound_spiral5_message(capsys, tmp_path):
    out_file = tmp_path / "s5.json"
    run(capsys, "gen", "spiral3d", "--corners", "5", "-o", str(out_file))
    code, out, _ = run(capsys, "bound", str(out_file))
    assert code == 0
    assert out.strip() == "m=14, budget=5"


def test_validate_ok_and_broken(capsys, tmp_path, spiral3_file):
    code, out, _ = run(capsys, "validate", str(spiral3_file))
    assert code == 0
    data = json.loads(spiral3_file.read_text())
    data["tets"].append(data["tets"][0])  # duplicate tetrahedron
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps(data))
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2
    assert "duplicate" in err


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/file.json")
    assert code == 2
    assert "error:" in err


def test_dual_json_and_dot(capsys, spiral3_file):
    code, out, _ = run(capsys, "dual", str(spiral3_file))
    assert code == 0
    data = json.loads(out)
    assert data["nodes"] == 8
    assert data["edges"] == [[i, i + 1] for i in range(7)]
    code, out, _ = run(capsys, "dual", str(spiral3_file), "--dot")
    assert code == 0
    assert out.startswith("graph dual {")


def test_place_verify_pipeline(capsys, tmp_path, spiral3_file):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "place", str(spiral3_file),
                       "--certificate", str(cert))
    assert code == 0
    assert "budget=3" in out
    data = json.loads(cert.read_text())
    assert len(data["beacons"]) <= data["budget"]

    code, out, _ = run(capsys, "verify", str(spiral3_file),
                       "--beacons", str(cert))
    assert code == 0
    assert "all routable" in out


def test_verify_report_written(capsys, tmp_path, spiral3_file):
    cert = tmp_path / "cert.json"
    run(capsys, "place", str(spiral3_file), "--certificate", str(cert))
    report = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", str(spiral3_file),
                     "--beacons", str(cert), "--report", str(report))
    assert code == 0
    data = json.loads(report.read_text())
    assert data["command"] == "verify"
    assert data["results"]["ok"] is True
    assert "inputDigest" in data and "toolVersion" in data


def test_verify_failure_exit_code(capsys, tmp_path, spiral3_file):
    code, out, _ = run(capsys, "verify", str(spiral3_file),
                       "--beacons", "1.0,0.0,0.5")
    assert code == 1


def test_attract_reached_and_stuck(capsys, tmp_path, spiral3_file):
    # beacon and point in the same tetrahedron: reached
    code, out, _ = run(capsys, "attract", str(spiral3_file),
                       "--point", "1,0,0", "--beacon", "0.9,0.05,0.05")
    assert code == 0 and "reached" in out
    # start pulled by the far end: stuck
    path_file = tmp_path / "path.json"
    code, out, _ = run(capsys, "attract", str(spiral3_file),
                       "--point", "1,0,0", "--beacon", "-1,1.7320508075688772,0",
                       "--path", str(path_file))
    assert code == 1 and "stuck" in out
    assert json.loads(path_file.read_text())["terminal"]["status"] == "stuck"


def test_attract_on_polygon_file(capsys, tmp_path):
    poly_file = tmp_path / "poly.json"
    run(capsys, "gen", "spiral2d", "--corners", "2", "-o", str(poly_file))
    code, out, _ = run(capsys, "attract", str(poly_file),
                       "--point", "1,0", "--beacon", "2,0")
    assert code == 1 and "stuck" in out


def test_route_command(capsys, tmp_path, spiral3_file):
    cert = tmp_path / "cert.json"
    run(capsys, "place", str(spiral3_file), "--certificate", str(cert))
    code, out, _ = run(capsys, "route", str(spiral3_file),
                       "--from", "1,0,0", "--to", "-1,1.7320508075688772,0",
                       "--beacons", str(cert))
    assert code == 0
    assert "routable via" in out
    code, out, _ = run(capsys, "route", str(spiral3_file),
                       "--from", "1,0,0", "--to", "-1,1.7320508075688772,0")
    assert code == 1
    assert "not routable" in out


def test_lower_bound_command(capsys):
    code, out, _ = run(capsys, "lower-bound", "--corners", "2",
                       "--budget", "1", "--grid", "3")
    assert code == 0
    assert "no routing subset" in out


def test_export_off_and_obj(capsys, tmp_path, spiral3_file):
    off = tmp_path / "out.off"
    code, _, _ = run(capsys, "export", str(spiral3_file),
                     "--format", "off", "-o", str(off))
    assert code == 0
    assert off.read_text().startswith("OFF")
    obj = tmp_path / "out.obj"
    code, _, _ = run(capsys, "export", str(spiral3_file),
                     "--format", "obj", "-o", str(obj))
    assert code == 0
    assert "v " in obj.read_text()


def test_gen_figure_and_tower(capsys, tmp_path):
    fig = tmp_path / "fig.json"
    code, _, _ = run(capsys, "gen", "figure", "--name", "star", "-o", str(fig))
    assert code == 0
    code, _, _ = run(capsys, "validate", str(fig))
    assert code == 0
    tower = tmp_path / "tower.json"
    code, _, _ = run(capsys, "gen", "tower", "--levels", "3", "--seed", "4",
                     "-o", str(tower))
    assert code == 0
    code, _, _ = run(capsys, "validate", str(tower))
    assert code == 0


def test_stdin_pipeline_subprocess():
    gen = subprocess.run([sys.executable, "-m", "tetrabeacon", "gen",
                          "spiral3d", "--corners", "2"],
                         capture_output=True, text=True)
    assert gen.returncode == 0
    place = subprocess.run([sys.executable, "-m", "tetrabeacon", "place", "-"],
                           input=gen.stdout, capture_output=True, text=True)
    assert place.returncode == 0
    assert "budget=2" in place.stdout
