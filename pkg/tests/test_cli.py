import json

import numpy as np
import pytest

from fastapi.testclient import TestClient

from maxtree.cli import main
from maxtree.matrixio import loads_matrix
from maxtree.service.app import app

from helpers import EXAMPLE_ROWS, example_matrix


@pytest.fixture()
def example_file(tmp_path):
    path = tmp_path / "example.json"
    path.write_text(json.dumps({"n": 4, "rows": EXAMPLE_ROWS}))
    return str(path)


def run_cli(capsys, argv, expect=0):
    rc = main(argv)
    out, err = capsys.readouterr()
    assert rc == expect, err
    return out, err


def test_rst_command_golden(example_file, capsys):
    out, _ = run_cli(capsys, ["rst", example_file])
    body = json.loads(out)
    assert body["w"] == pytest.approx([0.2625, 0.21875, 0.75, 0.65625], abs=1e-12)
    assert len(body["witnesses"]) == 4


def test_mu_command(example_file, capsys):
    out, _ = run_cli(capsys, ["mu", example_file])
    assert json.loads(out) == {"mu": 1.0}


def test_kleene_command(example_file, capsys):
    out, _ = run_cli(capsys, ["kleene", example_file])
    star = np.array(json.loads(out)["star"])
    assert star[2, 0] == pytest.approx(7 / 24, abs=1e-12)


def test_reports_are_byte_identical(example_file, capsys):
    first, _ = run_cli(capsys, ["rst", example_file])
    second, _ = run_cli(capsys, ["rst", example_file])
    assert first == second


def test_echo_round_trip_bit_exact(example_file, tmp_path, capsys):
    out, _ = run_cli(capsys, ["echo", example_file])
    reparsed = loads_matrix(out)
    assert np.array_equal(reparsed, example_matrix())
    # a second pass over the canonical form is byte-stable
    canon = tmp_path / "canon.json"
    canon.write_text(out)
    out2, _ = run_cli(capsys, ["echo", str(canon)])
    assert out2 == out


def test_csv_format_dequantize(example_file, capsys):
    out, _ = run_cli(capsys, ["dequantize", example_file, "--p", "4,16", "--format", "csv"])
    lines = out.strip().splitlines()
    assert lines[0] == "p,err_matrix,err_vector,bound"
    assert len(lines) == 3
    p, errm, errv, bound = lines[2].split(",")
    assert p == "16"
    assert float(errv) <= float(bound)


def test_csv_format_rst(example_file, capsys):
    out, _ = run_cli(capsys, ["rst", example_file, "--format", "csv"])
    lines = out.strip().splitlines()
    assert lines[0] == "i,w"
    assert float(lines[1].split(",")[1]) == pytest.approx(0.2625, abs=1e-12)


def test_verify_command(example_file, capsys):
    out, _ = run_cli(capsys, ["verify", example_file])
    assert json.loads(out)["passed"] is True


def test_rank_command(tmp_path, capsys):
    path = tmp_path / "sr.json"
    path.write_text(json.dumps({"n": 2, "rows": [["1", "2"], ["1/2", "1"]]}))
    out, _ = run_cli(capsys, ["rank", str(path)])
    body = json.loads(out)
    assert body["order"] == [1, 2]


def test_judges_command(tmp_path, capsys):
    judges = tmp_path / "judges.csv"
    judges.write_text("1,0.5\n0.25,1\n")
    competitors = tmp_path / "competitors.csv"
    competitors.write_text("0.6,1\n1,0.2\n")
    out, _ = run_cli(capsys, ["judges", str(judges), str(competitors)])
    body = json.loads(out)
    assert body["chat"]["n"] == 2
    assert sorted(body["order"]) == [1, 2]


def test_domain_error_exit_code(tmp_path, capsys):
    path = tmp_path / "reducible.json"
    path.write_text(json.dumps({"n": 2, "rows": [[1, 1], [0, 1]]}))
    _, err = run_cli(capsys, ["rst", str(path)], expect=1)
    assert "reducible" in err


def test_non_sr_exit_code(tmp_path, capsys):
    path = tmp_path / "notsr.json"
    path.write_text(json.dumps({"n": 2, "rows": [[1, 2], [1, 1]]}))
    _, err = run_cli(capsys, ["rank", str(path)], expect=1)
    assert "reciprocal" in err


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 2, "rows": [[1, "x"], [1, 1]]}')
    run_cli(capsys, ["mu", str(path)], expect=2)


def test_missing_file_exit_code(capsys):
    run_cli(capsys, ["mu", "/nonexistent/matrix.json"], expect=2)


def test_remote_mode_against_asgi_transport(example_file, capsys):
    client = TestClient(app)
    rc = main(["--server", "http://service", "rst", example_file], client=client)
    out, _ = capsys.readouterr()
    assert rc == 0
    body = json.loads(out)
    assert body["w"] == pytest.approx([0.2625, 0.21875, 0.75, 0.65625], abs=1e-12)
    client.close()


def test_remote_mode_maps_domain_errors(tmp_path, capsys):
    client = TestClient(app)
    path = tmp_path / "reducible.json"
    path.write_text(json.dumps({"n": 2, "rows": [[1, 1], [0, 1]]}))
    rc = main(["--server", "http://service", "rst", str(path)], client=client)
    _, err = capsys.readouterr()
    assert rc == 1
    assert "reducible" in err
    client.close()


def test_remote_and_local_outputs_match(example_file, capsys):
    client = TestClient(app)
    rc = main(["--server", "http://service", "kleene", example_file], client=client)
    remote, _ = capsys.readouterr()
    client.close()
    assert rc == 0
    rc = main(["kleene", example_file])
    local, _ = capsys.readouterr()
    assert rc == 0
    assert remote == local
