"""End-to-end CLI runs: JSON payloads, CSV files, exit codes, determinism."""

import json
from fractions import Fraction

import pytest

from hkdensity import cli
from hkdensity.piecewise import PiecewisePoly
from hkdensity.rings import colength_series, nilpotency_index

XYZ_XY_RING = {"type": "monomial_quotient", "vars": 3, "relations": [[1, 1, 0]]}
CONIC_RING = {"type": "binomial_rewrite", "vars": 3, "lhs": [0, 2, 0], "rhs": [1, 0, 1]}
AXES_RING = {"type": "monomial_quotient", "vars": 2, "relations": [[1, 1]]}


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_json(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


# --- closed-form commands ------------------------------------------------------


def test_pspace_command(capsys):
    code, out, err = run_cli(["pspace", "--d", "1"], capsys)
    assert code == 0 and err == ""
    data = json.loads(out)
    assert data["ehk"] == "1"
    assert data["provenance"] == "closed_form"
    tent = PiecewisePoly.make([0, 1, 2], [[0, 1], [2, -1]])
    assert PiecewisePoly.from_json(data["density"]) == tent


def test_pspace_writes_json_file_matching_stdout(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run_cli(["pspace", "--d", "2", "--json", str(target)], capsys)
    assert code == 0
    assert target.read_text() == out


def test_pspace_csv_grid_samples(tmp_path, capsys):
    target = tmp_path / "density.csv"
    code, _, _ = run_cli(
        ["pspace", "--d", "1", "--csv", str(target), "--grid", "4"], capsys
    )
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0] == "x_rational,f_rational,f_decimal20"
    assert len(lines) == 1 + 9  # j = 0..8 over the support [0, 2]
    assert lines[3] == "1/2,1/2,0.5"
    assert lines[-1] == "2,0,0"


def test_reruns_are_byte_identical(capsys):
    _, first, _ = run_cli(["pspace", "--d", "3"], capsys)
    _, second, _ = run_cli(["pspace", "--d", "3"], capsys)
    assert first == second


def test_curve_command_with_rational_slope(capsys):
    code, out, _ = run_cli(
        ["curve", "--d", "2", "--strata", '[[2, "-1"]]', "--check-degree-sum"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["ehk"] == "3/2"
    assert data["density"]["breakpoints"] == ["0", "1", "3/2"]
    code, out, _ = run_cli(
        ["curve", "--d", "3", "--strata", '[[2, "-1/2"], [1, "-2"]]'], capsys
    )
    assert code == 0
    assert json.loads(out)["ehk"] == "9/4"


def test_curve_degree_sum_violation_fails(capsys):
    code, out, err = run_cli(
        ["curve", "--d", "2", "--strata", "[[1, -1]]", "--check-degree-sum"], capsys
    )
    assert code == 1 and out == ""
    error = json.loads(err)["error"]
    assert error["type"] == "ValueError"
    assert "strata sum" in error["message"]


def test_segre_command_p1_x_p1(capsys):
    code, out, _ = run_cli(
        ["segre", "--factors", '[{"pspace": 1}, {"pspace": 1}]'], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["ehk"] == "4/3"
    assert data["provenance"] == "segre_combined"


def test_segre_command_mixed_factor_kinds(capsys):
    piecewise_factor = {
        "piecewise": {
            "F": {"breakpoints": ["0", "2"], "pieces": [["0", "1"]]},
            "f": {"breakpoints": ["0", "1", "2"], "pieces": [["0", "1"], ["2", "-1"]]},
        }
    }
    code, out, _ = run_cli(
        ["segre", "--factors", json.dumps([{"pspace": 1}, piecewise_factor])], capsys
    )
    assert code == 0
    assert json.loads(out)["ehk"] == "4/3"
    code, out, _ = run_cli(
        ["segre", "--factors", '[{"curve": {"d": 2, "strata": [[2, -1]]}}]'], capsys
    )
    assert code == 0
    assert json.loads(out)["ehk"] == "3/2"


def test_segre_rejects_bad_factor_specs(capsys):
    code, _, err = run_cli(["segre", "--factors", "[]"], capsys)
    assert code == 1
    assert "non-empty" in json.loads(err)["error"]["message"]
    code, _, err = run_cli(["segre", "--factors", '[{"weighted": 2}]'], capsys)
    assert code == 1
    assert "unknown factor spec" in json.loads(err)["error"]["message"]


# --- estimation commands ----------------------------------------------------------


def test_estimate_command(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", XYZ_XY_RING)
    code, out, _ = run_cli(
        ["estimate", "--ring", ring, "--p", "2", "--n-max", "3"], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["p"] == 2
    assert data["final_n"] == 3
    assert data["ehk_riemann"][-1] == "15/8"
    assert len(data["sup_diffs"]) == 3


def test_estimate_with_ideal_file_and_csv(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", {"type": "polynomial", "vars": 2})
    ideal = write_json(tmp_path, "ideal.json", {"generators": [[2, 0], [0, 3]]})
    csv_path = tmp_path / "density.csv"
    code, out, _ = run_cli(
        [
            "estimate",
            "--ring",
            ring,
            "--ideal",
            ideal,
            "--p",
            "3",
            "--n-max",
            "2",
            "--csv",
            str(csv_path),
        ],
        capsys,
    )
    assert code == 0
    # box of side 2q x 3q: every level already gives the exact area 6
    assert json.loads(out)["ehk_riemann"] == ["6", "6"]
    assert csv_path.read_text().splitlines()[0] == "x_rational,f_rational,f_decimal20"


def test_ehk_command_polynomial_ring_is_constant_one(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", {"type": "polynomial", "vars": 3})
    code, out, _ = run_cli(["ehk", "--ring", ring, "--p", "2", "--n-max", "2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ehk_riemann"] == [["0", "1"], ["1", "1"], ["2", "1"]]


def test_dim1_command(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", AXES_RING)
    code, out, _ = run_cli(["dim1", "--ring", ring, "--p", "2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["ehk"] == "2"
    assert data["level"] == 2
    assert data["density"] == {"breakpoints": ["0", "1"], "pieces": [["2"]]}


def test_segre_ideal_round_trip_through_estimate(tmp_path, capsys):
    ring = write_json(
        tmp_path,
        "ring.json",
        {
            "type": "segre",
            "left": {"type": "polynomial", "vars": 2},
            "right": {"type": "polynomial", "vars": 2},
        },
    )
    ideal = write_json(
        tmp_path,
        "ideal.json",
        {"left": {"generators": [[1, 0], [0, 1]]}, "right": {"generators": [[1, 0], [0, 1]]}},
    )
    code, out, _ = run_cli(
        ["ehk", "--ring", ring, "--ideal", ideal, "--p", "2", "--n-max", "3"], capsys
    )
    assert code == 0
    values = dict(json.loads(out)["ehk_riemann"])
    assert values["3"] == str(Fraction(4 * 8**3 - 8, 3 * 8**3))


# --- the compare gate ----------------------------------------------------------------


def test_compare_passes_within_tol(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", XYZ_XY_RING)
    code, out, _ = run_cli(
        ["compare", "--ring", ring, "--p", "2", "--n-max", "5"], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["within_tol"] is True
    assert data["closed_form_ehk"] == "2"
    assert data["riemann_ehk"] == "63/32"
    assert data["difference"] == "1/32"
    assert data["tol"] == "1/20"


def test_compare_fails_outside_tol(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", XYZ_XY_RING)
    code, out, err = run_cli(
        ["compare", "--ring", ring, "--p", "2", "--n-max", "3"], capsys
    )
    assert code == 1 and err == ""  # a clean run, just outside tolerance
    data = json.loads(out)
    assert data["within_tol"] is False
    assert data["difference"] == "1/8"


def test_compare_conic_against_curve_strata(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", CONIC_RING)
    code, out, _ = run_cli(
        [
            "compare",
            "--ring",
            ring,
            "--p",
            "2",
            "--n-max",
            "3",
            "--strata",
            "[[2, -1]]",
        ],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["closed_form_ehk"] == "3/2"
    assert data["riemann_ehk"] == "3/2"
    assert data["difference"] == "0"


def test_compare_binomial_ring_requires_strata(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", CONIC_RING)
    code, _, err = run_cli(
        ["compare", "--ring", ring, "--p", "2", "--n-max", "2"], capsys
    )
    assert code == 1
    assert "--strata" in json.loads(err)["error"]["message"]


def test_compare_segre_of_polynomial_rings(tmp_path, capsys):
    ring = write_json(
        tmp_path,
        "ring.json",
        {
            "type": "segre",
            "left": {"type": "polynomial", "vars": 2},
            "right": {"type": "polynomial", "vars": 2},
        },
    )
    code, out, _ = run_cli(
        ["compare", "--ring", ring, "--p", "2", "--n-max", "4"], capsys
    )
    assert code == 0
    data = json.loads(out)
    assert data["closed_form_ehk"] == "4/3"
    assert data["within_tol"] is True


# --- failure and environment paths ------------------------------------------------------


def test_missing_ring_file_reports_error(capsys):
    code, out, err = run_cli(
        ["estimate", "--ring", "/nonexistent/ring.json", "--p", "2", "--n-max", "1"],
        capsys,
    )
    assert code == 1 and out == ""
    assert json.loads(err)["error"]["type"] == "FileNotFoundError"


def test_unknown_ring_type_reports_error(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", {"type": "power_series", "vars": 2})
    code, _, err = run_cli(["ehk", "--ring", ring, "--p", "2", "--n-max", "1"], capsys)
    assert code == 1
    assert "unknown ring type" in json.loads(err)["error"]["message"]


def test_composite_p_reports_error(tmp_path, capsys):
    ring = write_json(tmp_path, "ring.json", XYZ_XY_RING)
    code, _, err = run_cli(["ehk", "--ring", ring, "--p", "6", "--n-max", "1"], capsys)
    assert code == 1
    assert "prime" in json.loads(err)["error"]["message"]


def test_missing_required_argument_exits_via_argparse(capsys):
    with pytest.raises(SystemExit):
        cli.main(["pspace"])
    capsys.readouterr()


def _clear_colength_caches():
    colength_series.cache_clear()
    nilpotency_index.cache_clear()


def test_numpy_kernel_env_gives_identical_output(tmp_path, capsys, monkeypatch):
    ring = write_json(tmp_path, "ring.json", CONIC_RING)
    argv = ["ehk", "--ring", ring, "--p", "2", "--n-max", "2"]
    _clear_colength_caches()
    monkeypatch.setenv("HKD_KERNEL", "numba")
    _, jit_out, _ = run_cli(argv, capsys)
    _clear_colength_caches()
    monkeypatch.setenv("HKD_KERNEL", "numpy")
    _, np_out, _ = run_cli(argv, capsys)
    assert jit_out == np_out
    assert json.loads(np_out)["ehk_riemann"][-1] == ["2", "3/2"]


def test_thread_pool_runs_are_deterministic(tmp_path, capsys, monkeypatch):
    ring = write_json(tmp_path, "ring.json", CONIC_RING)
    argv = ["estimate", "--ring", ring, "--p", "2", "--n-max", "3"]
    monkeypatch.setenv("HKD_THREADS", "4")
    _clear_colength_caches()
    _, first, _ = run_cli(argv, capsys)
    _clear_colength_caches()
    _, second, _ = run_cli(argv, capsys)
    assert first == second
    monkeypatch.setenv("HKD_THREADS", "0")
    _clear_colength_caches()
    code, _, err = run_cli(argv, capsys)
    assert code == 1
    assert "HKD_THREADS" in json.loads(err)["error"]["message"]