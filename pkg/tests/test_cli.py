import json

import numpy as np
import pytest

from quadgen.cli import main
from quadgen.quadrature import QuadratureRule


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nodes_chebyshev(capsys):
    code, out, _ = run(capsys, "nodes", "--a", "1", "--n", "4")
    assert code == 0
    table = json.loads(out)["tables"][0]
    x = np.array([float(v) for v in table["nodes"]])
    np.testing.assert_allclose(x, np.sort(np.cos((2 * np.arange(1, 5) - 1) * np.pi / 8)), atol=1e-15)
    assert float(table["max_deviation"]) < 1e-13


def test_nodes_closed_form_agrees_with_phase(tmp_path):
    a, b = tmp_path / "cf.csv", tmp_path / "ph.csv"
    common = ["nodes", "--a", "1/2", "--zeta", "3", "--n", "8", "--format", "csv"]
    assert main(common + ["--closed-form", "--out", str(a)]) == 0
    assert main(common + ["--out", str(b)]) == 0

    def rounded(path):
        rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
        return [f"{float(r[2]):.10f}" for r in rows]

    assert rounded(a) == rounded(b)


@pytest.mark.parametrize("argv", [
    ["nodes", "--a", "1/2", "--zeta", "1.5", "--n", "4"],
    ["nodes", "--a", "1/2", "--zeta", "2", "--n", "4", "--closed-form"],
    ["nodes", "--a", "3/2", "--n", "4"],
    ["nodes", "--a", "1/2", "--n", "4"],
    ["nodes", "--a", "1", "--n-range", "4:x"],
    ["nodes", "--a", "1"],
    ["weights", "--a", "1/3", "--zeta", "3", "--n", "4", "--method", "varying"],
])
def test_invalid_config_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_admissibility_failure_exit_3(capsys):
    code, _, err = run(capsys, "nodes", "--a", "1", "--n", "8", "--kind", "equispaced")
    assert code == 3 and "admissibility" in err


def test_nodes_deterministic_with_seed(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        p = tmp_path / name
        assert main(["nodes", "--a", "1/2", "--zeta", "3", "--n", "20", "--A", "1", "--ell", "0.5",
                     "--seed", "7", "--tol", "1e-3", "--out", str(p)]) == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_weights_round_trip(tmp_path, fmt):
    p = tmp_path / f"rule.{fmt}"
    assert main(["weights", "--a", "0", "--zeta", "3", "--n", "12", "--format", fmt, "--out", str(p)]) == 0
    rule = QuadratureRule.load(p)
    assert rule.n == 12 and abs(sum(rule.weights) - 1) < 1e-14
    if fmt == "json":
        again = QuadratureRule.load(p)
        assert again.nodes == rule.nodes and again.weights == rule.weights


def test_weights_varying(capsys):
    code, out, _ = run(capsys, "weights", "--a", "1/2", "--zeta", "3", "--n", "4", "--method", "varying")
    rule = QuadratureRule.from_json(out)
    assert code == 0 and rule.nominal_exactness == 3 and min(rule.weights) > 0


def test_study_exit_codes(capsys):
    code, out, err = run(capsys, "study", "--a", "1/2", "--zeta", "3", "--n-range", "8:32:8")
    assert code == 0 and "n=32" in err
    assert json.loads(out)["verdicts"]["polya_bounded"]
    code, _, _ = run(capsys, "study", "--a", "1", "--kind", "equispaced", "--n", "8,16,32,64")
    assert code == 1


def test_asym(capsys):
    code, out, _ = run(capsys, "asym", "--a", "1/2", "--zeta", "3", "--n-range", "4:12:4", "--format", "csv")
    assert code == 0 and out.splitlines()[0].startswith("n,d_n,sup_dev")


def test_balayage_with_masses_file(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text('{"masses": [[2, 2], [2, -2]], "a": "1/2"}')
    code, out, _ = run(capsys, "balayage", "--masses", str(p), "--points", "5")
    doc = json.loads(out)
    assert code == 0 and len(doc["density"]) == 5 and doc["a"] == "1/2"
    tails = [float(v) for v in doc["tail"]]
    assert all(b < a for a, b in zip(tails, tails[1:]))
