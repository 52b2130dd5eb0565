import math

import pytest

import polysieve as ps


def test_basis_values():
    assert ps.eval("legendre", 2, 0.5) == pytest.approx(-0.125, abs=1e-15)
    assert ps.eval("hermite", 1, 1.0) == 2.0
    assert ps.gamma("legendre", 1) == pytest.approx(2 / 3)
    assert ps.weight("laguerre", 1.0) == pytest.approx(math.exp(-1))
    assert ps.derivative_coeffs("hermite", 2, 1) == [0.0, 4.0]
    assert ps.gamma_tilde("legendre", 1, 1, "lemma") == pytest.approx(2.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        ps.eval("legendre", 1, 2.0)
    with pytest.raises(OverflowError):
        ps.gamma("hermite", 200)
    with pytest.raises(ValueError):
        ps.eval("chebyshev", 1, 0.0)


def test_quadrature_and_rules():
    nodes, weights = ps.gauss_rule("legendre", 2)
    assert nodes == pytest.approx([-1 / math.sqrt(3), 1 / math.sqrt(3)])
    assert weights == pytest.approx([1.0, 1.0])
    assert [ps.k_n(n) for n in (100, 500, 1000, 1500, 2000)] == [4, 6, 6, 8, 8]
    assert ps.theoretical_sigmas("legendre", 2, 3)[2] == pytest.approx(0.3952847075)


def test_sampling_and_divergence():
    y = ps.draw("supp-exponential", "laguerre", 20000, 3)
    assert len(y) == 20000
    assert sum(y) / len(y) == pytest.approx(0.5, abs=0.02)
    assert ps.draw("exp1-sine", "legendre", 5, 9) == ps.draw("exp1-sine", "legendre", 5, 9)
    assert ps.hellinger_sq("legendre", [0.5], [0.5]) == 0.0


def test_checks_and_experiment():
    passed, ratio = ps.hardy_check(200, 20, 1)
    assert passed and ratio <= 1
    report = ps.run_experiment("exp2", n=[100], m=2, iterations=1200, burn_in=400)
    assert len(report["fits"]) == 2
    assert all(0 <= f["hellinger"] <= math.sqrt(2) for f in report["fits"])


def test_cli_in_process():
    code, out, _ = ps.cli(["check", "orthogonality"])
    assert code == 0
    code, _, err = ps.cli(["experiment", "exp9"])
    assert code == 2
