import math

import pytest

import optdesign as od


def test_version():
    assert od.__version__ == "0.1.0"


def test_design_measure():
    d = od.DesignMeasure([0.1, 0.5], [0.25, 0.75])
    assert d.points == [0.1, 0.5]
    assert d.weights == [0.25, 0.75]
    assert len(d) == 2
    with pytest.raises(ValueError):
        od.DesignMeasure([0.1], [0.5, 0.5])


def test_information_matrix_and_log_det():
    exp2 = od.model("exp2")
    beta = 4.0
    d = od.DesignMeasure([0.0, 1.0 / beta], [0.5, 0.5])
    m = od.information_matrix(d, exp2, beta)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert det == pytest.approx(1.0 / (4.0 * (math.e * beta) ** 2), rel=1e-12)
    assert od.log_det(d, exp2, beta) == pytest.approx(math.log(det), rel=1e-12)
    assert od.log_det(od.DesignMeasure([0.3], [1.0]), exp2, beta) == -math.inf


def test_models():
    assert od.model("exp3").m == 3
    assert od.model("exp3").fixed_support == [0.0, 1.0]
    assert od.model("logistic", 12.0).interval == (0.0, 12.0)
    with pytest.raises(ValueError):
        od.model("nope")


def test_solve_local():
    s = od.solve_local(od.model("exp1"), 2.0)
    assert s.certificate.passed
    assert s.design.points[0] == pytest.approx(0.5, abs=1e-8)
    assert s.criterion_value == pytest.approx((2 * math.e) ** -2, rel=1e-10)


def test_solve_bayes():
    s = od.solve_bayes(od.model("exp1"), "uniform:1:40")
    assert s.certificate.passed
    assert len(s.design) == 2
    assert s.design.points[0] == pytest.approx(0.048, abs=0.01)
    assert od.bayes_criterion(s.design, od.model("exp1"), "uniform:1:40") == pytest.approx(
        s.criterion_value, rel=1e-9
    )


def test_solve_maximin():
    exp1 = od.model("exp1")
    s = od.solve_maximin(exp1, 1.0, 10.0)
    assert s.certificate.passed
    assert s.design.points == pytest.approx([0.142, 0.771], abs=0.01)
    assert s.certificate.least_favorable_weights
    phi, _ = od.maximin_criterion(s.design, exp1, 1.0, 10.0)
    assert phi == pytest.approx(s.criterion_value, rel=1e-9)
    assert od.support_count(s.design, exp1) == 2


def test_q_efficiency():
    assert od.q_efficiency(od.model("exp1"), 2.0, 1.0) == pytest.approx(4 * math.exp(-2), rel=1e-12)


def test_canonical_merge():
    d = od.canonical_merge(od.DesignMeasure([0.5, 0.5 + 1e-9], [0.5, 0.5]), 1e-6, 0.0)
    assert len(d) == 1


def test_lower_bounds():
    design, n, betas = od.construct_lower_bound_design(
        od.model("exp1"), "log", 1.0, math.exp(4.0), math.log(2.0)
    )
    assert n == 3
    assert sorted(design.points) == pytest.approx(
        [math.exp(-10 / 3), math.exp(-2), math.exp(-2 / 3)], rel=1e-12
    )
    report = od.verify_lower_bounds(od.model("exp1"), "log", 1.0, math.exp(4.0), math.log(2.0))
    assert report["passed"]
    assert report["quantities"]["phi"] >= math.log(2.0) / 8


def test_growth_study():
    rows = od.growth_study(od.model("exp1"), "bayes", [10.0, 40.0])
    assert [r["support_count"] for r in rows] == [1, 2]
    assert all(r["certificate_passed"] for r in rows)
