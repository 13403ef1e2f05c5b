from fractions import Fraction
from math import comb, log

import pytest

import aokb


def test_field_info():
    q = aokb.field_info("Q")
    assert q["degree"] == 1 and q["discriminant"] == "1"
    g = aokb.field_info("Q(sqrt(-1))")
    assert g["degree"] == 2 and g["discriminant"] == "-4"
    assert g["minkowski_constant"] == pytest.approx(log(2) + 0.25 * log(4), abs=1e-12)
    with pytest.raises(aokb.Error):
        aokb.field_info("Q(sqrt(4))")


def test_h0_of_unit_box_powers():
    # box(1,1)^k has binomial weights, so H0 is a product of [-C(k,j), C(k,j)]
    for k in range(1, 5):
        _, value = aokb.h0_power("box:1,1", k)
        expected = sum(log(2 * comb(k, j) + 1) for j in range(k + 1))
        assert value == pytest.approx(expected, rel=1e-12)


def test_valuation_image_level_one():
    assert aokb.valuation_image("box:1,1", 2, 0, 1) == [(0, 0), (0, 1)]


def test_lambda_points_and_hull():
    pts = aokb.lambda_points("box:1,1", 2, 0, 4)
    assert pts == sorted(set(pts))
    assert all(isinstance(x, Fraction) for p in pts for x in p)
    hull = aokb.convex_hull(pts)
    assert hull["area"] > 0
    assert not hull["degenerate"]
    square = aokb.convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (Fraction(1, 2), Fraction(1, 2))])
    assert square["area"] == 1
    assert len(square["vertices"]) == 4


def test_commands():
    code, report, csv, _ = aokb.verify_filtration("Q", instances=10)
    assert code == 0
    assert report["result"]["Q"]["violations"] == 0
    assert csv.count("\n") == 11

    code, report, _, _ = aokb.body(kmax=6)
    assert code == 0
    assert report["result"]["big"]

    code, report, _, _ = aokb.bc_compare(k=4, grid=8)
    assert code == 0
    assert [row["side"] for row in report["result"]["table"]] == ["archimedean", "finite"]


def test_config_errors_and_budget():
    code, report, _, _ = aokb.body(kmax=1)
    assert code == 2 and "error" in report
    with pytest.raises(ValueError):
        aokb.run({"command": "body", "colour": "red"})
    with pytest.raises(aokb.BudgetExceeded):
        aokb.h0_power("fs:1:-1", 3, budget=1000)


def test_worker_count_does_not_matter():
    a = aokb.run({"command": "body", "kmax": 6, "workers": 1})
    b = aokb.run({"command": "body", "kmax": 6, "workers": 3})
    assert a == b
