"""Tests for instance parameter derivation."""
from fractions import Fraction

import pytest

from exceptions import DegreeError, DivisibilityError, EdgeSizeError, ParamsValidationError, TooFewVerticesError
from services.params import derive_params


def test_small_instance_constants():
    p = derive_params(6, 2, 3)
    assert (p.M, p.r, p.m, p.red_edges, p.red_prefix_len) == (4, 9, 0, 0, 0)
    assert p.c == Fraction(1, 19)


def test_first_instance_with_red_edges():
    p = derive_params(19, 3, 3)
    assert p.M == 19
    assert p.m == 1
    assert p.red_edges == 9
    assert p.red_prefix_len == 27
    assert p.green_edges == 10


def test_k4_constants():
    p = derive_params(8, 2, 4)
    assert (p.M, p.r, p.m) == (4, 17, 0)
    assert p.c == Fraction(1, 35)


@pytest.mark.parametrize("args, error", [
    ((5, 2, 3), DivisibilityError),
    ((2, 3, 3), TooFewVerticesError),
    ((6, 2, 2), EdgeSizeError),
    ((3, 0, 3), DegreeError),
])
def test_validation_errors(args, error):
    with pytest.raises(error):
        derive_params(*args)
    with pytest.raises(ParamsValidationError):
        derive_params(*args)
    with pytest.raises(ValueError):
        derive_params(*args)


def test_red_prefix_is_below_half_of_the_sequence():
    for k in (3, 4, 5):
        for n in range(k, 200):
            for d in range(1, 8):
                if (n * d) % k:
                    continue
                p = derive_params(n, d, k)
                assert p.r * p.m * k <= p.red_prefix_len
                assert 2 * p.red_prefix_len < n * d
                assert 2 * p.green_edges >= p.M


def test_derivation_is_pure():
    assert derive_params(57, 6, 3) == derive_params(57, 6, 3)


def test_red_edges_override():
    p = derive_params(3, 3, 3, red_edges=1)
    assert p.red_edges == 1
    assert p.red_prefix_len == 3
    with pytest.raises(ValueError):
        derive_params(3, 3, 3, red_edges=4)


def test_loop_threshold_is_exact():
    p = derive_params(6, 2, 3)
    assert p.L_fourth_power == 24
    assert p.lambda_within_L(2)
    assert not p.lambda_within_L(3)
    assert p.at_least_L(3)
    assert not p.at_least_L(2)
    assert not p.at_least_L(-5)


def test_phi_concentration_threshold():
    p = derive_params(6, 2, 3)
    # n^3 d^4 = 3456, so deviations up to 7 pass and 8 fails.
    assert p.phi_concentrated(12, Fraction(12))
    assert p.phi_concentrated(19, Fraction(12))
    assert p.phi_concentrated(5, Fraction(12))
    assert not p.phi_concentrated(20, Fraction(12))
    assert not p.phi_concentrated(4, Fraction(12))


def test_report_fields():
    report = derive_params(6, 2, 3).report()
    assert report["M"] == 4
    assert report["r"] == 9
    assert report["m"] == 0
    assert report["c"] == "1/19"
    assert report["L_fourth_power"] == 24
