"""Tests for the Monte Carlo harness."""
import math
from collections import Counter

import pytest

from exceptions import ChiSquareValidityError
from services.oracle import enumerate_regular
from services.params import derive_params
from services.sequences import Sequence
from services.stats import (
    chi_square_fit,
    chi_square_uniform,
    double_count,
    embedding_pilot,
    embedding_trend,
    event_frequencies,
    expectation_checks,
    expected_loops_iid,
    expected_loops_regular_bound,
    expected_loops_regular_coarse_bound,
    expected_w_size,
    fb_audit,
    phi_checks,
    pipeline_law,
    resolve_sample_size,
    total_variation,
    trend_degree,
    uniformity_test,
)
from services.switching import count_backward


@pytest.fixture(scope="module")
def space_623():
    return enumerate_regular(6, 2, 3)


def test_chi_square_needs_ten_samples_per_class():
    with pytest.raises(ChiSquareValidityError):
        chi_square_uniform([5, 5, 5], "small", seed=0)
    report = chi_square_uniform([10, 10, 10], "flat", seed=0)
    assert report.statistic == 0
    assert report.dof == 2
    assert report.passed


def test_total_variation():
    assert total_variation([4, 4, 4, 4]) == 0
    assert total_variation([8, 0, 0, 0]) == pytest.approx(0.75)


def test_auto_sample_size():
    assert resolve_sample_size(75) == 20000
    assert resolve_sample_size(5000) == 50000
    assert resolve_sample_size(75, 900) == 900


def test_closed_forms():
    assert expected_loops_iid(derive_params(6, 2, 3)) == pytest.approx(16 / 9)
    assert expected_w_size(derive_params(152, 6, 3)) == 18


@pytest.mark.parametrize("n, d, k", [(6, 2, 3), (19, 3, 3), (12, 3, 4), (152, 6, 3)])
def test_union_loop_bound_is_tighter(n, d, k):
    p = derive_params(n, d, k)
    assert 0 <= expected_loops_regular_bound(p) <= expected_loops_regular_coarse_bound(p)


def test_reference_sampler_passes(space_623):
    report = uniformity_test("reference", derive_params(6, 2, 3), space_623, N=750, seed=42)
    assert report.classes == 75
    assert report.passed


def test_deletion_sampler_fails(space_623):
    report = uniformity_test("deletion", derive_params(6, 2, 3), space_623, N=2000, seed=42)
    assert report.p_value < 1e-4
    assert not report.passed


def test_uniformity_refuses_small_samples(space_623):
    with pytest.raises(ChiSquareValidityError):
        uniformity_test("reference", derive_params(6, 2, 3), space_623, N=100, seed=42)
    with pytest.raises(ValueError):
        uniformity_test("oracle", derive_params(6, 2, 3), space_623, N=750, seed=42)


def test_exact_pipeline_law_on_the_smallest_instance(space_623):
    p = derive_params(6, 2, 3)
    law = pipeline_law(p, space_623)
    assert sum(law) == 1
    # 30 graphs of one type are reachable only from loop-free sequences.
    assert sorted(Counter(law).values()) == [30, 45]
    low = min(law)
    assert low < max(law)
    for g, q in zip(space_623.instances, law):
        if q == low:
            edges = [v + 1 for edge in g.canonical() for v in edge]
            assert count_backward(Sequence.from_vertices(edges, p)) == 0


def test_exact_law_needs_no_red_prefix(space_623):
    with pytest.raises(ValueError):
        pipeline_law(derive_params(6, 2, 3, red_edges=1), space_623)


def test_chi_square_against_a_law():
    report = chi_square_fit([30, 10, 60], [0.3, 0.1, 0.6], "fit", seed=0)
    assert report.statistic == 0
    assert report.total_variation == pytest.approx(0)
    with pytest.raises(ChiSquareValidityError):
        chi_square_fit([95, 5], [0.95, 0.05], "thin", seed=0)


@pytest.mark.slow
def test_pipeline_output_matches_its_exact_law(space_623):
    p = derive_params(6, 2, 3)
    N = resolve_sample_size(space_623.count)
    report = uniformity_test("pipeline", p, space_623, N=N, seed=42, law=pipeline_law(p, space_623))
    assert report.sample_size == 20000
    assert report.passed


@pytest.mark.slow
def test_pipeline_output_is_not_uniform_on_the_smallest_instance(space_623):
    p = derive_params(6, 2, 3)
    report = uniformity_test("pipeline", p, space_623, N=resolve_sample_size(space_623.count), seed=42)
    assert report.p_value < 1e-4
    assert not report.passed


@pytest.mark.parametrize("n, d", [(3, 2), (6, 1), (3, 3)])
def test_double_count_small_spaces(n, d):
    report = double_count(derive_params(n, d, 3))
    assert report.verdicts["double_count_exact"]
    assert report.verdicts["hard_bounds"]


@pytest.mark.slow
def test_double_count_four_vertices():
    report = double_count(derive_params(4, 3, 3))
    assert report.trials == 369600
    assert report.verdicts["double_count_exact"]
    assert report.verdicts["hard_bounds"]
    assert report.lambda_histogram[0] == 31104


def test_phi_is_zero_at_degree_one():
    report = phi_checks(derive_params(30, 1, 3), N=200, seed=1)
    assert report.details["phi"]["mean"] == 0
    assert report.verdicts == {"phi_mean": True, "phi_tails": True}
    assert report.counts["in_tilde_S"] == 200


def test_phi_mean_and_tails():
    report = phi_checks(derive_params(19, 3, 3), N=20000, seed=42)
    assert report.verdicts["phi_mean"]
    assert report.verdicts["phi_tails"]


def test_event_frequencies_are_consistent():
    p = derive_params(19, 3, 3)
    report = event_frequencies(p, N=60, seed=4)
    c = report.counts
    assert c["coupling_violations"] == 0
    assert c["A_and_B_and_embedded"] <= min(c["event_A"], c["event_B"])
    assert c["y_not_in_E"] + c["y_prime_not_in_tilde_S"] + c["aborted_rejects"] <= 60
    assert report.verdicts["coupling_embeds_under_A_and_B"]
    assert report.verdicts["lambda_y_mean_below_coarse_bound"]


def test_fb_audit_has_no_bound_violations():
    report = fb_audit(derive_params(19, 3, 3), N=30, seed=2)
    assert report.counts["F_violations"] == 0
    assert report.counts["B_violations"] == 0
    assert report.counts["audited"] + report.counts["not_in_E"] == 30


@pytest.mark.slow
def test_fb_audit_larger_instance():
    report = fb_audit(derive_params(60, 4, 3), N=10_000, seed=2)
    assert report.verdicts["hard_bounds"]
    assert report.counts["audited"] + report.counts["not_in_E"] == 10_000


@pytest.mark.slow
def test_phi_tails_at_full_size():
    report = phi_checks(derive_params(100, 4, 3), N=100_000, seed=42, multiples=(2, 3, 4))
    assert report.verdicts["phi_tails"]
    assert set(report.details["tails"]) == {"2", "3", "4"}


def test_expectations():
    report = expectation_checks(derive_params(152, 6, 3), N=1000, seed=42)
    assert report.verdicts["w_size"]
    assert report.verdicts["phi"]
    assert report.verdicts["lambda_x"]


@pytest.mark.slow
def test_expectations_at_full_size():
    report = expectation_checks(derive_params(152, 6, 3), N=100_000, seed=42)
    assert report.verdicts == {"w_size": True, "phi": True, "lambda_x": True}


def test_trend_degree():
    assert trend_degree(500, 3, 1.0) == 9
    d = trend_degree(1000, 3, 1.0)
    assert d >= math.ceil(math.log(1000))
    assert (1000 * d) % 3 == 0


def test_embedding_trend_small_grid():
    report = embedding_trend([30, 60], C=1.0, N=5, seed=3)
    assert [pt["n"] for pt in report.details["points"]] == [30, 60]
    assert report.verdicts["no_coupling_violations"]
    assert set(report.verdicts) == {"nondecreasing", "target_met", "no_coupling_violations"}
    assert report.details["target"] == 0.9


def test_embedding_pilot_over_degrees():
    report = embedding_pilot(30, [2, 4], N=4, seed=3)
    points = report.details["points"]
    assert [pt["d"] for pt in points] == [2, 4]
    for pt in points:
        assert 0 <= pt["A_and_B_and_embedded"] <= min(pt["event_A"], pt["event_B"])
    assert report.verdicts["no_coupling_violations"]
