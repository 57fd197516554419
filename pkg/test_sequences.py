"""Tests for the sequence model, edge classification and family membership."""
from fractions import Fraction

import numpy as np
import pytest

from exceptions import ContractViolation, SequenceFormatError
from models import EdgeKind
from services.generators import sample_regular, trial_rng
from services.params import derive_params
from services.sequences import (
    Sequence,
    classify_edges,
    compute_phi,
    edge_multiset,
    expected_phi,
    green_proper_degree_sum,
    membership,
    to_graph,
)


def seq(values, n, d, k=3, red_edges=None):
    return Sequence.from_vertices(values, derive_params(n, d, k, red_edges=red_edges))


def test_simple_loop_and_proper_edge():
    cls = classify_edges(seq([1, 1, 2, 3, 4, 5], 6, 1))
    assert cls.kinds == [EdgeKind.SIMPLE_LOOP, EdgeKind.PROPER]
    assert cls.lam == 1
    assert cls.loop_indices == [0]
    assert cls.green_proper_indices == [1]


def test_triple_vertex_is_a_bad_loop():
    cls = classify_edges(seq([7, 7, 7, 1, 2, 3, 4, 5, 6], 9, 1))
    assert cls.kinds[0] == EdgeKind.BAD_LOOP_MULT3
    assert cls.bad_loop_indices == [0]


def test_same_multiset_is_a_duplicate():
    cls = classify_edges(seq([1, 2, 3, 3, 1, 2], 3, 2))
    assert cls.duplicate_groups == [[0, 1]]
    assert cls.lam == 0
    assert cls.has_multiple_edges


def test_k4_loop_types():
    cls = classify_edges(seq([1, 1, 2, 2, 3, 4, 5, 6], 8, 1, k=4))
    assert cls.kinds == [EdgeKind.BAD_LOOP_TWO_DOUBLES, EdgeKind.PROPER]
    cls = classify_edges(seq([1, 1, 1, 2, 3, 4, 5, 6], 8, 1, k=4))
    assert cls.kinds[0] == EdgeKind.BAD_LOOP_MULT3
    cls = classify_edges(seq([1, 1, 1, 1, 3, 4, 5, 6], 8, 1, k=4))
    assert cls.kinds[0] == EdgeKind.BAD_LOOP_MULT3


def test_classification_ignores_order_inside_edges():
    p = derive_params(9, 4, 3)
    for trial in range(20):
        rng = trial_rng(7, trial, "classify")
        y = sample_regular(p, rng)
        shuffled = y.edges().copy()
        for row in shuffled:
            rng.shuffle(row)
        a = classify_edges(y)
        b = classify_edges(Sequence(shuffled.reshape(-1), p))
        assert a.kinds == b.kinds
        assert a.lam == b.lam
        assert a.duplicate_groups == b.duplicate_groups


def test_lambda_counts_every_loop_kind():
    p = derive_params(9, 4, 3)
    for trial in range(20):
        y = sample_regular(p, trial_rng(3, trial, "lambda"))
        cls = classify_edges(y)
        loops = sum(1 for key in y.edge_keys() if len(set(key)) < 3)
        assert cls.lam == loops
        assert len(cls.kinds) == p.M


def test_phi_when_everything_is_green():
    # Every sequence at (n=3, d=2) has all green degrees equal to 2.
    assert compute_phi(seq([1, 2, 3, 1, 2, 3], 3, 2)) == 6
    assert compute_phi(seq([1, 1, 2, 2, 3, 3], 3, 2)) == 6


def test_phi_small_degrees():
    assert compute_phi(seq([1, 2, 3, 4, 5, 6], 6, 1)) == 0
    assert compute_phi(seq([1, 1, 1, 2, 2, 2], 6, 1)) == 12


def test_phi_skips_the_red_prefix():
    y = seq([1, 2, 3, 1, 2, 3], 3, 2, red_edges=1)
    assert compute_phi(y) == 0
    assert list(y.green_degrees()) == [1, 1, 1]


def test_expected_phi():
    assert expected_phi(derive_params(6, 2, 3)) == 12
    assert expected_phi(derive_params(6, 1, 3)) == 0
    p = derive_params(19, 3, 3)
    assert expected_phi(p) == Fraction(19 * 3 * 2 * 30 * 29, 57 * 56)


def test_phi_invariant_under_green_edge_permutation():
    p = derive_params(19, 3, 3)
    y = sample_regular(p, trial_rng(11, 0, "phi"))
    rows = y.edges().copy()
    rng = np.random.default_rng(0)
    green = rows[p.red_edges:]
    rng.shuffle(green)
    rows[p.red_edges:] = green
    assert compute_phi(Sequence(rows.reshape(-1), p)) == compute_phi(y)


def test_membership_of_a_simple_sequence():
    report = membership(seq([1, 2, 3, 4, 5, 6, 1, 2, 4, 3, 5, 6], 6, 2))
    assert report.in_E and report.in_G_l and report.in_tilde_S
    assert report.loop_level == 0
    assert report.phi == 12
    assert report.witness is None


def test_membership_rejects_a_bad_loop():
    report = membership(seq([1, 1, 1, 2, 2, 2, 3, 3, 3], 3, 3))
    assert not report.in_E
    assert not report.in_G_l
    assert report.witness == 0
    assert report.reason == "bad_loop_mult3"


def test_membership_rejects_too_many_loops():
    report = membership(seq([1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6], 6, 2))
    assert report.loop_level == 4
    assert not report.in_E
    assert report.reason == "lambda_exceeds_L"


def test_membership_flags_red_loops():
    report = membership(seq([1, 1, 2, 2, 3, 3, 1, 2, 3], 3, 3, red_edges=1))
    assert report.in_E
    assert not report.in_G_l
    assert report.witness == 0
    assert report.reason == "red_loop"


def test_g0_is_exactly_the_simple_sequences():
    p = derive_params(6, 2, 3)
    for trial in range(200):
        y = sample_regular(p, trial_rng(5, trial, "g0"))
        cls = classify_edges(y)
        report = membership(y, cls=cls)
        simple = cls.lam == 0 and not cls.has_multiple_edges
        assert (report.in_G_l and report.loop_level == 0) == simple


def test_text_round_trip():
    y = seq([1, 2, 3, 4, 5, 6, 1, 2, 4, 3, 5, 6], 6, 2)
    text = y.to_text()
    assert text.splitlines()[0] == "seq 3 6 2"
    assert Sequence.from_text(text) == y


@pytest.mark.parametrize("text", [
    "seq 3 6\n1 2 3 4 5 6\n",
    "khg 3 6 2\n1 2 3 4 5 6\n",
    "seq 3 6 1\n1 2 3 4 5\n",
    "seq 3 6 1\n0 1 2 3 4 5\n",
    "seq 3 6 1\n1 2 3 4 5 x\n",
])
def test_bad_sequence_text(text):
    with pytest.raises(SequenceFormatError):
        Sequence.from_text(text)


def test_to_graph():
    g = to_graph(seq([1, 2, 3, 4, 5, 6], 6, 1))
    assert g.canonical() == ((0, 1, 2), (3, 4, 5))
    with pytest.raises(ContractViolation):
        to_graph(seq([1, 1, 2, 3, 4, 5], 6, 1))


def test_edge_multiset_and_green_proper_degrees():
    y = seq([1, 1, 2, 3, 4, 5, 3, 6, 2, 4, 5, 6], 6, 2)
    counts = edge_multiset(y)
    assert counts[(0, 0, 1)] == 1
    assert counts[(2, 3, 4)] == 1
    # Green proper edges 345, 362, 456: vertices 4, 5, 6 and 3 lie in two of them.
    assert green_proper_degree_sum(y) == 4 * 2
