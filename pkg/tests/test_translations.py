import itertools

import numpy as np
import pytest

from roelab import space, translations
from roelab.errors import SizeGuardError
from roelab.operator import OperatorMatrix, diagonal, operator_norm, propagation
from roelab.translations import (
    PartialTranslation,
    coarseness_modulus,
    enumerate_r_translations,
    identity_on,
    to_matrix,
)


def two_point_space(d):
    return space.FiniteSpace(np.array([[0.0, d], [d, 0.0]]))


def brute_partial_injections(n, dist, r):
    """Independent oracle: enumerate partial injections via itertools."""
    points = range(n)
    out = set()
    for k in range(n + 1):
        for dom in itertools.combinations(points, k):
            for ran in itertools.permutations(points, k):
                pairs = tuple(zip(dom, ran))
                if all(dist[x, y] <= r for x, y in pairs):
                    out.add(frozenset(pairs))
    return out


def test_identity_translation_is_projection():
    s = space.path_graph(4)
    f = identity_on(s, [1, 3])
    m = to_matrix(f).entries
    expected = np.diag([0.0, 1.0, 0.0, 1.0]).astype(complex)
    assert np.array_equal(m, expected)


def test_empty_translation_zero_matrix():
    s = space.path_graph(3)
    f = PartialTranslation(s, ())
    assert not to_matrix(f).entries.any()
    assert f.displacement == 0.0


def test_swap_is_exchange_matrix():
    s = two_point_space(1.0)
    f = PartialTranslation(s, ((0, 1), (1, 0)))
    m = to_matrix(f).entries
    assert np.array_equal(m, np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.allclose(m @ m.conj().T, np.eye(2))


def test_adjoint_is_inverse():
    s = space.cycle_graph(5)
    f = PartialTranslation(s, ((0, 1), (2, 4), (3, 3)))
    assert np.array_equal(to_matrix(f).H.entries, to_matrix(f.inverse()).entries)


def test_propagation_equals_displacement():
    s = space.path_graph(5)
    f = PartialTranslation(s, ((0, 2), (4, 3)))
    assert propagation(to_matrix(f)) == f.displacement == 2.0


def test_enumeration_one_point():
    s = space.from_edge_list([], 1)
    fams = list(enumerate_r_translations(s, 0))
    assert {f.pairs for f in fams} == {(), ((0, 0),)}


def test_enumeration_distant_points_only_subidentities():
    s = two_point_space(3.0)
    fams = {f.pairs for f in enumerate_r_translations(s, 1)}
    assert fams == {(), ((0, 0),), ((1, 1),), ((0, 0), (1, 1))}


def test_enumeration_two_close_points_has_seven():
    s = two_point_space(1.0)
    fams = list(enumerate_r_translations(s, 1))
    assert len(fams) == 7


@pytest.mark.parametrize("n,r", [(3, 1), (4, 2), (4, 10)])
def test_enumeration_matches_brute_oracle(n, r):
    s = space.path_graph(n)
    got = {frozenset(f.pairs) for f in enumerate_r_translations(s, r)}
    assert got == brute_partial_injections(n, s.dist, r)
    # uniqueness: no translation yielded twice
    assert len(list(enumerate_r_translations(s, r))) == len(got)


def test_enumeration_size_guard():
    s = space.path_graph(11)
    with pytest.raises(SizeGuardError):
        list(enumerate_r_translations(s, 1))


def test_coarseness_diagonal_two_points():
    s = two_point_space(1.0)
    h = diagonal(s, [0.0, 5.0])
    assert coarseness_modulus(h, 1, "exact") == pytest.approx(5.0, abs=1e-12)


def test_coarseness_identity_commutes():
    s = space.path_graph(4)
    h = OperatorMatrix(s, np.eye(4, dtype=complex))
    assert coarseness_modulus(h, 3, "exact") == pytest.approx(0.0, abs=1e-12)


def test_coarseness_diagonal_full_radius_is_pairwise_max():
    rng = np.random.default_rng(7)
    s = space.path_graph(5)
    vals = rng.standard_normal(5)
    h = diagonal(s, vals)
    exact = coarseness_modulus(h, s.diameter, "exact")
    oracle = max(abs(vals[x] - vals[z]) for x in range(5) for z in range(5))
    assert exact == pytest.approx(oracle, abs=1e-12)


def test_heuristic_below_exact():
    rng = np.random.default_rng(3)
    s = space.cycle_graph(5)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = OperatorMatrix(s, 0.5 * (m + m.conj().T))
    for r in (1, 2):
        assert coarseness_modulus(h, r, "heuristic") <= coarseness_modulus(
            h, r, "exact"
        ) + 1e-10


def test_projection_commutator_bounded_by_r0_modulus():
    rng = np.random.default_rng(11)
    s = space.path_graph(5)
    m = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = OperatorMatrix(s, 0.5 * (m + m.conj().T))
    modulus = coarseness_modulus(h, 0, "exact")
    for subset_bits in range(1 << 5):
        subset = [i for i in range(5) if subset_bits >> i & 1]
        p = to_matrix(identity_on(s, subset))
        assert operator_norm(h @ p - p @ h) <= modulus + 1e-10
