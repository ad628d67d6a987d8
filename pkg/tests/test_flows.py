import numpy as np
import pytest

from roelab import space
from roelab.errors import NumericCheckError
from roelab.flows import (
    CocycleFamily,
    FlowGrid,
    cocycle_from_generators,
    cocycle_residual,
    corrupt_at,
    diagonal_closeness,
    flow_apply,
    flow_derivative_residual,
    lambda_scalar_residual,
    lipschitz_audit,
    w_map,
)
from roelab.operator import OperatorMatrix, diagonal, operator_norm
from roelab.spectral import unitary_exp
from roelab.translations import PartialTranslation, to_matrix


def random_hermitian(s, seed, scale=1.0):
    rng = np.random.default_rng(seed)
    n = s.n_points
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return OperatorMatrix(s, scale * 0.5 * (m + m.conj().T))


def test_flow_at_zero_is_identity_map():
    s = space.path_graph(4)
    a = random_hermitian(s, 0)
    assert np.allclose(flow_apply(random_hermitian(s, 1), 0.0, a).entries, a.entries)


def test_flow_preserves_norm():
    s = space.path_graph(5)
    h = random_hermitian(s, 2)
    a = random_hermitian(s, 3)
    assert operator_norm(flow_apply(h, 0.8, a)) == pytest.approx(
        operator_norm(a), abs=1e-9
    )


def test_diagonal_flow_closed_form():
    # sigma_{h,t}(v_f) multiplies entry (f(x), x) by e^{it(h_{f(x)} - h_x)}
    s = space.cycle_graph(5)
    rng = np.random.default_rng(4)
    hvals = rng.standard_normal(5)
    h = diagonal(s, hvals)
    f = PartialTranslation(s, ((0, 1), (2, 3), (4, 4)))
    t = 0.77
    moved = flow_apply(h, t, to_matrix(f)).entries
    expected = np.zeros((5, 5), dtype=complex)
    for x, y in f.pairs:
        expected[y, x] = np.exp(1j * t * (hvals[y] - hvals[x]))
    assert np.abs(moved - expected).max() <= 1e-12


def test_flow_fixes_own_spectral_projection():
    s = space.complete_graph(4)
    p = OperatorMatrix(s, np.ones((4, 4), dtype=complex) / 4)
    h = 2.5 * p
    assert np.allclose(flow_apply(h, 1.3, p).entries, p.entries, atol=1e-10)


def test_flow_homomorphism_and_group_law():
    s = space.path_graph(5)
    h = random_hermitian(s, 5)
    a = random_hermitian(s, 6)
    b = random_hermitian(s, 7)
    t, u = 0.4, -0.9
    lhs = flow_apply(h, t, a @ b).entries
    rhs = (flow_apply(h, t, a) @ flow_apply(h, t, b)).entries
    assert np.linalg.norm(lhs - rhs, 2) <= 1e-9 * operator_norm(a) * operator_norm(b)
    lhs2 = flow_apply(h, t + u, a).entries
    rhs2 = flow_apply(h, t, flow_apply(h, u, a)).entries
    assert np.linalg.norm(lhs2 - rhs2, 2) <= 1e-9


def test_derivative_residual_zero_generator():
    s = space.path_graph(3)
    h = diagonal(s, [0.0, 0.0, 0.0])
    f = PartialTranslation(s, ((0, 1),))
    assert flow_derivative_residual(h, f, 1e-5) == pytest.approx(0.0, abs=1e-12)


def test_derivative_residual_two_point_oracle():
    # closed-form 2x2: sigma_t(v_swap) entry (1,0) is e^{it(h_1 - h_0)},
    # so the forward-difference residual is |(e^{i d g} - 1)/d - i g|, g = 5
    s = space.FiniteSpace(np.array([[0.0, 1.0], [1.0, 0.0]]))
    h = diagonal(s, [0.0, 5.0])
    f = PartialTranslation(s, ((0, 1), (1, 0)))
    delta = 1e-5
    res = flow_derivative_residual(h, f, delta)
    scalar = abs((np.exp(1j * delta * 5) - 1) / delta - 5j)
    assert res == pytest.approx(scalar, rel=1e-6)
    assert res <= 1e-3


def test_derivative_residual_first_order():
    s = space.path_graph(4)
    h = random_hermitian(s, 8)
    f = PartialTranslation(s, ((0, 1), (2, 2)))
    r1 = flow_derivative_residual(h, f, 1e-4)
    r2 = flow_derivative_residual(h, f, 5e-5)
    assert 1.8 <= r1 / r2 <= 2.2


def test_w_map_equal_generators():
    s = space.path_graph(4)
    h = random_hermitian(s, 9)
    for t in (0.0, 0.6, -2.0):
        assert np.allclose(w_map(h, h, t).entries, np.eye(4), atol=1e-10)


def test_w_map_diagonal_closed_form():
    s = space.path_graph(3)
    hv = np.array([1.0, -0.5, 2.0])
    kv = np.array([0.2, 0.2, -1.0])
    t = 0.9
    w = w_map(diagonal(s, hv), diagonal(s, kv), t)
    assert np.allclose(w.entries, np.diag(np.exp(1j * t * (hv - kv))), atol=1e-12)


def test_lipschitz_equal_generators():
    s = space.path_graph(4)
    h = random_hermitian(s, 10)
    rep = lipschitz_audit(h, h, np.linspace(-1, 1, 9))
    assert rep.max_ratio <= 1e-9
    assert rep.bound == pytest.approx(0.0, abs=1e-14)


def test_lipschitz_diagonal_gap_tight():
    s = space.path_graph(3)
    h = diagonal(s, [5.0, 0.0, 1.0])
    k = diagonal(s, [0.0, 0.0, 1.0])
    grid = np.linspace(-0.01, 0.01, 33)
    rep = lipschitz_audit(h, k, grid)
    assert rep.bound == pytest.approx(5.0, abs=1e-12)
    assert rep.max_ratio <= 5.0 * (1 + 1e-8)
    assert rep.max_ratio >= 4.99  # tight near t = 0


def test_lipschitz_random_pairs():
    s = space.path_graph(6)
    grid = np.linspace(-1, 1, 64)
    for seed in range(5):
        h = random_hermitian(s, seed)
        k = random_hermitian(s, seed + 100)
        rep = lipschitz_audit(h, k, grid)
        assert rep.max_ratio <= rep.bound * (1 + 1e-8)


def test_cocycle_identity_and_u0():
    s = space.path_graph(5)
    h = random_hermitian(s, 20)
    k = random_hermitian(s, 21)
    times = np.linspace(-1, 1, 9)
    fam = cocycle_from_generators(h, k, times)
    assert np.allclose(fam.element(0.0).entries, np.eye(5), atol=1e-12)
    for t, s_ in [(0.3, 0.7), (-0.5, 0.25), (0.0, 0.0)]:
        assert cocycle_residual(fam, t, s_) <= 1e-9


def test_cocycle_equal_generators_constant_identity():
    s = space.path_graph(3)
    h = random_hermitian(s, 22)
    fam = cocycle_from_generators(h, h, [0.0, 0.5, 1.0])
    for u in fam.elements:
        assert np.allclose(u.entries, np.eye(3), atol=1e-10)


def test_corrupted_cocycle_fails():
    s = space.path_graph(5)
    h = random_hermitian(s, 23)
    k = random_hermitian(s, 24)
    fam = cocycle_from_generators(h, k, np.linspace(-1, 1, 9))
    bad = corrupt_at(fam, 0.3)
    assert cocycle_residual(bad, 0.3, 0.7) > 1e-2


def test_lambda_residual_intertwining():
    s = space.path_graph(4)
    h = random_hermitian(s, 25)
    k = random_hermitian(s, 26)
    # u_t = e^{ith} e^{-itk} makes lambda_t the identity exactly
    fam = cocycle_from_generators(k, h, [0.0, 0.4, 0.8])
    assert lambda_scalar_residual(h, k, fam, 0.4) <= 1e-10


def test_lambda_residual_scalar_phase_passes():
    s = space.path_graph(4)
    h = random_hermitian(s, 27)
    k = random_hermitian(s, 28)
    base = cocycle_from_generators(k, h, [0.0, 0.4])

    def phased(t):
        return np.exp(1j * 0.9 * t) * base.element(t)

    fam = CocycleFamily(base.base_flow, (base.elements[0], phased(0.4)), phased)
    assert lambda_scalar_residual(h, k, fam, 0.4) <= 1e-10


def test_lambda_residual_negative_control():
    s = space.path_graph(4)
    h = random_hermitian(s, 29)
    k = random_hermitian(s, 30)
    grid = FlowGrid.from_generator(h, [0.0, 0.4])
    # arbitrary non-intertwining unitary family
    rng = np.random.default_rng(31)
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, _ = np.linalg.qr(m)
    fam = CocycleFamily(
        grid,
        (OperatorMatrix(s, np.eye(4)), OperatorMatrix(s, q)),
        lambda t: OperatorMatrix(s, np.eye(4))
        if t == 0.0
        else OperatorMatrix(s, q),
    )
    assert lambda_scalar_residual(h, k, fam, 0.4) > 0.1


def test_diagonal_closeness():
    s = space.path_graph(5)
    hv = s.dist[0]
    assert diagonal_closeness(hv, hv) == 0.0
    assert diagonal_closeness(hv, hv + 3.0) == 3.0
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal(5), rng.standard_normal(5)
    assert diagonal_closeness(a, b) == pytest.approx(
        operator_norm(diagonal(s, a - b)), abs=1e-12
    )


def test_flow_grid_validates_times():
    s = space.path_graph(3)
    h = random_hermitian(s, 32)
    with pytest.raises(ValueError):
        FlowGrid.from_generator(h, [0.5, 0.5])
