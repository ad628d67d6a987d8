"""Hermitian spectral calculus: eigendecomposition, unitary exponentials,
and the central-difference generator check."""

import hashlib
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from ._jacobi import jacobi_eigh, spectral_norm
from .operator import OperatorMatrix
from .space import FiniteSpace


@dataclass(frozen=True)
class EigenSystem:
    space: FiniteSpace
    eigenvalues: np.ndarray  # ascending, real
    vectors: np.ndarray  # unitary; column j pairs with eigenvalues[j]


_CACHE_LIMIT = 64
_eig_cache: "OrderedDict[str, tuple]" = OrderedDict()


def _frobenius(m):
    return float(np.sqrt(np.sum(np.abs(m) ** 2)))


def hermiticity_residual(a: OperatorMatrix) -> float:
    return _frobenius(a.entries - a.entries.conj().T)


def hermitian_eig(a: OperatorMatrix) -> EigenSystem:
    """Jacobi eigendecomposition; input must be Hermitian up to float noise.

    Decompositions are memoized by content hash: flow and profile sweeps
    exponentiate the same generator at many times.
    """
    residual = hermiticity_residual(a)
    scale = 1.0 + _frobenius(a.entries)
    if residual > 1e-10 * scale:
        raise ValueError(
            f"input is not Hermitian: ||a - a^H||_F = {residual:.3e} "
            f"exceeds 1e-10 * (1 + ||a||_F) = {1e-10 * scale:.3e}"
        )
    key = hashlib.sha256(a.entries.tobytes()).hexdigest()
    if key in _eig_cache:
        _eig_cache.move_to_end(key)
        w, v = _eig_cache[key]
    else:
        herm = 0.5 * (a.entries + a.entries.conj().T)
        w, v = jacobi_eigh(herm)
        _eig_cache[key] = (w, v)
        if len(_eig_cache) > _CACHE_LIMIT:
            _eig_cache.popitem(last=False)
    return EigenSystem(a.space, w, v)


def unitary_exp(h: OperatorMatrix, t: float) -> OperatorMatrix:
    """e^{ith} via the spectral theorem: V diag(e^{it lambda}) V^H."""
    es = hermitian_eig(h)
    phases = np.exp(1j * t * es.eigenvalues)
    u = (es.vectors * phases[None, :]) @ es.vectors.conj().T
    return OperatorMatrix(h.space, u)


def generator_check(u_grid) -> float:
    """Residual of the central difference (u_d - u_{-d}) / 2d against i*h.

    u_grid is a FlowGrid for t -> e^{ith}; the smallest positive grid time
    with a mirrored negative partner supplies the step. Second-order
    accurate: the residual scales like d^2 ||h||^3 / 6.
    """
    times = np.asarray(u_grid.times, dtype=np.float64)
    pos = sorted(t for t in times if t > 0)
    delta = None
    for t in pos:
        if np.any(np.isclose(times, -t, rtol=0.0, atol=1e-15)):
            delta = t
            break
    if delta is None:
        raise ValueError("grid has no symmetric +/-delta pair around 0")
    i_plus = int(np.argmin(np.abs(times - delta)))
    i_minus = int(np.argmin(np.abs(times + delta)))
    u_p = u_grid.unitaries[i_plus].entries
    u_m = u_grid.unitaries[i_minus].entries
    diff = (u_p - u_m) / (2.0 * delta) - 1j * u_grid.generator.entries
    return spectral_norm(diff)
