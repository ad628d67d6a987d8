"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Self-contained: no LAPACK. Rotations are applied with numpy row/column
updates, so a full sweep is O(n^3) with vectorized inner loops, which is
plenty at the few-hundred-point scale this package targets.
"""

import numpy as np

MAX_SWEEPS = 60
CONVERGENCE_FACTOR = 1e-14


def _offdiag_mass(a):
    n = a.shape[0]
    off = a.copy()
    off[np.diag_indices(n)] = 0.0
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def jacobi_eigh(a):
    """Eigenvalues (ascending) and eigenvector columns of a Hermitian array.

    Converges when the off-diagonal Frobenius mass drops below
    CONVERGENCE_FACTOR times the Frobenius norm of the input.
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real]), np.eye(1, dtype=np.complex128)

    fro = float(np.sqrt(np.sum(np.abs(a) ** 2)))
    w = a.astype(np.complex128, copy=True)
    v = np.eye(n, dtype=np.complex128)
    if fro == 0.0:
        return np.zeros(n), v

    threshold = CONVERGENCE_FACTOR * fro
    # Pivots smaller than this cannot push the off-diagonal mass above the
    # convergence threshold, so rotating on them is wasted work.
    skip = threshold / (n * n)

    for _ in range(MAX_SWEEPS):
        if _offdiag_mass(w) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                b = w[p, q]
                absb = abs(b)
                if absb <= skip:
                    continue
                e = b / absb
                ebar = np.conj(e)
                app = w[p, p].real
                aqq = w[q, q].real
                tau = (aqq - app) / (2.0 * absb)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = -np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                wp = w[:, p].copy()
                wq = w[:, q].copy()
                w[:, p] = c * wp + ebar * s * wq
                w[:, q] = -s * wp + ebar * c * wq
                rp = w[p, :].copy()
                rq = w[q, :].copy()
                w[p, :] = c * rp + e * s * rq
                w[q, :] = -s * rp + e * c * rq
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = w[p, p].real
                w[q, q] = w[q, q].real

                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + ebar * s * vq
                v[:, q] = -s * vp + ebar * c * vq
    else:
        raise ArithmeticError(
            f"Jacobi sweep limit ({MAX_SWEEPS}) reached; "
            f"off-diagonal mass {_offdiag_mass(w):.3e} > {threshold:.3e}"
        )

    eigvals = np.real(np.diag(w))
    order = np.argsort(eigvals, kind="stable")
    return eigvals[order], v[:, order]


def spectral_norm(m):
    """Largest singular value of a dense complex array (square or not).

    Exactly-zero rows and columns are dropped first and the Gram matrix is
    formed on the smaller side, so sparse commutators cost almost nothing.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0.0
    rows = np.any(m != 0, axis=1)
    cols = np.any(m != 0, axis=0)
    m = m[np.ix_(rows, cols)]
    if m.size == 0:
        return 0.0
    if m.shape[0] < m.shape[1]:
        m = m.conj().T
    gram = m.conj().T @ m
    eigvals, _ = jacobi_eigh(gram)
    return float(np.sqrt(max(eigvals[-1], 0.0)))
