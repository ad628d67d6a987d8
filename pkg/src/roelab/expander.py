"""Coarse unions of connected graph blocks carrying block weights, rank-one
averaging projections, the pre-flow e^{ith} they generate, and the exact
discontinuity constants of that pre-flow."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ._jacobi import jacobi_eigh, spectral_norm
from .errors import NumericCheckError
from .flows import flow_apply, w_map
from .operator import OperatorMatrix, diagonal, identity
from .space import FiniteSpace, coarse_union, from_edge_list

WEIGHT_PRESETS = {
    "constant": lambda n: 1.0,
    "linear": lambda n: float(n),
    "quadratic": lambda n: float(n * n),
}


@dataclass(frozen=True)
class BlockFamily:
    blocks: Tuple[FiniteSpace, ...]
    weights: np.ndarray
    union: FiniteSpace
    half_splits: Tuple[Tuple[int, ...], ...]  # block-local indices
    offsets: Tuple[int, ...]
    spectral_gaps: Optional[Tuple[float, ...]] = None

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    def block_size(self, n: int) -> int:
        return self.blocks[n].n_points

    def block_indices(self, n: int):
        start = self.offsets[n]
        return range(start, start + self.block_size(n))


def block_family(
    blocks: Sequence[FiniteSpace],
    weights,
    half_splits: Optional[Sequence[Sequence[int]]] = None,
    spectral_gaps=None,
) -> BlockFamily:
    """Assemble a family; the default half split takes the first ceil(size/2)
    points of each block."""
    blocks = tuple(blocks)
    if not blocks:
        raise ValueError("at least one block required")
    if isinstance(weights, str):
        if weights not in WEIGHT_PRESETS:
            raise ValueError(f"unknown weight preset {weights!r}")
        preset = WEIGHT_PRESETS[weights]
        weights = [preset(n + 1) for n in range(len(blocks))]
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(blocks),):
        raise ValueError("one weight per block required")
    if half_splits is None:
        half_splits = [
            tuple(range((b.n_points + 1) // 2)) for b in blocks
        ]
    half_splits = tuple(tuple(hs) for hs in half_splits)
    for b, hs in zip(blocks, half_splits):
        if len(set(hs)) != len(hs) or any(not 0 <= i < b.n_points for i in hs):
            raise ValueError("half split must be a subset of the block")
    sizes = [b.n_points for b in blocks]
    offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sizes)[:-1]]))
    return BlockFamily(
        blocks,
        w,
        coarse_union(blocks),
        half_splits,
        offsets,
        None if spectral_gaps is None else tuple(spectral_gaps),
    )


def averaging_projection(fam: BlockFamily, n: int) -> OperatorMatrix:
    """p_n: entries 1/|X_n| on block n, zero elsewhere. Rank one, trace one."""
    if not 0 <= n < fam.n_blocks:
        raise IndexError(f"block index {n} out of range")
    size = fam.block_size(n)
    m = np.zeros((fam.union.n_points,) * 2, dtype=np.complex128)
    idx = np.array(fam.block_indices(n))
    m[np.ix_(idx, idx)] = 1.0 / size
    return OperatorMatrix(fam.union, m)


def generator(fam: BlockFamily) -> OperatorMatrix:
    """h = sum_n w(n) p_n."""
    m = np.zeros((fam.union.n_points,) * 2, dtype=np.complex128)
    for n in range(fam.n_blocks):
        m += fam.weights[n] * averaging_projection(fam, n).entries
    return OperatorMatrix(fam.union, m)


def split_projection(fam: BlockFamily) -> OperatorMatrix:
    """p_A for A = union of the per-block half splits (a diagonal projection)."""
    diag = np.zeros(fam.union.n_points, dtype=np.float64)
    for n in range(fam.n_blocks):
        for local in fam.half_splits[n]:
            diag[fam.offsets[n] + local] = 1.0
    return diagonal(fam.union, diag)


def split_factor(fam: BlockFamily, n: int) -> float:
    """sqrt(|A_n| * |X_n \\ A_n|) / |X_n|; equals 1/2 for even half splits."""
    size = fam.block_size(n)
    a = len(fam.half_splits[n])
    return float(np.sqrt(a * (size - a)) / size)


def preflow_unitary(fam: BlockFamily, t: float) -> OperatorMatrix:
    """e^{ith} assembled directly as id + sum_n (e^{itw(n)} - 1) p_n."""
    m = np.eye(fam.union.n_points, dtype=np.complex128)
    for n in range(fam.n_blocks):
        m += (np.exp(1j * t * fam.weights[n]) - 1.0) * averaging_projection(
            fam, n
        ).entries
    return OperatorMatrix(fam.union, m)


def halfsplit_commutator_norm(fam: BlockFamily, n: int) -> float:
    """||p_n p_{A_n} - p_{A_n} p_n||, which evaluates to
    sqrt(|A_n| |X_n \\ A_n|) / |X_n|."""
    p_n = averaging_projection(fam, n)
    p_a = split_projection(fam)
    return spectral_norm((p_n @ p_a - p_a @ p_n).entries)


@dataclass(frozen=True)
class DiscontinuityReport:
    measured: float
    closed_form: float
    block_of_max: int


def discontinuity_profile(fam: BlockFamily, t: float) -> DiscontinuityReport:
    """||sigma_{h,t}(p_A) - p_A|| against its closed form
    max_n split_factor(n) * |e^{itw(n)} - 1|."""
    h = generator(fam)
    p_a = split_projection(fam)
    moved = flow_apply(h, t, p_a)
    measured = spectral_norm(moved.entries - p_a.entries)
    per_block = np.array(
        [
            split_factor(fam, n) * abs(np.exp(1j * t * fam.weights[n]) - 1.0)
            for n in range(fam.n_blocks)
        ]
    )
    block_of_max = int(np.argmax(per_block))
    closed_form = float(per_block[block_of_max])
    if abs(measured - closed_form) > 1e-9:
        raise NumericCheckError(
            f"discontinuity identity failed at t={t}: "
            f"measured {measured} vs closed form {closed_form}"
        )
    return DiscontinuityReport(measured, closed_form, block_of_max)


@dataclass(frozen=True)
class WMapBound:
    lhs: float
    rhs: float


def wmap_lower_bound(fam: BlockFamily, k, t: float) -> WMapBound:
    """lhs = ||e^{ith} e^{-itk} - id|| for diagonal k, against the corner
    bound rhs = max_n split_factor(n) * |e^{itw(n)} - 1|."""
    k = np.asarray(k, dtype=np.float64)
    if k.shape != (fam.union.n_points,):
        raise ValueError("k must be a real function on the union")
    h = generator(fam)
    k_op = diagonal(fam.union, k)
    lhs = spectral_norm(
        w_map(h, k_op, t).entries - identity(fam.union).entries
    )
    rhs = max(
        split_factor(fam, n) * abs(np.exp(1j * t * fam.weights[n]) - 1.0)
        for n in range(fam.n_blocks)
    )
    if lhs < rhs - 1e-9:
        raise NumericCheckError(
            f"w-map lower bound failed at t={t}: lhs {lhs} < rhs {rhs}"
        )
    return WMapBound(lhs, float(rhs))


def _random_regular_graph(size: int, degree: int, rng) -> FiniteSpace:
    """Pairing-model sample, resampled until simple and connected."""
    for _ in range(1000):
        stubs = np.repeat(np.arange(size), degree)
        rng.shuffle(stubs)
        edges = set()
        simple = True
        for i in range(0, len(stubs), 2):
            u, v = int(stubs[i]), int(stubs[i + 1])
            if u == v or (min(u, v), max(u, v)) in edges:
                simple = False
                break
            edges.add((min(u, v), max(u, v)))
        if not simple:
            continue
        try:
            return from_edge_list(sorted(edges), size)
        except ValueError:
            continue  # disconnected sample
    raise ValueError(
        f"could not sample a connected simple {degree}-regular graph on "
        f"{size} points"
    )


def _normalized_laplacian_gap(block: FiniteSpace, degree: int) -> float:
    adj = (block.dist == 1.0).astype(np.float64)
    lap = np.eye(block.n_points) - adj / degree
    eigvals, _ = jacobi_eigh(lap)
    return float(eigvals[1]) if block.n_points > 1 else 0.0


def make_regular_family(
    n_blocks: int,
    degree: int,
    sizes: Sequence[int],
    seed: int,
    weights="quadratic",
) -> BlockFamily:
    """Random connected degree-regular blocks (pairing model), deterministic
    under the seed, with the normalized-Laplacian spectral gap reported per
    block."""
    if len(sizes) != n_blocks:
        raise ValueError("one size per block required")
    for size in sizes:
        if size <= degree:
            raise ValueError(f"block size {size} must exceed degree {degree}")
        if (size * degree) % 2 != 0:
            raise ValueError(f"degree*size must be even (size {size})")
    rng = np.random.default_rng(seed)
    blocks = [_random_regular_graph(size, degree, rng) for size in sizes]
    gaps = [_normalized_laplacian_gap(b, degree) for b in blocks]
    return block_family(blocks, weights, spectral_gaps=gaps)
