"""Dense hypermatrices, packed symmetric tensors, and rank primitives.

Conventions used throughout the package:

- entries are stored row-major (C order), last index fastest;
- flattenings use 1-based mode numbers; ``flatten(A, i)`` has the mode-i fiber
  index as rows and the remaining modes, in ascending mode order and row-major,
  as columns;
- the ``field`` tag is ``"real"`` or ``"complex"``; real data is float64,
  complex data is complex128.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .errors import ToleranceError

REAL = "real"
COMPLEX = "complex"


@dataclass(frozen=True)
class TolerancePolicy:
    """Scale-relative thresholds shared by every operation.

    eps_rel scales rank-decision thresholds, gap_min is the minimal relative
    eigenvalue/singular-value separation treated as unambiguous, and
    path_samples_default is the verification grid size.
    """

    eps_rel: float = 1e-10
    gap_min: float = 1e-6
    path_samples_default: int = 64


DEFAULT_TOL = TolerancePolicy()


def _dtype_for(field: str):
    if field == REAL:
        return np.float64
    if field == COMPLEX:
        return np.complex128
    raise ValueError(f"unknown field {field!r}")


@dataclass(frozen=True)
class Hypermatrix:
    """A dense d-way array over R or C."""

    data: np.ndarray
    field: str

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=_dtype_for(self.field))
        if arr.ndim < 1:
            raise ValueError("hypermatrix needs at least one mode")
        object.__setattr__(self, "data", arr)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(self.data.shape)

    @property
    def order(self) -> int:
        return self.data.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.data.ravel()))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Hypermatrix) and self.field == other.field
                and self.shape == other.shape
                and bool(np.array_equal(self.data, other.data)))


def hypermatrix(data, field: str = REAL) -> Hypermatrix:
    return Hypermatrix(np.asarray(data), field)


@dataclass(frozen=True)
class MultilinearRank:
    """Tuple of flattening ranks with the margins that produced them."""

    ranks: tuple[int, ...]
    margins: tuple[float, ...] = dc_field(default=(), compare=False)

    def __iter__(self):
        return iter(self.ranks)

    def __len__(self):
        return len(self.ranks)

    def __getitem__(self, i):
        return self.ranks[i]

    def admissible(self) -> bool:
        return mrank_admissible(self.ranks)


def mrank_admissible(ranks: tuple[int, ...]) -> bool:
    """Necessary condition r_i <= prod of the other entries, for every mode."""
    total = math.prod(ranks)
    return all(r * r <= total for r in ranks) if 0 not in ranks else all(r == 0 for r in ranks)


@dataclass(frozen=True)
class RankOneFactors:
    """scalar * v_1 x ... x v_d with unit-norm factors."""

    scalar: complex | float
    factors: tuple[np.ndarray, ...]
    field: str

    def tensor(self) -> Hypermatrix:
        return outer_product(self)


@dataclass(frozen=True)
class SymRankDecomposition:
    """Sum of lambda_k * v_k^(x d) terms with unit-norm vectors."""

    order: int
    coefficients: tuple[complex | float, ...]
    vectors: tuple[np.ndarray, ...]
    field: str

    def __len__(self):
        return len(self.coefficients)

    def tensor(self) -> "SymTensor":
        n = self.vectors[0].shape[0]
        parts = [sym_power(v, self.order, lam) for lam, v in
                 zip(self.coefficients, self.vectors)]
        packed = np.sum([p.packed for p in parts], axis=0)
        return SymTensor(n, self.order, self.field, packed)

    def signature(self) -> int:
        """Number of positive coefficients (meaningful for real even order)."""
        return sum(1 for lam in self.coefficients if float(np.real(lam)) > 0)


@lru_cache(maxsize=None)
def _sym_index_tables(n: int, d: int):
    """Packed order (lexicographic nondecreasing multi-indices) and lookup.

    Returns (indices, position, weights): indices is the tuple of packed
    multi-indices, position maps every full multi-index (as flat row-major
    offset) to its packed slot, weights are the multinomial multiplicities.
    """
    indices = tuple(combinations_with_replacement(range(n), d))
    position = np.empty(n ** d, dtype=np.intp)
    strides = [n ** (d - 1 - k) for k in range(d)]
    slot = {idx: p for p, idx in enumerate(indices)}
    for full in np.ndindex(*
                           ((n,) * d)):
        flat = sum(i * s for i, s in zip(full, strides))
        position[flat] = slot[tuple(sorted(full))]
    weights = np.empty(len(indices), dtype=np.float64)
    dfact = math.factorial(d)
    for p, idx in enumerate(indices):
        counts: dict[int, int] = {}
        for i in idx:
            counts[i] = counts.get(i, 0) + 1
        denom = 1
        for c in counts.values():
            denom *= math.factorial(c)
        weights[p] = dfact / denom
    return indices, position, weights


def sym_packed_length(n: int, d: int) -> int:
    return math.comb(n + d - 1, d)


@dataclass(frozen=True)
class SymTensor:
    """Symmetric order-d tensor on an n-dimensional space, packed storage.

    ``packed`` holds one coefficient per nondecreasing multi-index, indices in
    lexicographic order.
    """

    dim: int
    order: int
    field: str
    packed: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.packed, dtype=_dtype_for(self.field))
        if arr.shape != (sym_packed_length(self.dim, self.order),):
            raise ValueError(
                f"packed length {arr.shape} does not match dim={self.dim} "
                f"order={self.order} (expected {sym_packed_length(self.dim, self.order)})")
        object.__setattr__(self, "packed", arr)

    def norm(self) -> float:
        """Frobenius norm of the full (embedded) tensor."""
        _, _, weights = _sym_index_tables(self.dim, self.order)
        return float(math.sqrt(float(np.sum(weights * np.abs(self.packed) ** 2))))

    def entry(self, index: tuple[int, ...]) -> complex | float:
        _, position, _ = _sym_index_tables(self.dim, self.order)
        strides = [self.dim ** (self.order - 1 - k) for k in range(self.order)]
        flat = sum(i * s for i, s in zip(index, strides))
        return self.packed[position[flat]]


def flatten(A: Hypermatrix, mode: int) -> np.ndarray:
    """Mode-i flattening (1-based mode), columns row-major over remaining modes."""
    d = A.order
    if not 1 <= mode <= d:
        raise ValueError(f"mode {mode} out of range 1..{d}")
    ax = mode - 1
    return np.ascontiguousarray(
        np.moveaxis(A.data, ax, 0).reshape(A.shape[ax], -1))


def numerical_rank(M: np.ndarray, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[int, float]:
    """(rank, margin) with threshold tau = sigma_1 * max(m, n) * eps_rel.

    Singular values exactly on the threshold count as above it. The zero
    matrix has rank 0. margin = sigma_r / sigma_1, and 1.0 when r = 0.
    """
    M = np.atleast_2d(M)
    sigma = np.linalg.svd(M, compute_uv=False)
    if sigma.size == 0 or sigma[0] == 0.0:
        return 0, 1.0
    tau = sigma[0] * max(M.shape) * tol.eps_rel
    r = int(np.sum(sigma >= tau))
    margin = float(sigma[r - 1] / sigma[0]) if r > 0 else 1.0
    return r, margin


def mrank(A: Hypermatrix, tol: TolerancePolicy = DEFAULT_TOL) -> MultilinearRank:
    """Multilinear rank: the tuple of flattening ranks, with per-mode margins.

    Raises ToleranceError when the reported tuple violates admissibility
    (r_i <= prod_{j != i} r_j); that can only come from an inconsistent
    numerical read.
    """
    ranks = []
    margins = []
    for mode in range(1, A.order + 1):
        r, m = numerical_rank(flatten(A, mode), tol)
        ranks.append(r)
        margins.append(m)
    result = MultilinearRank(tuple(ranks), tuple(margins))
    if not result.admissible():
        raise ToleranceError(
            f"inadmissible multilinear rank read {result.ranks}; "
            "tolerance thresholds are inconsistent for this input")
    return result


def outer_product(f: RankOneFactors) -> Hypermatrix:
    out = np.asarray(f.factors[0], dtype=_dtype_for(f.field))
    for v in f.factors[1:]:
        out = np.multiply.outer(out, np.asarray(v, dtype=_dtype_for(f.field)))
    return Hypermatrix(out * f.scalar, f.field)


def sym_power(v: np.ndarray, d: int, coefficient: complex | float = 1.0,
              field: str | None = None) -> SymTensor:
    """coefficient * v^(x d) in packed form."""
    v = np.asarray(v)
    if field is None:
        field = COMPLEX if np.iscomplexobj(v) or isinstance(coefficient, complex) else REAL
    v = v.astype(_dtype_for(field))
    n = v.shape[0]
    indices, _, _ = _sym_index_tables(n, d)
    packed = np.empty(len(indices), dtype=_dtype_for(field))
    for p, idx in enumerate(indices):
        prod = coefficient
        for i in idx:
            prod = prod * v[i]
        packed[p] = prod
    return SymTensor(n, d, field, packed)


def sym_embed(S: SymTensor) -> Hypermatrix:
    """Expand packed coefficients to the full n^d array."""
    _, position, _ = _sym_index_tables(S.dim, S.order)
    full = S.packed[position].reshape((S.dim,) * S.order)
    return Hypermatrix(full, S.field)


def sym_extract(A: Hypermatrix, tol: TolerancePolicy = DEFAULT_TOL) -> SymTensor:
    """Pack a (numerically) symmetric full tensor; reject asymmetric input.

    The maximal deviation between entries related by an index permutation must
    not exceed eps_rel * ||A||. Entries are averaged over their orbit.
    """
    shape = A.shape
    n, d = shape[0], A.order
    if any(s != n for s in shape):
        raise ValueError(f"not a symmetric shape: {shape}")
    _, position, weights = _sym_index_tables(n, d)
    flat = A.data.ravel()
    m = sym_packed_length(n, d)
    sums = np.zeros(m, dtype=flat.dtype)
    counts = np.zeros(m, dtype=np.float64)
    np.add.at(sums, position, flat)
    np.add.at(counts, position, 1.0)
    means = sums / counts
    deviation = float(np.max(np.abs(flat - means[position]))) if flat.size else 0.0
    scale = A.norm()
    if deviation > tol.eps_rel * max(scale, 1e-300):
        raise ToleranceError(
            f"input is not symmetric: max orbit deviation {deviation:.3e} "
            f"exceeds {tol.eps_rel:.1e} * norm")
    return SymTensor(n, d, A.field, means)


def sym_diagonal_sum(S: SymTensor) -> complex | float:
    """Sum of the diagonal entries A[i, i, ..., i]."""
    total = 0.0
    for i in range(S.dim):
        total = total + S.entry((i,) * S.order)
    return total


def mode_multiply(core: np.ndarray, matrices: list[np.ndarray | None]) -> np.ndarray:
    """Multiply core by one matrix per mode (None = identity on that mode).

    matrices[k] has shape (new_k, old_k); the result keeps mode order.
    """
    out = core
    for k, M in enumerate(matrices):
        if M is None:
            continue
        out = np.moveaxis(np.tensordot(M, out, axes=(1, k)), 0, k)
    return out


def frobenius_inner(A: np.ndarray, B: np.ndarray) -> complex | float:
    """<A, B> = sum A * conj(B)."""
    return complex(np.sum(A * np.conj(B))) if np.iscomplexobj(A) or np.iscomplexobj(B) \
        else float(np.sum(A * B))


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate/flip a vector so its first significant component is positive real.

    The component used is the first one whose magnitude exceeds 1e-8 times the
    largest (a stable notion of "first nonzero" in floating point).
    """
    v = np.asarray(v)
    amax = float(np.max(np.abs(v)))
    if amax == 0.0:
        return v.copy()
    idx = int(np.argmax(np.abs(v) > 1e-8 * amax))
    pivot = v[idx]
    if np.iscomplexobj(v):
        return v * (np.conj(pivot) / abs(pivot))
    return v * (1.0 if pivot > 0 else -1.0)
