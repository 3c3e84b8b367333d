"""Finite-dimensional spaces of matrices: spans, evaluation at vectors,
local dimension with certified witnesses, and rank-one factorization.

The local dimension of a space V is max over vectors z of dim(V z).  It is
attained at generic z, so sampling gives the exact value with witness
almost surely; tiny instances are settled exactly by enumerating an
integer grid large enough to separate the relevant minors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

from .errors import ContractError, InconsistencyError, RankError, SeparatingVectorError, ShapeError
from .exact import (
    Matrix,
    ONE,
    Vector,
    derive_seed,
    outer,
    random_vector,
    rank,
    rref,
    scalar,
    vec_is_zero,
    zero_vector,
)

#: Size gate below which local dimension is decided by exact enumeration.
EXACT_LOCAL_DIM_GATE = 16

DEFAULT_SAMPLE_HEIGHT = 100


@dataclass(frozen=True)
class OperatorSpace:
    """A subspace of d x d matrices given by a linearly independent basis."""

    ambient_dim: int
    basis: tuple[Matrix, ...]

    def __post_init__(self):
        d = self.ambient_dim
        for m in self.basis:
            if m.rows != d or m.cols != d:
                raise ShapeError("basis matrices must all be ambient_dim square")

    @property
    def dim(self) -> int:
        return len(self.basis)


def reduce_basis(mats: Sequence[Matrix], ambient_dim: int | None = None) -> OperatorSpace:
    """Span of the given matrices, keeping the earliest independent generators.

    Empty input yields the zero space; ambient_dim is then required.
    """
    if not mats:
        if ambient_dim is None:
            raise ShapeError("ambient_dim is required for an empty generating set")
        return OperatorSpace(ambient_dim, ())
    d = mats[0].rows
    if ambient_dim is not None and ambient_dim != d:
        raise ShapeError("ambient_dim disagrees with the generators")
    kept: list[Matrix] = []
    echelon: list[Vector] = []
    for m in mats:
        if m.rows != d or m.cols != d:
            raise ShapeError("generators must share one square shape")
        candidate = list(echelon) + [m.vectorize()]
        reduced, _ = rref(candidate)
        if len(reduced) > len(echelon):
            echelon = reduced
            kept.append(m)
    return OperatorSpace(d, tuple(kept))


def span_contains(space: OperatorSpace, m: Matrix) -> bool:
    if not space.basis:
        return m.is_zero
    rows = [b.vectorize() for b in space.basis]
    before = len(rref(rows)[0])
    after = len(rref(rows + [m.vectorize()])[0])
    return after == before


def evaluate(space: OperatorSpace, zeta: Vector) -> list[Vector]:
    """Reduced basis of span{T zeta : T in the basis}."""
    if len(zeta) != space.ambient_dim:
        raise ShapeError("vector length does not match the ambient dimension")
    images: list[Vector] = []
    echelon: list[Vector] = []
    for t in space.basis:
        img = t @ zeta
        reduced, _ = rref(list(echelon) + [img])
        if len(reduced) > len(echelon):
            echelon = reduced
            images.append(img)
    return images


@dataclass(frozen=True)
class LocalDimResult:
    """Outcome of a local dimension computation.

    The witness always re-verifies: evaluating the space at it yields
    exactly `value` independent images.  `exact` marks the enumerated
    mode, where the value is also a certified upper bound.
    """

    value: int
    witness: Vector
    certified_lower_bound: bool
    trials_used: int
    exact: bool


def _image_dim(space: OperatorSpace, zeta: Vector) -> int:
    return len(evaluate(space, zeta))


def local_dimension(space: OperatorSpace, seed: int = 0, trials: int = 24) -> LocalDimResult:
    """Max over z of dim(space applied to z), with a verifying witness.

    Instances with ambient_dim^2 * dim <= 16 are settled exactly by
    enumerating the grid {0..r}^d with r = min(d, dim): any r x r minor of
    the stacked image matrix has degree at most r in each coordinate, so a
    nonzero minor is nonzero somewhere on that grid.  Larger instances
    sample seeded rational vectors; the all-ones vector is tried first.
    """
    d = space.ambient_dim
    k = space.dim
    cap = min(d, k)
    if k == 0:
        return LocalDimResult(0, zero_vector(d), True, 0, True)
    if d * d * k <= EXACT_LOCAL_DIM_GATE:
        best = 0
        best_witness = zero_vector(d)
        count = 0
        for point in product(range(cap + 1), repeat=d):
            count += 1
            zeta = tuple(scalar(c) for c in point)
            dim_here = _image_dim(space, zeta)
            if dim_here > best:
                best = dim_here
                best_witness = zeta
                if best == cap:
                    break
        return LocalDimResult(best, best_witness, True, count, True)
    if trials < 1:
        raise ContractError("at least one trial is required")
    best = 0
    best_witness = zero_vector(d)
    used = 0
    for t in range(trials):
        used += 1
        if t == 0:
            zeta = tuple(ONE for _ in range(d))
        else:
            zeta = random_vector(d, derive_seed(seed, t), DEFAULT_SAMPLE_HEIGHT)
        dim_here = _image_dim(space, zeta)
        if dim_here > best:
            best = dim_here
            best_witness = zeta
            if best == cap:
                break
    return LocalDimResult(best, best_witness, True, used, False)


def simultaneous_separating_vector(
    spaces: Sequence[OperatorSpace], seed: int = 0, trials: int = 32
) -> Vector:
    """A single vector attaining the local dimension of every given space.

    Such vectors are generic, so seeded sampling finds one quickly; if the
    budget runs out a SeparatingVectorError reports the best candidate and
    the first space that rejected it.
    """
    if not spaces:
        raise ContractError("at least one space is required")
    d = spaces[0].ambient_dim
    if any(s.ambient_dim != d for s in spaces):
        raise ShapeError("spaces must share the ambient dimension")
    targets = [local_dimension(s, seed=derive_seed(seed, 101 + i)).value for i, s in enumerate(spaces)]
    best: Vector = zero_vector(d)
    best_score = -1
    failing = 0
    for t in range(trials):
        if t == 0:
            zeta = tuple(ONE for _ in range(d))
        else:
            zeta = random_vector(d, derive_seed(seed, 7_000 + t), DEFAULT_SAMPLE_HEIGHT)
        score = 0
        reject = -1
        for i, s in enumerate(spaces):
            if _image_dim(s, zeta) == targets[i]:
                score += 1
            else:
                reject = i
                break
        if score == len(spaces):
            return zeta
        if score > best_score:
            best_score = score
            best = zeta
            failing = reject
    raise SeparatingVectorError(best, failing, trials)


def is_locally_linearly_dependent(space: OperatorSpace, seed: int = 0, trials: int = 24) -> bool:
    """True iff the local dimension falls short of the dimension.

    Exact below the enumeration gate; otherwise the sampled witness makes
    a False answer certified and a True answer generically correct.
    """
    result = local_dimension(space, seed=seed, trials=trials)
    return result.value < space.dim


@dataclass(frozen=True)
class RankOne:
    """Factorization m = column * functional^T of a rank-one matrix.

    Normalized so the first nonzero entry of the functional is 1, which
    makes factorizations canonical and comparable.
    """

    column: Vector
    functional: Vector

    def reconstruct(self) -> Matrix:
        return outer(self.column, self.functional)


def rank_one_factor(m: Matrix) -> RankOne:
    actual = rank(m)
    if actual != 1:
        raise RankError(actual)
    col_index = next(j for j in range(m.cols) if not vec_is_zero(m.column(j)))
    column = m.column(col_index)
    row_index = next(i for i in range(m.rows) if not column[i].is_zero)
    pivot = column[row_index]
    functional = tuple(e / pivot for e in m.row(row_index))
    factored = RankOne(column, functional)
    if factored.reconstruct() != m:
        raise InconsistencyError("rank-one reconstruction failed")  # pragma: no cover
    return factored


class HatSpaceCheck(NamedTuple):
    within_bound: bool
    max_rank: int
    local_dim: int


def hat_space(space: OperatorSpace, probes: Sequence[Vector], seed: int = 0) -> HatSpaceCheck:
    """Rank of the evaluation maps z -> (T -> T z) over the given probes.

    Each such map has rank dim(space applied at z), so the maximum over
    probes never exceeds the local dimension.  When the local dimension is
    known exactly a violation is impossible and raises loudly.
    """
    ldim = local_dimension(space, seed=seed)
    max_rank = 0
    for zeta in probes:
        max_rank = max(max_rank, _image_dim(space, zeta))
    within = max_rank <= ldim.value
    if not within and ldim.exact:
        raise InconsistencyError("probe rank exceeded an exactly known local dimension")
    return HatSpaceCheck(within, max_rank, ldim.value)
