"""Nilpotency deciders at three levels: one matrix, a whole matrix
subspace, and an elementary operator over every argument.

Deciding that every element of span{N_1..N_k} inside the m x m matrices
is nilpotent is a polynomial identity problem: the trace of the p-th
power of t_1 N_1 + ... + t_k N_k is a homogeneous polynomial in t of
degree p, and all of them vanish identically iff the space is nilpotent.
The certified mode expands those polynomials monomial by monomial, which
is what evaluating a full product grid and interpolating would recover;
any nonzero coefficient guarantees an explicit counterexample on the
integer grid {0..m}^k.

Simultaneous strict triangularization is a common-kernel recursion: a
space admits a strictly triangularizing flag iff at every stage some
vector outside the current flag is killed into it by every basis element.
The greedy choice is complete because quotients inherit the property.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import ContractError, InconsistencyError, ShapeError
from .exact import (
    Matrix,
    ONE,
    Scalar,
    Vector,
    ZERO,
    char_poly,
    derive_seed,
    inverse,
    is_nilpotent_matrix,
    kernel_basis,
    lambda_power,
    matrix_units,
    random_matrix,
    rank,
    rref,
    scalar,
    trace,
    vec_is_zero,
)
from .operators import (
    ElementaryOperator,
    GramMatrix,
    apply,
    gram,
    minimal_length,
)
from .spaces import OperatorSpace

DEFAULT_SUBSPACE_BUDGET = 200_000
DEFAULT_GRID_BUDGET = 10_000
DEFAULT_TRIALS = 200
DEFAULT_WITNESS_HEIGHT = 100


def is_nilpotent(m: Matrix) -> bool:
    """Exact decision via the characteristic polynomial."""
    return char_poly(m) == lambda_power(m.rows)


@dataclass(frozen=True)
class NilpotentSpaceReport:
    space: OperatorSpace
    all_nilpotent: bool
    method: str  # "exact-grid" or "randomized"
    counterexample: Matrix | None = None


def _element(space: OperatorSpace, coeffs: Sequence[Scalar]) -> Matrix:
    acc = Matrix.zeros(space.ambient_dim)
    for c, n in zip(coeffs, space.basis):
        if not c.is_zero:
            acc = acc + c * n
    return acc


def _trace_identities_vanish(space: OperatorSpace) -> bool:
    """Whether tr((sum t_i N_i)^p) is the zero polynomial for p = 1..m.

    Expands the symmetrized coefficients directly: for each monomial
    multiset the sum of traces of the matching ordered products must be
    zero.  Denominators are cleared per basis element first, which only
    rescales coefficients by positive factors.
    """
    m = space.ambient_dim
    k = space.dim
    cleared = []
    for n in space.basis:
        den, re_g, im_g = n._int_form
        cleared.append(Matrix.from_rows(
            [[Scalar(re_g[i][j], im_g[i][j]) for j in range(m)] for i in range(m)]
        ))
    coeff_sums: dict[tuple[int, ...], Scalar] = {}

    def walk(prefix: Matrix | None, used: tuple[int, ...], depth: int):
        for i in range(k):
            prod_matrix = cleared[i] if prefix is None else prefix @ cleared[i]
            key = tuple(sorted(used + (i,)))
            coeff_sums[key] = coeff_sums.get(key, ZERO) + trace(prod_matrix)
            if depth + 1 < m:
                walk(prod_matrix, used + (i,), depth + 1)

    walk(None, (), 0)
    return all(v.is_zero for v in coeff_sums.values())


def _search_counterexample(space: OperatorSpace) -> Matrix:
    """An element with nonzero trace power; exists once the certificate
    fails, and sits on the integer grid {0..m}^k in the worst case."""
    m = space.ambient_dim
    k = space.dim
    for n in space.basis:
        if not is_nilpotent_matrix(n):
            return n
    for i in range(k):
        for j in range(i + 1, k):
            for sign in (ONE, -ONE):
                cand = space.basis[i] + sign * space.basis[j]
                if not is_nilpotent_matrix(cand):
                    return cand
    for point in product(range(m + 1), repeat=k):
        if not any(point):
            continue
        cand = _element(space, [scalar(c) for c in point])
        if not is_nilpotent_matrix(cand):
            return cand
    raise InconsistencyError("certificate failed but no grid counterexample exists")


def subspace_all_nilpotent(
    space: OperatorSpace,
    budget: int = DEFAULT_SUBSPACE_BUDGET,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
) -> NilpotentSpaceReport:
    """Decide whether every element of the space is nilpotent.

    Certified mode runs whenever the monomial expansion fits the budget;
    otherwise seeded random combinations are tested, where any hit is a
    genuine counterexample but a clean pass is only evidence.
    """
    m = space.ambient_dim
    k = space.dim
    if k == 0:
        return NilpotentSpaceReport(space, True, "exact-grid")
    cost = sum(k**p for p in range(1, m + 1))
    if cost <= budget:
        if _trace_identities_vanish(space):
            return NilpotentSpaceReport(space, True, "exact-grid")
        counterexample = _search_counterexample(space)
        return NilpotentSpaceReport(space, False, "exact-grid", counterexample)
    for t in range(trials):
        coeffs = [
            scalar(c)
            for c in _random_int_point(derive_seed(seed, t), k, DEFAULT_WITNESS_HEIGHT)
        ]
        cand = _element(space, coeffs)
        if not is_nilpotent_matrix(cand):
            return NilpotentSpaceReport(space, False, "randomized", cand)
    return NilpotentSpaceReport(space, True, "randomized")


def _random_int_point(seed: int, k: int, height: int) -> list[int]:
    import random as _random

    rng = _random.Random(seed)
    return [rng.randint(-height, height) for _ in range(k)]


def gerstenhaber_check(
    space: OperatorSpace, report: NilpotentSpaceReport | None = None
) -> bool:
    """Dimension bound m(m-1)/2 for an all-nilpotent space of m x m
    matrices.  A violation contradicts the bound's theorem, so it raises
    as an internal inconsistency rather than returning False."""
    if report is None:
        report = subspace_all_nilpotent(space)
    if not report.all_nilpotent:
        raise ContractError("gerstenhaber_check requires an all-nilpotent space")
    m = space.ambient_dim
    bound = m * (m - 1) // 2
    if space.dim > bound:
        raise InconsistencyError(
            f"all-nilpotent space of dimension {space.dim} exceeds the bound {bound}"
        )
    return True


@dataclass(frozen=True)
class Flag:
    """Ordered independent vectors whose prefix spans are strictly shrunk
    by every element of the triangularized space."""

    vectors: tuple[Vector, ...]


@dataclass(frozen=True)
class NotTriangularizable:
    stage: int


def _reduction_rows(flag: Sequence[Vector], width: int):
    """Echelon data for computing coordinates modulo span(flag)."""
    reduced, pivots = rref(list(flag))
    nonpivot = [c for c in range(width) if c not in pivots]
    return reduced, pivots, nonpivot


def _quotient_matrix(reduced, pivots, nonpivot, width: int) -> Matrix | None:
    """Matrix Q with Q w = coordinates of w in the quotient by the flag span."""
    if not nonpivot:
        return None
    rows = []
    for q in nonpivot:
        row = [ZERO] * width
        row[q] = ONE
        for r_idx, pc in enumerate(pivots):
            row[pc] = -reduced[r_idx][q]
        rows.append(tuple(row))
    return Matrix(tuple(rows))


def strict_triangularize(space: OperatorSpace) -> Flag | NotTriangularizable:
    """Common-kernel recursion for a strictly triangularizing flag.

    At stage s the candidates are vectors w with T w inside the current
    prefix span for every basis T; failure to find one outside the span
    reports the stage (counting from 1) and is definitive.
    """
    m = space.ambient_dim
    flag: list[Vector] = []
    while len(flag) < m:
        reduced, pivots, nonpivot = _reduction_rows(flag, m)
        q = _quotient_matrix(reduced, pivots, nonpivot, m)
        if space.dim == 0 or q is None:
            candidates = [v for v in _standard_complement(pivots, m)]
        else:
            stacked_rows: list[Vector] = []
            for t in space.basis:
                qt = q @ t
                stacked_rows.extend(qt.entries)
            kernel = kernel_basis(Matrix(tuple(stacked_rows)))
            candidates = kernel
        extended = False
        for cand in candidates:
            if len(rref(list(flag) + [cand])[0]) == len(flag) + 1:
                flag.append(cand)
                extended = True
                break
        if not extended:
            return NotTriangularizable(stage=len(flag) + 1)
    result = Flag(tuple(flag))
    _check_flag(space, result)
    return result


def _standard_complement(pivots, m: int) -> list[Vector]:
    out = []
    for c in range(m):
        if c not in pivots:
            out.append(tuple(ONE if i == c else ZERO for i in range(m)))
    return out


def _check_flag(space: OperatorSpace, flag: Flag):
    """Machine-check the flag invariant before handing the flag out."""
    prefix: list[Vector] = []
    for k_idx, vkt in enumerate(flag.vectors):
        lower = prefix
        lower_rank = len(rref(lower)[0])
        for t in space.basis:
            image = t @ vkt
            if len(rref(lower + [image])[0]) != lower_rank and not vec_is_zero(image):
                raise InconsistencyError(
                    f"flag invariant failed at position {k_idx}"
                )
        prefix = lower + [vkt]


SPECIAL_PLANE_FIRST = Matrix.from_rows([[0, 0, 0], [1, 0, 0], [0, -1, 0]])
SPECIAL_PLANE_SECOND = Matrix.from_rows([[0, 1, 0], [0, 0, 1], [0, 0, 0]])


def special_plane_member(alpha, beta) -> Matrix:
    """The exceptional plane of nilpotent 3 x 3 matrices that admits no
    strictly triangularizing flag; every 2-dimensional all-nilpotent plane
    in M_3 is conjugate either into the strict upper triangulars or onto
    this one."""
    a = scalar(alpha) if not isinstance(alpha, Scalar) else alpha
    b = scalar(beta) if not isinstance(beta, Scalar) else beta
    return a * SPECIAL_PLANE_FIRST + b * SPECIAL_PLANE_SECOND


@dataclass(frozen=True)
class Triangularizable:
    flag: Flag


@dataclass(frozen=True)
class SpecialForm:
    """Certified conjugacy onto the exceptional plane: conjugator P and a
    basis (first, second) of the input with P^{-1} first P and
    P^{-1} second P equal to the two canonical generators."""

    first: Matrix
    second: Matrix
    conjugator: Matrix


def classify_nilpotent_2dim_m3(space: OperatorSpace) -> Triangularizable | SpecialForm:
    """The dichotomy for 2-dimensional all-nilpotent planes in M_3.

    The non-triangularizable branch is fully deterministic: the kernel
    vector of the second basis element forces the first conjugator column
    and a single eigenvalue rescale fixes the remaining freedom.  The
    produced conjugation is re-verified exactly.
    """
    if space.ambient_dim != 3 or space.dim != 2:
        raise ContractError("expected a 2-dimensional space of 3x3 matrices")
    report = subspace_all_nilpotent(space)
    if not report.all_nilpotent:
        raise ContractError("expected an all-nilpotent space")
    tri = strict_triangularize(space)
    if isinstance(tri, Flag):
        return Triangularizable(tri)

    first, second = space.basis
    kernel = kernel_basis(second)
    if len(kernel) != 1:
        raise InconsistencyError("dichotomy violated: kernel is not a line")
    p1 = kernel[0]
    image = second @ (first @ p1)
    pivot = next((i for i, x in enumerate(p1) if not x.is_zero))
    delta = image[pivot] / p1[pivot]
    if delta.is_zero or image != tuple(delta * x for x in p1):
        raise InconsistencyError("dichotomy violated: no fixed line")
    second_scaled = (ONE / delta) * second
    col2 = first @ p1
    col3 = tuple(-x for x in (first @ col2))
    conjugator = Matrix.from_columns([p1, col2, col3])
    if rank(conjugator) != 3:
        raise InconsistencyError("dichotomy violated: singular conjugator")
    p_inv = inverse(conjugator)
    if (p_inv @ first @ conjugator) != SPECIAL_PLANE_FIRST or (
        p_inv @ second_scaled @ conjugator
    ) != SPECIAL_PLANE_SECOND:
        raise InconsistencyError("dichotomy violated: conjugation mismatch")
    return SpecialForm(first, second_scaled, conjugator)


# -- block flags on the coefficient products ---------------------------


def block_strict_triangularize(g: GramMatrix) -> Matrix | None:
    """Scalar P making the conjugated block grid vanish on and below the
    diagonal, or None when no stage admits a new flag vector.

    Works in the index space: column j of P must send the block grid into
    the span of the previous columns, blockwise.
    """
    n = g.n
    d = g.ambient_dim
    cols: list[Vector] = []
    while len(cols) < n:
        reduced, pivots, nonpivot = _reduction_rows(cols, n)
        q = _quotient_matrix(reduced, pivots, nonpivot, n)
        stacked: list[Vector] = []
        for q_row in range(len(nonpivot)):
            for alpha in range(d):
                for beta in range(d):
                    row = []
                    for l in range(n):
                        acc = ZERO
                        for k_idx in range(n):
                            c = q.entries[q_row][k_idx]
                            if not c.is_zero:
                                acc = acc + c * g.blocks[k_idx][l].entry(alpha, beta)
                        row.append(acc)
                    stacked.append(tuple(row))
        kernel = kernel_basis(Matrix(tuple(stacked))) if stacked else []
        extended = False
        for cand in kernel:
            if len(rref(cols + [cand])[0]) == len(cols) + 1:
                cols.append(cand)
                extended = True
                break
        if not extended:
            return None
    return Matrix.from_columns(cols)


# -- nilpotency of phi(x) for every x ----------------------------------


@dataclass(frozen=True)
class Certified:
    by: str
    exponent: int | None = None


@dataclass(frozen=True)
class Refuted:
    witness: Matrix
    trials_used: int = 0


@dataclass(frozen=True)
class ProbablyNilpotent:
    trials: int


def refutes(phi: ElementaryOperator, x: Matrix) -> bool:
    """Whether x certifies non-nilpotency, by the characteristic polynomial."""
    return char_poly(apply(phi, x)) != lambda_power(phi.dim)


def trace_condition_witness(phi: ElementaryOperator) -> Matrix | None:
    """Deterministic witness when sum b_i a_i is nonzero: tr(phi(x)) is
    x -> tr(x sum b_i a_i), so a single matrix unit exposes it."""
    from .operators import sum_bi_ai

    s = sum_bi_ai(phi)
    for k in range(phi.dim):
        for l in range(phi.dim):
            if not s.entry(k, l).is_zero:
                return Matrix.unit(phi.dim, l, k)
    return None


def witness_search(
    phi: ElementaryOperator,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    height: int = DEFAULT_WITNESS_HEIGHT,
) -> tuple[Matrix, int] | None:
    """Seeded sampling for x with phi(x) non-nilpotent.

    Cheap trace screen first, then the power test; any hit is re-verified
    through the characteristic polynomial before being returned.
    """
    from .operators import sum_bi_ai

    d = phi.dim
    s = sum_bi_ai(phi)
    for t in range(1, trials + 1):
        x = random_matrix(d, derive_seed(seed, 40_000 + t), height)
        if s.is_zero or trace(x @ s).is_zero:
            y = apply(phi, x)
            if is_nilpotent_matrix(y):
                continue
        if refutes(phi, x):
            return x, t
    return None


def all_x_nilpotent(
    phi: ElementaryOperator,
    budget: int = DEFAULT_GRID_BUDGET,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    height: int = DEFAULT_WITNESS_HEIGHT,
    mode: str = "auto",
) -> Certified | Refuted | ProbablyNilpotent:
    """Is phi(x) nilpotent for every x?  Three tiers of evidence.

    Structural: the length-at-most-3 classifier, or a block flag at any
    length, certifies all x at once with an explicit power exponent.
    Grid: when (d+1)^(d*d) fits the budget, integer grid enumeration of
    the trace-power identities is a complete decision.  Sampling: seeded
    random arguments, where any hit is an exact refutation.

    mode "sampling" skips the first two tiers, giving an oracle that
    shares nothing with the classifier's search.
    """
    if mode not in ("auto", "structural", "grid", "sampling"):
        raise ContractError(f"unknown mode {mode!r}")
    n, reduced = minimal_length(phi)
    if n == 0:
        return Certified(by="zero operator", exponent=1)
    d = phi.dim

    if mode in ("auto", "structural"):
        if n <= 3:
            from .classify import classify

            verdict = classify(reduced, trials=trials, seed=seed)
            if verdict.status == "LQN":
                return Certified(by=verdict.form or "canonical form", exponent=_form_exponent(verdict, n))
            if verdict.status == "NotLQN":
                return Refuted(witness=verdict.witness, trials_used=verdict.evidence.get("trials", 0))
        else:
            p = block_strict_triangularize(gram(reduced))
            if p is not None:
                return Certified(by="pattern-i", exponent=n + 1)
        if mode == "structural":
            return ProbablyNilpotent(trials=0)

    if mode in ("auto", "grid") and (d + 1) ** (d * d) <= budget:
        witness = _grid_refutation(reduced)
        if witness is None:
            return Certified(by="exact-grid", exponent=None)
        return Refuted(witness=witness)

    found = witness_search(reduced, trials=trials, seed=seed, height=height)
    if found is not None:
        x, t = found
        return Refuted(witness=x, trials_used=t)
    return ProbablyNilpotent(trials=trials)


def _form_exponent(verdict, n: int) -> int:
    if verdict.form in ("pattern-i", "length2-zeros"):
        return n + 1
    if verdict.form in ("special-ii", "special-iii"):
        return 5
    if verdict.form == "dimv1-block":
        r = verdict.parameters.r if verdict.parameters else n
        return (r or n) + 2
    return n + 2


def _grid_refutation(phi: ElementaryOperator) -> Matrix | None:
    """Complete integer-grid decision of the trace-power identities.

    tr(phi(x)^p) has degree at most p <= d in every entry of x, so if
    phi(x) is nilpotent at every point of {0..d}^(d*d) the identities
    vanish everywhere.
    """
    d = phi.dim
    for values in product(range(d + 1), repeat=d * d):
        x = Matrix.from_rows(
            [[values[i * d + j] for j in range(d)] for i in range(d)]
        )
        if not is_nilpotent_matrix(apply(phi, x)):
            return x
    return None


@dataclass(frozen=True)
class GradedProductReport:
    ok: bool
    failure: str | None = None


def graded_product_check(
    parts: Sequence[ElementaryOperator],
    probe_tuples: Sequence[Sequence[Matrix]],
) -> GradedProductReport:
    """Verify the one-directional annihilation hypothesis and its product
    consequence.

    The hypothesis part_j(x) part_i(y) = 0 for j >= i is bilinear in
    (x, y), so checking all matrix unit pairs is a complete decision.
    Given the hypothesis, every (n+1)-fold product of values of the sum
    must vanish; the probe tuples are asserted against exactly that.
    """
    if not parts:
        raise ContractError("at least one part is required")
    d = parts[0].dim
    if any(p.dim != d for p in parts):
        raise ShapeError("parts must share the ambient dimension")
    units = matrix_units(d)
    for j in range(len(parts)):
        for i in range(j + 1):
            for x in units:
                left = apply(parts[j], x)
                if left.is_zero:
                    continue
                for y in units:
                    if not (left @ apply(parts[i], y)).is_zero:
                        return GradedProductReport(
                            False, f"hypothesis failed at parts ({j}, {i})"
                        )
    n = len(parts)
    total = ElementaryOperator(
        d, tuple(pair for part in parts for pair in part.pairs)
    )
    for idx, probe in enumerate(probe_tuples):
        if len(probe) != n + 1:
            raise ContractError(f"probe tuple {idx} must have {n + 1} entries")
        acc = Matrix.identity(d)
        for x in probe:
            acc = acc @ apply(total, x)
        if not acc.is_zero:
            return GradedProductReport(False, f"product probe {idx} did not vanish")
    return GradedProductReport(True)
