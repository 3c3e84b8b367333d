"""Elementary operators x -> sum a_i x b_i and their representation algebra.

An operator is an ordered list of coefficient pairs over a fixed square
ambient dimension.  Different pair lists can encode the same map; the
minimal number of pairs is the length, and any two minimal-length pair
lists are related by an invertible scalar change of representation that
conjugates the block matrix (b_i a_j) entrywise.

Equality of operators as maps is decided on the matrix units of the
ambient algebra, which is complete because the map is linear in x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    BasisError,
    ContractError,
    DomainError,
    InconsistencyError,
    PreconditionError,
    ShapeError,
)
from .exact import (
    Matrix,
    Scalar,
    Vector,
    ZERO,
    inverse,
    matrix_units,
    rank,
    rref,
    solve_vec,
    vec_scale,
    vec_sub,
)
from .spaces import OperatorSpace, reduce_basis


@dataclass(frozen=True)
class ElementaryOperator:
    """Coefficient pairs (a_i, b_i) acting as x -> sum a_i x b_i.

    The zero operator is the one value with an empty pair list; it is
    flagged by is_zero and produced by minimal_length on zero maps.
    """

    dim: int
    pairs: tuple[tuple[Matrix, Matrix], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise ShapeError("ambient dimension must be positive")
        for a, b in self.pairs:
            if not (a.rows == a.cols == self.dim and b.rows == b.cols == self.dim):
                raise ShapeError("coefficients must be square of the ambient dimension")

    @classmethod
    def from_pairs(cls, dim: int, pairs: Sequence[tuple[Matrix, Matrix]]) -> "ElementaryOperator":
        return cls(dim, tuple((a, b) for a, b in pairs))

    @classmethod
    def zero(cls, dim: int) -> "ElementaryOperator":
        return cls(dim, ())

    @property
    def is_zero(self) -> bool:
        return not self.pairs

    @property
    def term_count(self) -> int:
        return len(self.pairs)

    def __call__(self, x: Matrix) -> Matrix:
        return apply(self, x)


def apply(phi: ElementaryOperator, x: Matrix) -> Matrix:
    """Exact evaluation sum a_i x b_i."""
    if x.rows != phi.dim or x.cols != phi.dim:
        raise ShapeError("argument shape does not match the ambient dimension")
    total = Matrix.zeros(phi.dim)
    for a, b in phi.pairs:
        total = total + (a @ x) @ b
    return total


def maps_equal(phi: ElementaryOperator, psi: ElementaryOperator) -> bool:
    """Exact equality as maps, probed on all matrix units."""
    if phi.dim != psi.dim:
        raise ShapeError("ambient dimensions differ")
    for unit in matrix_units(phi.dim):
        if apply(phi, unit) != apply(psi, unit):
            return False
    return True


def _independent_subset(mats: Sequence[Matrix]) -> tuple[list[int], dict[int, list[Scalar]]]:
    """Earliest independent indices plus coordinates of the remaining
    matrices in that independent set."""
    kept: list[int] = []
    for idx, m in enumerate(mats):
        rows = [mats[i].vectorize() for i in kept] + [m.vectorize()]
        if len(rref(rows)[0]) == len(kept) + 1:
            kept.append(idx)
    coords: dict[int, list[Scalar]] = {}
    if kept:
        basis_matrix = Matrix.from_columns([mats[i].vectorize() for i in kept])
        for idx, m in enumerate(mats):
            if idx in kept:
                continue
            sol = solve_vec(basis_matrix, m.vectorize())
            if sol is None:  # pragma: no cover
                raise InconsistencyError("dependent matrix failed to resolve")
            coords[idx] = list(sol)
    return kept, coords


def minimal_length(phi: ElementaryOperator) -> tuple[int, ElementaryOperator]:
    """Length of the map and a representation with that many pairs.

    Alternately eliminates dependencies among the left and right
    coefficients, folding each discarded pair into the kept ones; the
    process terminates with both coefficient families independent, which
    pins the pair count at the rank of the vectorized coefficient tensor.
    """
    pairs = [(a, b) for a, b in phi.pairs if not a.is_zero and not b.is_zero]
    while True:
        if not pairs:
            return 0, ElementaryOperator.zero(phi.dim)
        a_list = [p[0] for p in pairs]
        kept, coords = _independent_subset(a_list)
        if len(kept) < len(pairs):
            new_pairs = []
            for pos, idx in enumerate(kept):
                b_new = pairs[idx][1]
                for drop_idx, c in coords.items():
                    if not c[pos].is_zero:
                        b_new = b_new + c[pos] * pairs[drop_idx][1]
                new_pairs.append((pairs[idx][0], b_new))
            pairs = [(a, b) for a, b in new_pairs if not a.is_zero and not b.is_zero]
            continue
        b_list = [p[1] for p in pairs]
        kept, coords = _independent_subset(b_list)
        if len(kept) < len(pairs):
            new_pairs = []
            for pos, idx in enumerate(kept):
                a_new = pairs[idx][0]
                for drop_idx, c in coords.items():
                    if not c[pos].is_zero:
                        a_new = a_new + c[pos] * pairs[drop_idx][0]
                new_pairs.append((a_new, pairs[idx][1]))
            pairs = [(a, b) for a, b in new_pairs if not a.is_zero and not b.is_zero]
            continue
        break
    return len(pairs), ElementaryOperator(phi.dim, tuple(pairs))


def is_reduced(phi: ElementaryOperator) -> bool:
    if phi.is_zero:
        return True
    a_rows = [a.vectorize() for a, _ in phi.pairs]
    b_rows = [b.vectorize() for _, b in phi.pairs]
    n = phi.term_count
    return len(rref(a_rows)[0]) == n and len(rref(b_rows)[0]) == n


def left_space(phi: ElementaryOperator) -> OperatorSpace:
    return reduce_basis([a for a, _ in phi.pairs], ambient_dim=phi.dim)


def right_space(phi: ElementaryOperator) -> OperatorSpace:
    return reduce_basis([b for _, b in phi.pairs], ambient_dim=phi.dim)


def v_space(phi: ElementaryOperator) -> OperatorSpace:
    products = [b @ a for _, b in phi.pairs for a, _ in phi.pairs]
    return reduce_basis([p for p in products if not p.is_zero], ambient_dim=phi.dim)


@dataclass(frozen=True)
class GramMatrix:
    """The n x n grid of products b_i a_j, the invariant that changes only
    by entrywise scalar similarity under representation changes."""

    n: int
    ambient_dim: int
    blocks: tuple[tuple[Matrix, ...], ...]

    def block(self, i: int, j: int) -> Matrix:
        return self.blocks[i][j]


def gram(phi: ElementaryOperator) -> GramMatrix:
    n = phi.term_count
    blocks = tuple(
        tuple(phi.pairs[i][1] @ phi.pairs[j][0] for j in range(n)) for i in range(n)
    )
    return GramMatrix(n, phi.dim, blocks)


def gram_conjugate(g: GramMatrix, p: Matrix) -> GramMatrix:
    """Blockwise P^{-1} G P for an invertible scalar matrix P."""
    if p.rows != g.n or p.cols != g.n:
        raise ShapeError("conjugator size must match the block count")
    p_inv = inverse(p)
    n = g.n
    d = g.ambient_dim
    new_blocks = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = Matrix.zeros(d)
            for k in range(n):
                for l in range(n):
                    c = p_inv.entry(i, k) * p.entry(l, j)
                    if not c.is_zero:
                        acc = acc + c * g.blocks[k][l]
            row.append(acc)
        new_blocks.append(tuple(row))
    return GramMatrix(n, d, tuple(new_blocks))


@dataclass(frozen=True)
class Representation:
    """An alternative pair list (u_i, v_i) for an operator, optionally with
    the scalar matrix P relating it to the source coefficients."""

    dim: int
    u: tuple[Matrix, ...]
    v: tuple[Matrix, ...]
    P: Matrix | None = None

    def as_operator(self) -> ElementaryOperator:
        return ElementaryOperator(self.dim, tuple(zip(self.u, self.v)))

    def gram(self) -> GramMatrix:
        return gram(self.as_operator())


def _require_reduced(phi: ElementaryOperator, op_name: str):
    if not is_reduced(phi):
        raise ContractError(f"{op_name} requires a length-reduced operator")


def change_left_basis(phi: ElementaryOperator, new_left: Sequence[Matrix]) -> Representation:
    """Rewrite phi over a chosen basis of its left coefficient space.

    Solves u_j = sum_k P[k][j] a_k for the unique P, then carries the
    right coefficients through P^{-1}; the result is verified to be the
    same map before it is returned.
    """
    _require_reduced(phi, "change_left_basis")
    n = phi.term_count
    if len(new_left) != n:
        raise BasisError(f"expected {n} basis matrices, got {len(new_left)}")
    a_matrix = Matrix.from_columns([a.vectorize() for a, _ in phi.pairs])
    columns = []
    for u in new_left:
        coords = solve_vec(a_matrix, u.vectorize())
        if coords is None:
            raise BasisError("a proposed basis matrix lies outside the left space")
        columns.append(coords)
    p = Matrix.from_columns(columns)
    if rank(p) != n:
        raise BasisError("the proposed matrices are linearly dependent")
    return _apply_scalar_change(phi, p)


def similarity_transform(phi: ElementaryOperator, p: Matrix) -> Representation:
    """Representation change by an invertible scalar matrix P."""
    _require_reduced(phi, "similarity_transform")
    n = phi.term_count
    if p.rows != n or p.cols != n:
        raise ShapeError("P must be n x n for an n-pair operator")
    if rank(p) != n:
        raise DomainError("P is singular")
    return _apply_scalar_change(phi, p)


def _apply_scalar_change(phi: ElementaryOperator, p: Matrix) -> Representation:
    n = phi.term_count
    p_inv = inverse(p)
    u = []
    v = []
    for j in range(n):
        acc = Matrix.zeros(phi.dim)
        for k in range(n):
            c = p.entry(k, j)
            if not c.is_zero:
                acc = acc + c * phi.pairs[k][0]
        u.append(acc)
    for i in range(n):
        acc = Matrix.zeros(phi.dim)
        for k in range(n):
            c = p_inv.entry(i, k)
            if not c.is_zero:
                acc = acc + c * phi.pairs[k][1]
        v.append(acc)
    rep = Representation(phi.dim, tuple(u), tuple(v), p)
    if not maps_equal(rep.as_operator(), phi):  # pragma: no cover
        raise InconsistencyError("representation change failed to preserve the map")
    return rep


def adjoint_flip(phi: ElementaryOperator) -> ElementaryOperator:
    """Swap every pair (a, b) -> (b, a); an involution on pair lists."""
    return ElementaryOperator(phi.dim, tuple((b, a) for a, b in phi.pairs))


def compose_is_zero(
    psi: ElementaryOperator,
    phi: ElementaryOperator,
    algebra_basis: Sequence[Matrix] | None = None,
) -> bool:
    """Whether x -> psi(phi(x)) is the zero map.

    Complete exact decision: the composition is linear in x, so probing a
    basis of the ambient matrix algebra settles it.
    """
    if psi.dim != phi.dim:
        raise ShapeError("ambient dimensions differ")
    basis = list(algebra_basis) if algebra_basis is not None else matrix_units(phi.dim)
    for x in basis:
        if not apply(psi, apply(phi, x)).is_zero:
            return False
    return True


def local_matrix(phi: ElementaryOperator, zeta: Vector, x: Matrix) -> Matrix:
    """Matrix of phi(x) restricted to span{a_i zeta} in that image basis.

    Requires {a_i zeta} independent and x * b_i a_j zeta proportional to
    zeta for every block; both are checked exactly and violations name
    the offending condition and block.
    """
    n = phi.term_count
    if n == 0:
        raise ContractError("the zero operator has no local matrix")
    if len(zeta) != phi.dim:
        raise ShapeError("vector length does not match the ambient dimension")
    images = [a @ zeta for a, _ in phi.pairs]
    if len(rref(images)[0]) != n:
        raise PreconditionError("the images a_i zeta are linearly dependent")
    pivot_index = next(i for i in range(len(zeta)) if not zeta[i].is_zero)
    rows: list[list[Scalar]] = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            w = x @ (phi.pairs[i][1] @ (phi.pairs[j][0] @ zeta))
            lam = w[pivot_index] / zeta[pivot_index]
            if vec_sub(w, vec_scale(lam, zeta)) != tuple(ZERO for _ in zeta):
                raise PreconditionError(
                    f"x b_{i} a_{j} zeta is not proportional to zeta"
                )
            rows[i][j] = lam
    return Matrix(tuple(tuple(r) for r in rows))


def sum_bi_ai(phi: ElementaryOperator) -> Matrix:
    total = Matrix.zeros(phi.dim)
    for a, b in phi.pairs:
        total = total + b @ a
    return total
