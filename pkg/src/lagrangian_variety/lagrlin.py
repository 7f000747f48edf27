"""
Isotropic and Lagrangian subspaces of split quadratic spaces over the rationals.

The spaces that matter are h + h with <(x1, x2), (y1, y2)> = <<x1, y1>> - <<x2, y2>>, and its
subspaces z_S + z_T. Subspaces are stored in the coordinates of their ambient space; the ambient
space remembers how it sits inside h + h.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import List, Optional, Sequence, Tuple

from sympy import sqrt
from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import (
    DegenerateFormError,
    DependentBasisError,
    DimensionMismatchError,
    NotLagrangianError,
    NotSplitError,
)
from lagrangian_variety.rootdata import RootSystem, gamma_matrix, h_basis, z_basis

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class QuadraticSpace:
    """A nondegenerate quadratic space, optionally embedded in a larger one."""

    gram: DomainMatrix
    tag: str = ""
    """Where the space comes from, e.g. "h+h" or "z{a1}+z{a1}" """
    embedding: Optional[DomainMatrix] = None
    """Rows: the basis of this space in the coordinates of h + h"""

    def __post_init__(self):
        if linalg.rank(self.gram) != self.gram.shape[0]:
            raise DegenerateFormError(f"degenerate Gram matrix on {self.tag or 'space'}")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def form(self, x: DomainMatrix, y: DomainMatrix) -> DomainMatrix:
        return linalg.pairing(x, self.gram, y)

    def to_parent(self, rows: DomainMatrix) -> DomainMatrix:
        if self.embedding is None:
            return rows
        return linalg.multiply(rows, self.embedding)

    def from_parent(self, rows: DomainMatrix) -> DomainMatrix:
        if self.embedding is None:
            return rows
        return linalg.coordinates(self.embedding, rows)


@dataclass(frozen=True, eq=False)
class LagrangianSubspace:
    """Rows of basis span a subspace of ambient; see is_lagrangian for the actual check."""

    ambient: QuadraticSpace
    basis: DomainMatrix
    name: str = ""

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def parent_rows(self) -> DomainMatrix:
        """Basis in h + h coordinates."""
        return self.ambient.to_parent(self.basis)

    def __str__(self) -> str:
        return self.name or f"V(dim {self.dim})"


def hh_space(rs: RootSystem) -> QuadraticSpace:
    """h + h with the form diag(K, -K)."""
    K = rs.killing_matrix
    return QuadraticSpace(linalg.block_diag(K, -K), "h+h")


def zz_space(rs: RootSystem, S: Sequence[int], T: Sequence[int]) -> QuadraticSpace:
    """z_S + z_T inside h + h."""
    r = rs.rank
    z_S, z_T = z_basis(rs, S), z_basis(rs, T)
    embedding = linalg.stack(
        linalg.hstack(z_S, linalg.zeros(z_S.shape[0], r)),
        linalg.hstack(linalg.zeros(z_T.shape[0], r), z_T),
    )
    gram = linalg.pairing(embedding, hh_space(rs).gram, embedding)
    tag = "z{" + ",".join(f"a{i + 1}" for i in S) + "}+z{" + ",".join(f"a{j + 1}" for j in T) + "}"
    return QuadraticSpace(gram, tag, embedding)


def subspace(ambient: QuadraticSpace, parent_rows: DomainMatrix, name: str = "") -> LagrangianSubspace:
    """Wrap rows given in h + h coordinates as a subspace of ambient."""
    return LagrangianSubspace(ambient, ambient.from_parent(parent_rows), name)


def is_lagrangian(V: LagrangianSubspace, space: Optional[QuadraticSpace] = None) -> bool:
    """Isotropic and half-dimensional."""
    space = space or V.ambient
    if V.basis.shape[1] != space.dim:
        raise DimensionMismatchError(f"basis has {V.basis.shape[1]} columns, space has dimension {space.dim}")
    if linalg.rank(V.basis) != V.dim:
        raise DependentBasisError(f"{V.dim} basis rows of rank {linalg.rank(V.basis)}")
    return 2 * V.dim == space.dim and linalg.is_isotropic(V.basis, space.gram)


def require_lagrangian(V: LagrangianSubspace) -> None:
    if not is_lagrangian(V):
        raise NotLagrangianError(f"{V} is not Lagrangian in {V.ambient.tag}")


def same_component(V1: LagrangianSubspace, V2: LagrangianSubspace) -> bool:
    """Whether dim V1 - dim(V1 meet V2) is even."""
    if V1.ambient.dim != V2.ambient.dim or V1.basis.shape[1] != V2.basis.shape[1]:
        raise DimensionMismatchError(f"ambient dimensions {V1.ambient.dim} and {V2.ambient.dim} differ")
    if V1.ambient.dim % 2:
        raise DimensionMismatchError("components are only compared in even dimension")
    if not (is_lagrangian(V1) and is_lagrangian(V2)):
        raise NotLagrangianError("same_component needs two Lagrangian subspaces")
    return (V1.dim - linalg.dim(linalg.intersect(V1.basis, V2.basis))) % 2 == 0


def parity(V: LagrangianSubspace, reference: LagrangianSubspace) -> int:
    """0 when V lies in the component of reference, 1 otherwise."""
    return 0 if same_component(V, reference) else 1


def lagrangian_grassmannian_dim(ambient_dim: int) -> int:
    """n(n-1)/2 for ambient dimension 2n, n(n+1)/2 for 2n + 1."""
    if ambient_dim < 0:
        raise ValueError("dimension must be nonnegative")
    n = ambient_dim // 2
    if ambient_dim % 2 == 0:
        return n * (n - 1) // 2
    return n * (n + 1) // 2


def lagrangian_components(ambient_dim: int) -> int:
    """Connected components of the Lagrangian Grassmannian: two in positive even dimension."""
    return 2 if ambient_dim > 0 and ambient_dim % 2 == 0 else 1


def isotropic_lines(space: QuadraticSpace) -> Tuple[LagrangianSubspace, LagrangianSubspace]:
    """The two isotropic lines of a split plane, or NotSplitError when -det is not a rational square."""
    if space.dim != 2:
        raise DimensionMismatchError(f"isotropic_lines needs a plane, got dimension {space.dim}")
    K = space.gram.domain
    (a, b), (_, c) = [[K.to_sympy(x) for x in row] for row in linalg.entries(space.gram)]
    discriminant = b * b - a * c
    root = sqrt(discriminant)
    if discriminant.is_Rational and not root.is_Rational:
        raise NotSplitError(discriminant)
    if a == 0:
        lines = [(1, 0), (-c / (2 * b), 1)]
    else:
        lines = [((-b + root) / a, 1), ((-b - root) / a, 1)]
    domain = linalg.unify(K, linalg.field_of([x for line in lines for x in line]))
    return tuple(
        LagrangianSubspace(space, linalg.matrix([line], 2, domain), name=f"line{k}") for k, line in enumerate(lines)
    )


# Isometries and graphs


def reflection(x: DomainMatrix, gram: DomainMatrix) -> DomainMatrix:
    """tau_x(y) = y - 2 <x, y> / <x, x> x, acting on column vectors; x is a row."""
    q = linalg.entries(linalg.pairing(x, gram, x))[0][0]
    if q == gram.domain.zero:
        raise ValueError("cannot reflect in an isotropic vector")
    outer = linalg.multiply(x.transpose(), linalg.multiply(x, gram))
    factor = linalg.element(-2, outer.domain) / q
    return linalg.add(linalg.eye(gram.shape[0], outer.domain), linalg.scale(outer, factor))


def witt_extension(gram: DomainMatrix, source: DomainMatrix, target: DomainMatrix) -> DomainMatrix:
    """
    An isometry g of (Q^m, gram) with g(source_k) = target_k, built from reflections.

    Source and target rows must have the same Gram matrix. Each reflection fixes the targets
    already matched, so the product realizes all pairs at once.
    """
    if not linalg.equal(linalg.pairing(source, gram, source), linalg.pairing(target, gram, target)):
        raise ValueError("source and target have different Gram matrices")
    m = gram.shape[0]
    g = linalg.eye(m, gram.domain)
    matched = linalg.zeros(0, m, gram.domain)
    zero = gram.domain.zero
    for k in range(source.shape[0]):
        current = linalg.image(g, source[k : k + 1, :])
        goal = target[k : k + 1, :]
        difference = linalg.subtract(current, goal)
        if linalg.is_zero(difference):
            pass
        elif linalg.entries(linalg.pairing(difference, gram, difference))[0][0] != zero:
            g = linalg.multiply(reflection(difference, gram), g)
        else:
            # isotropic difference: go through -goal using vectors orthogonal to the matched span
            along = _projection_onto(matched, gram, goal)
            t = linalg.subtract(goal, along)
            total = linalg.subtract(linalg.add(current, goal), linalg.scale(along, 2))
            g = linalg.multiply(reflection(t, gram), reflection(total, gram), g)
        matched = linalg.stack(matched, goal)
    assert linalg.equal(linalg.image(g, source), target)
    return g


def _projection_onto(span: DomainMatrix, gram: DomainMatrix, x: DomainMatrix) -> DomainMatrix:
    """Orthogonal projection of the row x onto a nondegenerate span."""
    if span.shape[0] == 0:
        return linalg.zeros(1, x.shape[1], x.domain)
    inner = linalg.pairing(span, gram, span)
    coefficients = linalg.multiply(linalg.pairing(x, gram, span), linalg.inverse(inner))
    return linalg.multiply(coefficients, span)


def orthogonal_basis(rows: DomainMatrix, gram: DomainMatrix) -> DomainMatrix:
    """Gram-Schmidt over the rationals; the form must be definite on the span."""
    basis = linalg.zeros(0, rows.shape[1], rows.domain)
    for k in range(rows.shape[0]):
        vector = linalg.subtract(rows[k : k + 1, :], _projection_onto(basis, gram, rows[k : k + 1, :]))
        if not linalg.is_zero(vector):
            basis = linalg.stack(basis, vector)
    return basis


def graph(space: QuadraticSpace, source: DomainMatrix, mapping: DomainMatrix, name: str = "") -> LagrangianSubspace:
    """{(x, mapping x) : x in span(source)} inside space, given in h + h coordinates."""
    rows = linalg.hstack(source, linalg.image(mapping, source))
    return subspace(space, rows, name)


def h_delta(rs: RootSystem) -> LagrangianSubspace:
    """The diagonal {(x, x)} of h + h."""
    r = rs.rank
    return graph(hh_space(rs), linalg.eye(r), linalg.eye(r), "h_Delta")


def h_minus_delta(rs: RootSystem) -> LagrangianSubspace:
    """The antidiagonal {(x, -x)} of h + h."""
    r = rs.rank
    return graph(hh_space(rs), linalg.eye(r), -linalg.eye(r), "h_-Delta")


def gamma_extension(rs: RootSystem, d) -> DomainMatrix:
    """A Killing isometry of h extending gamma_d: H_a -> H_d(a) on h_S."""
    S = [i for i, _ in d]
    T = [j for _, j in d]
    if not S:
        return linalg.eye(rs.rank)
    return witt_extension(rs.killing_matrix, h_basis(rs, S), h_basis(rs, T))


def sign_patterns(rs: RootSystem, S: Sequence[int], T: Sequence[int], d) -> List[LagrangianSubspace]:
    """
    Coordinate Lagrangians of z_S + z_T: with an orthogonal basis b_k of z_S and g extending
    gamma_d, the span of the lines (b_k, +-g b_k). The all-plus pattern is named V+.
    """
    space = zz_space(rs, S, T)
    K = rs.killing_matrix
    basis = orthogonal_basis(z_basis(rs, S), K)
    g = gamma_extension(rs, d)
    found = []
    for signs in product((1, -1), repeat=basis.shape[0]):
        flipped = linalg.matrix(
            [[sign * x for x in row] for sign, row in zip(signs, linalg.entries(basis))], rs.rank, basis.domain
        )
        rows = linalg.hstack(basis, linalg.image(g, flipped))
        label = "".join("+" if sign > 0 else "-" for sign in signs)
        found.append(subspace(space, rows, f"signs:{label}"))
    return found


def twisted_graphs(rs: RootSystem, S: Sequence[int], T: Sequence[int], d) -> Tuple[LagrangianSubspace, ...]:
    """
    V+ = {(z, g z)} and V- = {(z, g rho z)} for z in z_S, where g extends gamma_d and rho
    reflects z_S in its first basis vector. They have opposite parity.
    """
    space = zz_space(rs, S, T)
    z_S = z_basis(rs, S)
    if z_S.shape[0] == 0:
        return (LagrangianSubspace(space, linalg.zeros(0, 0), "zero"),)
    g = gamma_extension(rs, d)
    rho = reflection(z_S[0:1, :], rs.killing_matrix)
    plus = graph(space, z_S, g, "V+")
    minus = graph(space, z_S, linalg.multiply(g, rho), "V-")
    return plus, minus


def random_graphs(
    rs: RootSystem, S: Sequence[int], T: Sequence[int], d, seed: int = DEFAULTS.seed, samples: int = 3
) -> List[LagrangianSubspace]:
    """Graphs of g composed with seeded random reflections of z_S."""
    z_S = z_basis(rs, S)
    if z_S.shape[0] == 0:
        return []
    space = zz_space(rs, S, T)
    g = gamma_extension(rs, d)
    rng = random.Random(seed)
    found = []
    for k in range(samples):
        twist = linalg.eye(rs.rank)
        for _ in range(rng.randint(1, 2)):
            coefficients = [0] * z_S.shape[0]
            while not any(coefficients):
                coefficients = [rng.randint(-3, 3) for _ in range(z_S.shape[0])]
            x = linalg.multiply(linalg.matrix([coefficients]), z_S)
            twist = linalg.multiply(reflection(x, rs.killing_matrix), twist)
        found.append(graph(space, z_S, linalg.multiply(g, twist), f"random:{k}"))
    return found


def canonical_lagrangians(
    rs: RootSystem, S: Sequence[int], T: Sequence[int], d, seed: int = DEFAULTS.seed, samples: int = 3
) -> List[LagrangianSubspace]:
    """V+, V-, the sign patterns and the random reflection graphs, without repeats, all Lagrangian."""
    candidates = list(twisted_graphs(rs, S, T, d))
    if candidates[0].dim:
        candidates += sign_patterns(rs, S, T, d) + random_graphs(rs, S, T, d, seed, samples)
    distinct: List[LagrangianSubspace] = []
    for V in candidates:
        require_lagrangian(V)
        if not any(linalg.same_space(V.basis, W.basis) for W in distinct):
            distinct.append(V)
    log.debug(f"{len(distinct)} canonical Lagrangians in {distinct[0].ambient.tag}")
    return distinct


def named_lagrangian(rs: RootSystem, S: Sequence[int], T: Sequence[int], d, name: str) -> LagrangianSubspace:
    """diag (V+), antidiag (V-) or zero (only when z_S = 0)."""
    graphs = twisted_graphs(rs, S, T, d)
    if name == "zero":
        if graphs[0].dim:
            raise NotLagrangianError("the zero subspace is Lagrangian only when z_S = 0")
        return graphs[0]
    if len(graphs) == 1:
        raise NotLagrangianError(f"z_S = 0, so the only choice is zero, not {name}")
    if name == "diag":
        return graphs[0]
    if name == "antidiag":
        return graphs[1]
    raise ValueError(f"unknown Lagrangian {name!r}; expected diag, antidiag or zero")


def cartan_graph(rs: RootSystem, d) -> DomainMatrix:
    """Rows (x, gamma_d x) for x in h_S, in h + h coordinates."""
    S = [i for i, _ in d]
    h_S = h_basis(rs, S)
    return linalg.hstack(h_S, linalg.image(gamma_matrix(rs, d), h_S))
