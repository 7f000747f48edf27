"""
Ranks of the standard Poisson structure Pi_0 on intersections of G_Delta- and (B x B^-)-orbits.

The rank on O meet O' is dim(O meet O') - dim(h_-Delta meet (w, v1) X_{S,T,d,v}). The flag case
reduces to shifted double Bruhat cells, whose nonemptiness is certified by sampling over GF(p).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.bd import Triple, s_of
from lagrangian_variety.chevalley import (
    DoubleSubspace,
    build_lagrangian,
    build_lie_algebra,
    cartan_graph,
    normalizer,
    normalizer_in_diagonal,
    z_prime,
)
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import OracleMismatchError, OrbitMismatchError
from lagrangian_variety.lagrlin import LagrangianSubspace, h_delta, hh_space
from lagrangian_variety.rootdata import RootSystem, TorusElement
from lagrangian_variety.strata import OrbitLabel
from lagrangian_variety.weyl import WeylElement, h_minus_w_dim, require_min_coset_rep, weyl_group

log = logging.getLogger(__name__)

CERTIFIED = "certified-nonempty"
UNKNOWN = "unknown"


@dataclass(frozen=True, eq=False)
class XSpace:
    """X_{S,T,d,v} in h + h, rows in H_a coordinates."""

    triple: Triple
    v: WeylElement
    basis: DomainMatrix

    @property
    def dim(self) -> int:
        return linalg.dim(self.basis)


def x_space(rs: RootSystem, triple: Triple, v: WeylElement, cap: int = DEFAULTS.weyl_cap) -> XSpace:
    """{(z, v^-1 z) : z in z_S(v,d), gamma_d chi_S z = chi_T v^-1 z} + {(x, gamma_d x) : x in h_S}"""
    require_min_coset_rep(rs, v, triple.T, cap)
    S_v = s_of(rs, triple, v, cap)
    zp = z_prime(rs, triple, v, S_v)
    v_inverse = weyl_group(rs, cap).inverse(v)
    graph = linalg.hstack(zp, linalg.image(v_inverse.h_matrix, zp))
    basis = linalg.span(graph, cartan_graph(rs, triple.d))
    space = hh_space(rs)
    assert linalg.dim(basis) == rs.rank, f"dim X = {linalg.dim(basis)} for {triple}, v={v}"
    assert linalg.is_isotropic(basis, space.gram), f"X is not isotropic for {triple}, v={v}"
    return XSpace(triple, v, basis)


def rank_correction(rs: RootSystem, w: WeylElement, v1: WeylElement, X: XSpace) -> int:
    """dim(h_-Delta meet (w, v1) X)"""
    moved = linalg.image(linalg.block_diag(w.h_matrix, v1.h_matrix), X.basis)
    r = rs.rank
    antidiagonal = linalg.hstack(linalg.eye(r), -linalg.eye(r))
    return linalg.dim(linalg.intersect(antidiagonal, moved))


def conjugacy_correction(rs: RootSystem, w: WeylElement) -> int:
    """rank_correction(w, e, h_Delta), which is dim h^{-w}."""
    identity = weyl_group(rs).identity
    X = XSpace(Triple((), (), ()), identity, linalg.hstack(linalg.eye(rs.rank), linalg.eye(rs.rank)))
    value = rank_correction(rs, w, identity, X)
    assert value == h_minus_w_dim(w)
    return value


@dataclass(frozen=True)
class ConjugacyRank:
    w: WeylElement
    rank: int
    empty: bool
    """The formula went negative, so the cell is empty for this class"""
    open_leaf: bool
    """w = e: C meet B^- B is an open dense leaf"""


def conjugacy_rank(dim_c: int, w: WeylElement) -> ConjugacyRank:
    """dim C - l(w) - dim h^{-w} on the Bruhat cell of w in a conjugacy class of dimension dim_c."""
    if dim_c < 0:
        raise ValueError(f"conjugacy class dimension must be nonnegative, got {dim_c}")
    rank = dim_c - w.length - h_minus_w_dim(w)
    return ConjugacyRank(w, rank, rank < 0, w.is_identity)


@dataclass(frozen=True)
class Pi0Rank:
    dim: int
    """dim(O meet O')"""
    rank: int
    correction: int
    nonempty: str = UNKNOWN

    @property
    def conditional(self) -> bool:
        return self.nonempty != CERTIFIED


def double_bruhat_rank(rs: RootSystem, u: WeylElement, v: WeylElement, w: WeylElement) -> Tuple[int, int]:
    """(rank, dim) on the shifted double Bruhat cell: dim = l(u) + l(v) - l(w), rank = dim - dim h^{-u^-1 v w^-1}"""
    group = weyl_group(rs)
    dim = u.length + v.length - w.length
    x = group.product(group.inverse(u), v, group.inverse(w))
    return dim - h_minus_w_dim(x), dim


def flag_labels(rs: RootSystem, u: WeylElement, v: WeylElement, w: WeylElement) -> Tuple[OrbitLabel, OrbitLabel]:
    """G_Delta label (v = w) and (B x B^-) label (u, v) in the closed orbit h_Delta + (n + n^-)."""
    triple = Triple((), (), ())
    V = h_delta(rs)
    return OrbitLabel("GDelta", triple, V, v=w), OrbitLabel("BB", triple, V, w=u, v=v)


def _same_gg_orbit(first: OrbitLabel, second: OrbitLabel) -> bool:
    if first.triple != second.triple:
        return False
    if first.V is None or second.V is None:
        return first.V is second.V
    return linalg.same_space(first.V.parent_rows, second.V.parent_rows)


class Pi0Calculator:
    """
    pi0_rank with the orbit dimensions cached per label, for sweeps that reuse orbits.

    dim O = n - dim n(l) from the diagonal normalizer; dim O' = dim(b + b^-) minus the dimension of
    the normalizer inside b + b^-.
    """

    def __init__(self, rs: RootSystem, cap: int = DEFAULTS.oracle_cap, inverse_lifts: bool = False):
        self.rs = rs
        self.model = build_lie_algebra(rs, cap, inverse_lifts)
        self._gdelta: Dict[Tuple, int] = {}
        self._bb: Dict[Tuple, int] = {}
        model = self.model
        self._borels = linalg.stack(
            linalg.hstack(model.borel_rows(), linalg.zeros(model.r + model.N, model.n)),
            linalg.hstack(linalg.zeros(model.r + model.N, model.n), model.opposite_borel_rows()),
        )

    def _cache_key(self, label: OrbitLabel) -> Tuple:
        V = tuple(map(tuple, linalg.to_sympy(linalg.row_basis(label.V.parent_rows)))) if label.V is not None else ()
        return label.key() + (V,)

    def gdelta_dim(self, label: OrbitLabel) -> int:
        key = self._cache_key(label)
        if key not in self._gdelta:
            L = build_lagrangian(self.model, label.triple, label.V, label.v, label.m)
            self._gdelta[key] = self.model.n - normalizer_in_diagonal(L).dim
        return self._gdelta[key]

    def bb_dim(self, label: OrbitLabel) -> int:
        key = self._cache_key(label)
        if key not in self._bb:
            model = self.model
            L = build_lagrangian(model, label.triple, label.V)
            group = weyl_group(self.rs)
            w = label.w or group.identity
            v = label.v or group.identity
            moved = linalg.image(linalg.block_diag(model.weyl_lift(w), model.weyl_lift(v)), L.basis)
            L = DoubleSubspace(model, moved)
            self._bb[key] = 2 * (model.r + model.N) - normalizer(L, within=self._borels).dim
        return self._bb[key]

    def rank(self, O: OrbitLabel, O_prime: OrbitLabel, nonempty: str = UNKNOWN) -> Pi0Rank:
        if O.kind != "GDelta" or O_prime.kind != "BB":
            raise OrbitMismatchError(f"expected a GDelta and a BB label, got {O.kind} and {O_prime.kind}")
        if not _same_gg_orbit(O, O_prime):
            raise OrbitMismatchError(f"{O} and {O_prime} lie in different (G x G)-orbits")
        rs = self.rs
        group = weyl_group(rs)
        triple = O.triple
        z = rs.rank - len(triple.S)
        dim = self.gdelta_dim(O) + self.bb_dim(O_prime) - (rs.dimension - z)
        X = x_space(rs, triple, O.v or group.identity)
        correction = rank_correction(rs, O_prime.w or group.identity, O_prime.v or group.identity, X)
        rank = dim - correction
        if dim >= 0 and rank % 2:
            raise OracleMismatchError(f"odd Poisson rank {rank} on {O} meet {O_prime}")
        log.debug(f"{O} meet {O_prime}: dim {dim}, rank {rank}")
        return Pi0Rank(dim, rank, correction, nonempty)


def pi0_rank(
    rs: RootSystem, O: OrbitLabel, O_prime: OrbitLabel, nonempty: str = UNKNOWN, cap: int = DEFAULTS.oracle_cap
) -> Pi0Rank:
    """Rank of Pi_0 on O meet O' for a G_Delta label O and a (B x B^-) label O' of the same (G x G)-orbit."""
    return Pi0Calculator(rs, cap).rank(O, O_prime, nonempty)


# Shifted double Bruhat cells over GF(p)


def permutation(rs: RootSystem, w: WeylElement) -> Tuple[int, ...]:
    """w as a permutation of 0..n for type A_n, with s_i swapping i and i + 1."""
    n = rs.rank + 1
    images = list(range(n))
    for i in reversed(w.word):
        images = [i + 1 if x == i else i if x == i + 1 else x for x in images]
    return tuple(images)


def _permutation_matrix(F, perm: Tuple[int, ...]) -> List[List]:
    n = len(perm)
    return [[F.one if perm[j] == i else F.zero for j in range(n)] for i in range(n)]


def _multiply(A: List[List], B: List[List], F) -> List[List]:
    return DomainMatrix(A, (len(A), len(A)), F).matmul(DomainMatrix(B, (len(B), len(B)), F)).to_list()


def _random_borel(F, n: int, rng: random.Random, prime: int) -> List[List]:
    """Upper triangular with determinant 1."""
    rows = [[F.zero] * n for _ in range(n)]
    product = F.one
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = F(rng.randrange(prime))
        if i < n - 1:
            rows[i][i] = F(rng.randrange(1, prime))
            product *= rows[i][i]
    rows[n - 1][n - 1] = F.one / product
    return rows


def opposite_bruhat_permutation(rows: List[List], F) -> Tuple[int, ...]:
    """
    The permutation x with M in B^- x B^-.

    Top row first: the rightmost nonzero entry of each row is its pivot; it clears its column below
    (row operations by B^-) and its row to the left (column operations by B^-).
    """
    M = [list(row) for row in rows]
    n = len(M)
    perm = [None] * n
    for i in range(n):
        j = max(k for k in range(n) if M[i][k] != F.zero)
        perm[j] = i
        pivot = M[i][j]
        for k in range(i + 1, n):
            if M[k][j] != F.zero:
                factor = M[k][j] / pivot
                M[k] = [a - factor * b for a, b in zip(M[k], M[i])]
        for k in range(j):
            M[i][k] = F.zero
    return tuple(perm)


def nonempty_check(
    rs: RootSystem,
    u: WeylElement,
    v: WeylElement,
    w: WeylElement,
    samples: int = DEFAULTS.bruhat_samples,
    seed: int = DEFAULTS.seed,
    prime: int = DEFAULTS.prime,
) -> str:
    """
    One-sided certificate that B u B meet B^- v B^- w^-1 is nonempty in SL(n + 1, GF(p)).

    The permutation matrix of u is tried first, then g = b1 u b2 is sampled in B u B; each g is
    tested for g w in B^- v B^-. Only type A_n is handled; anything else, or no witness after all
    samples, gives UNKNOWN.
    """
    if len(rs.factors) != 1 or rs.factors[0][0] != "A":
        return UNKNOWN
    F = GF(prime)
    n = rs.rank + 1
    rng = random.Random(seed)
    P_u = _permutation_matrix(F, permutation(rs, u))
    P_w = _permutation_matrix(F, permutation(rs, w))
    target = permutation(rs, v)
    if opposite_bruhat_permutation(_multiply(P_u, P_w, F), F) == target:
        return CERTIFIED
    for _ in range(samples):
        g = _multiply(_multiply(_random_borel(F, n, rng, prime), P_u, F), _random_borel(F, n, rng, prime), F)
        if opposite_bruhat_permutation(_multiply(g, P_w, F), F) == target:
            return CERTIFIED
    return UNKNOWN


@dataclass(frozen=True)
class FlagRow:
    u: WeylElement
    v: WeylElement
    w: WeylElement
    dim: int
    rank: int
    correction: int
    nonempty: str
    general_rank: Optional[int] = None

    def as_dict(self) -> dict:
        row = {
            "u": str(self.u),
            "v": str(self.v),
            "w": str(self.w),
            "dim": self.dim,
            "rank": self.rank,
            "correction": self.correction,
            "nonempty": self.nonempty,
        }
        if self.general_rank is not None:
            row["generalRank"] = self.general_rank
        return row


def flag_table(
    rs: RootSystem,
    elements: Optional[List[Tuple[WeylElement, WeylElement, WeylElement]]] = None,
    samples: int = DEFAULTS.bruhat_samples,
    seed: int = DEFAULTS.seed,
    prime: int = DEFAULTS.prime,
    general: bool = False,
    cap: int = DEFAULTS.oracle_cap,
) -> List[FlagRow]:
    """
    Closed-form ranks on shifted double Bruhat cells, over all of W^3 by default.

    With general, certified cells are also run through the G_Delta / (B x B^-) machinery and
    the two ranks must agree.
    """
    group = weyl_group(rs)
    if elements is None:
        elements = [(u, v, w) for u in group for v in group for w in group]
    calculator = Pi0Calculator(rs, cap) if general else None
    rows = []
    for u, v, w in elements:
        rank, dim = double_bruhat_rank(rs, u, v, w)
        correction = dim - rank
        status = nonempty_check(rs, u, v, w, samples, seed, prime)
        general_rank = None
        if calculator is not None and status == CERTIFIED:
            O, O_prime = flag_labels(rs, u, v, w)
            result = calculator.rank(O, O_prime, status)
            if (result.rank, result.dim) != (rank, dim):
                raise OracleMismatchError(f"flag rank at u={u}, v={v}, w={w}", (rank, dim), (result.rank, result.dim))
            general_rank = result.rank
        if status == CERTIFIED and (rank % 2 or rank > dim):
            raise OracleMismatchError(f"rank {rank} on a cell of dimension {dim} at u={u}, v={v}, w={w}")
        rows.append(FlagRow(u, v, w, dim, rank, correction, status, general_rank))
    return rows


def regular_rank(
    rs: RootSystem,
    triple: Triple,
    V: LagrangianSubspace,
    v: WeylElement,
    w: WeylElement,
    v1: WeylElement,
    sample: List[TorusElement],
    cap: int = DEFAULTS.oracle_cap,
) -> int:
    """The rank for [m, v] against (w, v1), required to be the same for every m in sample."""
    calculator = Pi0Calculator(rs, cap)
    O_prime = OrbitLabel("BB", triple, V, w=w, v=v1)
    ranks = {calculator.rank(OrbitLabel("GDelta", triple, V, v=v, m=m), O_prime).rank for m in sample}
    if len(ranks) != 1:
        raise OracleMismatchError(f"rank varies with m on {triple}: {sorted(ranks)}")
    return ranks.pop()
