"""
Strata L^eps(S, T, d) of the variety of Lagrangian subalgebras of g + g: orbit and stratum
dimensions, orbit closures, irreducible components and orbit representatives.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from math import lcm
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Rational
from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.bd import Triple, _s_of, enumerate_triples, isometries
from lagrangian_variety.chevalley import (
    build_lagrangian,
    build_lie_algebra,
    fixed_space,
    intersect_with_diagonal,
    v_prime,
)
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import CapExceededError, OracleMismatchError, UnsupportedTorusError
from lagrangian_variety.lagrlin import (
    LagrangianSubspace,
    isotropic_lines,
    require_lagrangian,
    subspace,
    twisted_graphs,
    zz_space,
)
from lagrangian_variety.rootdata import (
    RootSystem,
    TorusElement,
    format_isometry,
    format_subset,
    gamma_matrix,
    h_basis,
    oracle_size,
    projection,
    z_basis,
)
from lagrangian_variety.weyl import WeylElement, min_coset_reps, weyl_group

log = logging.getLogger(__name__)

__all__ = [
    "OrbitLabel",
    "TorusElement",
    "orbit_dim",
    "stratum_dim",
    "orbit_closure",
    "wonderful_orbits",
    "eps_of",
    "eps_cartan",
    "realized_parities",
    "irreducible_components",
    "census",
    "component_maximality",
    "bb_orbit_reps",
    "gdelta_orbit_reps",
    "same_gdelta_orbit",
    "torus_sample",
    "lagr_gh_census",
]

KINDS = ("GG", "BB", "GDelta", "Stratum", "Component")

# component counts usually quoted for small types
QUOTED_COMPONENTS = {"A1": 2, "A2": 4}


@dataclass(frozen=True, eq=False)
class OrbitLabel:
    """A (G x G)-, (B x B^-)- or G_Delta-orbit, a stratum or an irreducible component."""

    kind: str
    triple: Triple
    V: Optional[LagrangianSubspace] = None
    eps: Optional[int] = None
    w: Optional[WeylElement] = None
    """First Weyl coordinate of a BB label"""
    v: Optional[WeylElement] = None
    """Element of W^T for BB and GDelta labels"""
    m: Optional[TorusElement] = None
    dim: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown orbit kind {self.kind!r}")

    def key(self) -> Tuple:
        """Everything but V; labels of the same kind and key share a stratum."""
        return (self.kind, self.eps, self.triple.sort_key(), str(self.w), str(self.v), str(self.m))

    def __str__(self) -> str:
        parts = [self.kind, str(self.triple)]
        if self.V is not None:
            parts.append(str(self.V))
        if self.eps is not None:
            parts.append(f"eps={self.eps}")
        if self.w is not None:
            parts.append(f"w={self.w}")
        if self.v is not None:
            parts.append(f"v={self.v}")
        if self.m is not None and not self.m.is_identity:
            parts.append(f"m={self.m}")
        return " ".join(parts)


def _z(rs: RootSystem, triple: Triple) -> int:
    return rs.rank - len(triple.S)


def orbit_dim(rs: RootSystem, triple: Triple) -> int:
    """Dimension n - z of the (G x G)-orbit of l_{S,T,d,V}."""
    return rs.dimension - _z(rs, triple)


def stratum_dim(rs: RootSystem, triple: Triple) -> int:
    """n + z(z - 3)/2, checked against dim(G/P_S x G/P_T^-) + dim G_S + z(z - 1)/2."""
    z = _z(rs, triple)
    value = rs.dimension + z * (z - 3) // 2
    N = len(rs.positive_roots)
    N_S = len(rs.subsystem(triple.S))
    N_T = len(rs.subsystem(triple.T))
    bundle = (N - N_S) + (N - N_T) + (len(triple.S) + 2 * N_S) + z * (z - 1) // 2
    assert value == bundle, f"stratum dimension {value} against bundle count {bundle} for {triple}"
    return value


def orbit_closure(rs: RootSystem, label: OrbitLabel) -> List[OrbitLabel]:
    """
    The (G x G)-orbits in the closure of a GG orbit, one per S1 in S, largest first:
    (S1, d(S1), d|S1) with V1 = V + {(x, gamma_d x) : x in h_S meet z_S1}.
    """
    if label.kind != "GG" or label.V is None:
        raise ValueError("orbit_closure needs a GG label with V")
    triple = label.triple
    gamma = gamma_matrix(rs, triple.d)
    h_S = h_basis(rs, triple.S)
    found = []
    for size in range(len(triple.S), -1, -1):
        for S1 in combinations(triple.S, size):
            boundary = triple.restrict(S1)
            extra = linalg.intersect(h_S, z_basis(rs, S1)) if h_S.shape[0] else h_S
            rows = linalg.stack(label.V.parent_rows, linalg.hstack(extra, linalg.image(gamma, extra)))
            space = zz_space(rs, boundary.S, boundary.T)
            V1 = subspace(space, linalg.row_basis(rows), f"V1({label.V})" if size < len(triple.S) else str(label.V))
            require_lagrangian(V1)
            found.append(OrbitLabel("GG", boundary, V1, label.eps, dim=orbit_dim(rs, boundary)))
    return found


def wonderful_orbits(rs: RootSystem, d) -> List[OrbitLabel]:
    """(G x G)-orbits of the wonderful compactification Z_d(G), one per subset of the simple roots."""
    simple = rs.simple_roots
    triple = Triple(simple, tuple(sorted(j for _, j in d)), tuple(sorted(d)))
    (zero,) = twisted_graphs(rs, triple.S, triple.T, triple.d)
    return orbit_closure(rs, OrbitLabel("GG", triple, zero, eps_cartan(rs, triple, zero)))


# Parity


def eps_cartan(rs: RootSystem, triple: Triple, V: LagrangianSubspace) -> int:
    """
    Parity of n - dim(l meet g_Delta) for v = e, m = e from Cartan data alone.

    l meet g_Delta = V' + g^phi; the root part of g^phi pairs up between n and n^-, so only
    the fixed space of gamma_d chi_S on h_S(1,d) matters.
    """
    identity = weyl_group(rs).identity
    S_1 = _s_of(rs, triple, identity)
    V1 = v_prime(rs, triple, V, identity)
    phi_h = linalg.multiply(gamma_matrix(rs, triple.d), projection(rs, triple.S))
    fixed = fixed_space(phi_h, h_basis(rs, S_1))
    return (rs.rank - linalg.dim(V1) - linalg.dim(fixed)) % 2


def eps_of(
    rs: RootSystem,
    triple: Triple,
    V: LagrangianSubspace,
    v: Optional[WeylElement] = None,
    m: Optional[TorusElement] = None,
    cap: int = DEFAULTS.oracle_cap,
) -> int:
    """
    eps = (n - dim(l meet g_Delta)) mod 2 with the intersection from the Chevalley oracle.

    For v = e and m = e the result is checked against eps_cartan. Without the oracle only
    v = e, m = e can be answered.
    """
    trivial = (v is None or v.is_identity) and (m is None or m.is_identity)
    if oracle_size(rs) > cap:
        if not trivial:
            raise CapExceededError("oracle size", oracle_size(rs), cap)
        return eps_cartan(rs, triple, V)
    model = build_lie_algebra(rs, cap)
    L = build_lagrangian(model, triple, V, v, m)
    eps = (model.n - intersect_with_diagonal(L).dim) % 2
    if trivial:
        expected = eps_cartan(rs, triple, V)
        if eps != expected:
            raise OracleMismatchError(f"parity of l_{triple} with {V}", expected, eps)
    return eps


def realized_parities(rs: RootSystem, triple: Triple, use_oracle: bool = False) -> Dict[int, LagrangianSubspace]:
    """
    A witness V for every parity L^eps(S, T, d) actually reaches, from the twisted graphs V+ and V-.

    For z = 1 the two graphs are the two isotropic lines of z_S + z_T.
    """
    witnesses = twisted_graphs(rs, triple.S, triple.T, triple.d)
    if len(witnesses) == 2 and witnesses[0].dim == 1:
        lines = isotropic_lines(witnesses[0].ambient)
        for W in witnesses:
            assert any(linalg.same_space(W.basis, line.basis) for line in lines), f"{W} is not an isotropic line"
    found: Dict[int, LagrangianSubspace] = {}
    for W in witnesses:
        eps = eps_of(rs, triple, W) if use_oracle else eps_cartan(rs, triple, W)
        found.setdefault(eps, W)
    return found


# Census


def _exceptions(rs: RootSystem) -> set:
    """(S, T, d, eps) with |Gamma - S| = 1, T = d1(S), d = d1|S, eps = (r - dim h^gamma_d1) mod 2."""
    simple = rs.simple_roots
    excluded = set()
    for d1 in isometries(rs, simple, simple):
        full = Triple(simple, simple, d1)
        gamma = gamma_matrix(rs, d1)
        fixed = linalg.dim(linalg.kernel(linalg.subtract(gamma, linalg.eye(rs.rank))))
        eps = (rs.rank - fixed) % 2
        for S in combinations(simple, rs.rank - 1):
            excluded.add((full.restrict(S), eps))
    return excluded


@dataclass(frozen=True)
class StratumRow:
    triple: Triple
    eps: int
    orbit_dim: int
    stratum_dim: int
    is_component: bool
    boundary: Tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "S": format_subset(self.triple.S),
            "T": format_subset(self.triple.T),
            "d": format_isometry(self.triple.d),
            "eps": self.eps,
            "orbitDim": self.orbit_dim,
            "stratumDim": self.stratum_dim,
            "isComponent": self.is_component,
            "boundary": list(self.boundary),
        }


@dataclass(frozen=True)
class Census:
    type_spec: str
    rows: Tuple[StratumRow, ...]
    notes: Tuple[str, ...]

    @property
    def components(self) -> Tuple[StratumRow, ...]:
        return tuple(row for row in self.rows if row.is_component)

    def as_dict(self, strata: bool = False) -> dict:
        rows = self.rows if strata else self.components
        return {"type": self.type_spec, "triples": [row.as_dict() for row in rows], "notes": list(self.notes)}


def _boundary(triple: Triple) -> Tuple[str, ...]:
    return tuple(
        str(triple.restrict(S1)) for size in range(len(triple.S) - 1, -1, -1) for S1 in combinations(triple.S, size)
    )


def census(rs: RootSystem, threads: int = DEFAULTS.threads, use_oracle: bool = False) -> Census:
    """Every nonempty stratum with its dimensions, marked as component or not."""
    triples = enumerate_triples(rs)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parities = list(pool.map(lambda triple: realized_parities(rs, triple, use_oracle), triples))

    excluded = _exceptions(rs)
    rows = []
    notes = []
    for triple, found in zip(triples, parities):
        if _z(rs, triple) and len(found) < 2:
            notes.append(f"{triple}: only parity {sorted(found)} realized; the other stratum is treated as empty")
        for eps in sorted(found):
            rows.append(
                StratumRow(
                    triple,
                    eps,
                    orbit_dim(rs, triple),
                    stratum_dim(rs, triple),
                    (triple, eps) not in excluded,
                    _boundary(triple),
                )
            )
    rows.sort(key=lambda row: (-row.stratum_dim, row.triple.sort_key(), row.eps))
    count = sum(1 for row in rows if row.is_component)
    quoted = QUOTED_COMPONENTS.get(rs.type_spec.replace(" ", ""))
    if quoted is not None and quoted != count:
        notes.append(
            f"{rs.type_spec}: the |Gamma - S| = 1 exclusion rule leaves {count} components, against the {quoted} "
            "usually quoted; the extra singleton strata lie in no listed closure and are reported as computed"
        )
    log.info(f"census {rs.type_spec}: {len(rows)} strata, {count} components")
    return Census(rs.type_spec, tuple(rows), tuple(notes))


def irreducible_components(rs: RootSystem, threads: int = DEFAULTS.threads) -> List[OrbitLabel]:
    """Component labels with their stratum dimensions."""
    return [
        OrbitLabel("Component", row.triple, eps=row.eps, dim=row.stratum_dim) for row in census(rs, threads).components
    ]


def component_maximality(rs: RootSystem, result: Census) -> Dict[str, str]:
    """
    For every stratum that is not a component, a component whose closure contains it.

    Raises OracleMismatchError when one is missing.
    """
    containers: Dict[str, str] = {}
    for row in result.rows:
        if row.is_component:
            continue
        name = f"{row.triple} eps={row.eps}"
        for component in result.components:
            if component.eps == row.eps and str(row.triple) in component.boundary:
                containers[name] = f"{component.triple} eps={component.eps}"
                break
        else:
            raise OracleMismatchError(f"stratum {name} lies in no component closure")
    return containers


# Orbit representatives


def bb_orbit_reps(rs: RootSystem, triple: Triple, cap: int = DEFAULTS.weyl_cap) -> List[Tuple[WeylElement, WeylElement]]:
    """W x W^T, one pair per (B x B^-)-orbit in a (G x G)-orbit of type (S, T, d)."""
    group = weyl_group(rs, cap)
    return [(w, v) for w in group for v in min_coset_reps(rs, triple.T, cap)]


def torus_sample(rank: int, seed: int = DEFAULTS.seed, samples: int = DEFAULTS.torus_samples) -> List[TorusElement]:
    """Seeded torus elements with small nonzero rational values."""
    rng = random.Random(seed)
    found = []
    while len(found) < samples:
        values = tuple(Rational(rng.choice((-1, 1)) * rng.randint(1, 5), rng.randint(1, 3)) for _ in range(rank))
        m = TorusElement(values)
        if not m.is_identity:
            found.append(m)
    return found


def _reachable_directions(rs: RootSystem, triple: Triple, v: WeylElement) -> DomainMatrix:
    """{x1 - v x2 : gamma_d chi_S x1 = chi_T x2}, the twisted action of the torus of R on m, in h."""
    r = rs.rank
    condition = linalg.hstack(
        linalg.multiply(gamma_matrix(rs, triple.d), projection(rs, triple.S)), -projection(rs, triple.T)
    )
    pairs = linalg.kernel(condition)
    if pairs.shape[0] == 0:
        return linalg.zeros(0, r)
    move = linalg.stack(linalg.eye(r), -v.h_matrix.transpose())
    return linalg.row_basis(linalg.multiply(pairs, move))


def _integral_rows(rows: DomainMatrix) -> List[List[int]]:
    result = []
    for row in linalg.to_sympy(rows):
        denominator = lcm(*(Rational(value).q for value in row))
        result.append([int(value * denominator) for value in row])
    return result


def same_gdelta_orbit(rs: RootSystem, label1: OrbitLabel, label2: OrbitLabel) -> bool:
    """
    Whether [m1, v] and [m2, v] give the same G_Delta-orbit, decided on the torus: m2 / m1 must be
    killed by every character vanishing on the reachable directions.
    """
    for label in (label1, label2):
        if label.m is not None and not isinstance(label.m, TorusElement):
            raise UnsupportedTorusError(f"{label.m!r} is not a torus element")
    if label1.triple != label2.triple or str(label1.v) != str(label2.v):
        return False
    if label1.V is not None and label2.V is not None and not linalg.same_space(label1.V.parent_rows, label2.V.parent_rows):
        return False
    r = rs.rank
    m1 = label1.m or TorusElement.identity(r)
    m2 = label2.m or TorusElement.identity(r)
    v = label1.v or weyl_group(rs).identity
    reachable = _reachable_directions(rs, label1.triple, v)
    # characters sum c_i a_i vanish on x exactly when c K x = 0
    characters = linalg.kernel(linalg.multiply(reachable, rs.killing_matrix))
    ratio = tuple(b / a for a, b in zip(m1.values, m2.values))
    quotient = TorusElement(ratio)
    domain = quotient.domain
    for c in _integral_rows(characters):
        if quotient.character(c, domain) != domain.one:
            return False
    return True


def gdelta_orbit_reps(
    rs: RootSystem,
    triple: Triple,
    V: LagrangianSubspace,
    sample: Optional[Sequence[TorusElement]] = None,
    cap: int = DEFAULTS.weyl_cap,
) -> List[OrbitLabel]:
    """[m, v] labels for v in W^T and m in {e} + sample, one per G_Delta-orbit the torus test separates."""
    r = rs.rank
    sample = torus_sample(r) if sample is None else list(sample)
    for m in sample:
        if not isinstance(m, TorusElement):
            raise UnsupportedTorusError(f"{m!r} is not a torus element")
    labels: List[OrbitLabel] = []
    for v in min_coset_reps(rs, triple.T, cap):
        seen: List[OrbitLabel] = []
        for m in [TorusElement.identity(r)] + sample:
            label = OrbitLabel("GDelta", triple, V, v=v, m=m)
            if not any(same_gdelta_orbit(rs, label, other) for other in seen):
                seen.append(label)
        labels.extend(seen)
    log.debug(f"{len(labels)} G_Delta labels for {triple}")
    return labels


def lagr_gh_census(rs: RootSystem) -> Tuple[int, int]:
    """Dimension dim G/B + r(r - 1)/2 and component count of the Lagrangian subalgebras of g + h."""
    r = rs.rank
    return len(rs.positive_roots) + r * (r - 1) // 2, 2 if r else 1
