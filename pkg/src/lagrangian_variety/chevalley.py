"""
Brute-force oracle: g from Chevalley structure constants, Lagrangian subalgebras of g + g as
explicit subspaces, and the normalizer and intersection formulas checked against direct solves.

Basis order of g: h_1..h_r (coroots), then e_b for positive roots b in height order, then e_-b.
Vectors of g + g have the first copy in the first n coordinates. Maps act on column vectors;
subspaces are stored as rows.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.bd import Triple, _s_of, sigma_strata
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import (
    CapExceededError,
    InapplicableError,
    NotLagrangianError,
    OracleMismatchError,
)
from lagrangian_variety.lagrlin import LagrangianSubspace, cartan_graph, is_lagrangian
from lagrangian_variety.rootdata import (
    Root,
    RootSystem,
    TorusElement,
    gamma_matrix,
    is_positive,
    negate,
    oracle_size,
    projection,
    z_basis,
)
from lagrangian_variety.weyl import WeylElement, weyl_group

log = logging.getLogger(__name__)


def _add(x: Root, y: Root) -> Root:
    return tuple(a + b for a, b in zip(x, y))


def structure_constants(rs: RootSystem) -> Dict[Tuple[Root, Root], int]:
    """
    N_{x,y} for all roots x, y with x + y a root.

    Extraspecial pairs get N = p + 1; every other constant follows from them, from
    N_{-x,-y} = -N_{x,y}, and from the cyclic relation for x + y + w = 0.
    """
    positive = rs.positive_roots
    length = {root: rs.inner(root, root) for root in rs.roots}
    P: Dict[Tuple[Root, Root], Fraction] = {}

    def N(x: Root, y: Root) -> Fraction:
        if is_positive(x) and is_positive(y):
            return P[(x, y)]
        if not is_positive(x) and not is_positive(y):
            return -P[(negate(x), negate(y))]
        z = _add(x, y)
        w = negate(z)
        if is_positive(x):
            if is_positive(z):
                return -length[w] / length[x] * P[(negate(y), negate(w))]
            return length[w] / length[y] * P[(w, x)]
        if is_positive(z):
            return -length[w] / length[y] * P[(negate(w), negate(x))]
        return length[w] / length[x] * P[(y, w)]

    for xi in positive:
        pairs = []
        for a in positive:
            b = tuple(c - e for c, e in zip(xi, a))
            if rs.is_root(b) and is_positive(b) and rs.root_index(a) < rs.root_index(b):
                pairs.append((a, b))
        if not pairs:
            continue
        gamma, delta = min(pairs, key=lambda pair: rs.root_index(pair[0]))
        p = 0
        probe = delta
        while True:
            probe = tuple(c - e for c, e in zip(probe, gamma))
            if not rs.is_root(probe):
                break
            p += 1
        extraspecial = Fraction(p + 1)
        P[(gamma, delta)] = extraspecial
        P[(delta, gamma)] = -extraspecial
        for a, b in pairs:
            if (a, b) == (gamma, delta):
                continue
            value = Fraction(0)
            b_gamma = tuple(c - e for c, e in zip(b, gamma))
            if rs.is_root(b_gamma):
                value += N(b, negate(gamma)) * N(a, negate(delta)) / length[b_gamma]
            a_gamma = tuple(c - e for c, e in zip(a, gamma))
            if rs.is_root(a_gamma):
                value += N(negate(gamma), a) * N(b, negate(delta)) / length[a_gamma]
            value *= length[xi] / extraspecial
            P[(a, b)] = value
            P[(b, a)] = -value

    constants = {}
    for x in rs.roots:
        for y in rs.roots:
            if rs.is_root(_add(x, y)):
                value = N(x, y)
                assert value.denominator == 1, f"non-integral N({x},{y}) = {value}"
                constants[(x, y)] = int(value)
    return constants


class LieAlgebraModel:
    """
    g in a Chevalley basis with its bracket table and Killing form.

    With inverse_lifts, Weyl elements are lifted through the inverses of the simple lifts instead.
    """

    def __init__(self, rs: RootSystem, inverse_lifts: bool = False):
        self.rs = rs
        self.inverse_lifts = inverse_lifts
        self.r = rs.rank
        self.N = len(rs.positive_roots)
        self.n = rs.dimension
        self.weights: List[Optional[Root]] = [None] * self.r + list(rs.positive_roots)
        self.weights += [negate(root) for root in rs.positive_roots]
        self.index: Dict[Root, int] = {root: k for k, root in enumerate(self.weights) if root is not None}
        self.constants = structure_constants(rs)
        self._table = self._bracket_table()
        self._tables = {QQ: self._table}
        self.killing = self._killing()
        log.info(f"built Chevalley model of {rs.type_spec}, dim {self.n}")

    # Basis

    def h(self, i: int) -> int:
        return i

    def e(self, root: Root) -> int:
        return self.index[tuple(root)]

    def coroot(self, root: Root) -> Dict[int, Fraction]:
        """h_b = sum c_i K_ii / K(b, b) h_i, so that [e_b, e_-b] = h_b."""
        norm = self.rs.inner(root, root)
        return {i: c * self.rs.killing[i][i] / norm for i, c in enumerate(root) if c}

    def _bracket_table(self) -> List[List[List[Tuple[int, object]]]]:
        rs, n, r = self.rs, self.n, self.r
        table = [[[] for _ in range(n)] for _ in range(n)]
        for a in range(n):
            for b in range(n):
                x, y = self.weights[a], self.weights[b]
                if x is None and y is None:
                    continue
                if x is None:
                    table[a][b] = [(b, rs.pairing(y, a))] if rs.pairing(y, a) else []
                elif y is None:
                    table[a][b] = [(a, -rs.pairing(x, b))] if rs.pairing(x, b) else []
                elif _add(x, y) == (0,) * r:
                    table[a][b] = sorted(self.coroot(x).items())
                elif (x, y) in self.constants:
                    table[a][b] = [(self.index[_add(x, y)], self.constants[(x, y)])]
        return [[[(c, linalg.element(value, QQ)) for c, value in cell] for cell in row] for row in table]

    def table(self, domain) -> List[List[List[Tuple[int, object]]]]:
        """Bracket table with coefficients converted into domain."""
        converted = self._tables.get(domain)
        if converted is None:
            converted = [[[(c, domain.convert_from(value, QQ)) for c, value in cell] for cell in row] for row in self._table]
            self._tables[domain] = converted
        return converted

    def bracket(self, x: Sequence, y: Sequence, domain=QQ) -> List:
        """[x, y] for coordinate lists over domain."""
        table = self.table(domain)
        result = [domain.zero] * self.n
        for a, xa in enumerate(x):
            if not xa:
                continue
            for b, yb in enumerate(y):
                if not yb:
                    continue
                for c, value in table[a][b]:
                    result[c] += xa * yb * value
        return result

    @cached_property
    def ad(self) -> List[DomainMatrix]:
        """ad of each basis vector as an n x n matrix."""
        matrices = []
        for a in range(self.n):
            rows = [[0] * self.n for _ in range(self.n)]
            for b in range(self.n):
                for c, value in self._table[a][b]:
                    rows[c][b] = value
            matrices.append(linalg.matrix(rows))
        return matrices

    def _killing(self) -> List[List[Fraction]]:
        """kappa(a, b) = tr(ad a ad b) on basis vectors."""
        n = self.n
        sparse = [[dict(self._table[a][k]) for k in range(n)] for a in range(n)]
        gram = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                total = QQ.zero
                for k in range(n):
                    for c, value in sparse[a][k].items():
                        other = sparse[b][c].get(k)
                        if other:
                            total += value * other
                gram[a][b] = gram[b][a] = Fraction(int(total.numerator), int(total.denominator))
        return gram

    @cached_property
    def gram(self) -> DomainMatrix:
        return linalg.matrix(self.killing)

    @cached_property
    def double_gram(self) -> DomainMatrix:
        """<(x1, x2), (y1, y2)> = kappa(x1, y1) - kappa(x2, y2)"""
        return linalg.block_diag(self.gram, -self.gram)

    @cached_property
    def h_scale(self) -> List[Fraction]:
        """H_a_i = (K_ii / 2) h_i"""
        return [self.rs.killing[i][i] / 2 for i in range(self.r)]

    def from_cartan(self, rows: DomainMatrix) -> DomainMatrix:
        """Rows in H_a coordinates of h to rows of g."""
        domain = rows.domain
        scale = [linalg.element(s, domain) for s in self.h_scale]
        padded = [[x * s for x, s in zip(row, scale)] + [domain.zero] * (2 * self.N) for row in linalg.entries(rows)]
        return linalg.matrix(padded, self.n, domain)

    def units(self, indices: Sequence[int]) -> DomainMatrix:
        return linalg.matrix([[1 if k == a else 0 for k in range(self.n)] for a in indices], self.n)

    # Standard subspaces

    def cartan_rows(self) -> DomainMatrix:
        return self.units(range(self.r))

    def levi_rows(self, S: Sequence[int]) -> DomainMatrix:
        """g_S: h_i for i in S and e_b, e_-b for b in [S]."""
        roots = self.rs.subsystem(S)
        return self.units(list(S) + [self.e(b) for b in roots] + [self.e(negate(b)) for b in roots])

    def nilradical_rows(self, S: Sequence[int]) -> DomainMatrix:
        """n_S: e_b for positive b outside [S]."""
        return self.units([self.e(b) for b in self.rs.positive_roots if not self.rs.in_span(b, S)])

    def opposite_nilradical_rows(self, T: Sequence[int]) -> DomainMatrix:
        """n_T^-: e_-b for positive b outside [T]."""
        return self.units([self.e(negate(b)) for b in self.rs.positive_roots if not self.rs.in_span(b, T)])

    def center_rows(self, S: Sequence[int]) -> DomainMatrix:
        """z_S as rows of g."""
        return self.from_cartan(z_basis(self.rs, S))

    def parabolic_rows(self, S: Sequence[int]) -> DomainMatrix:
        """p_S = h + n + e_-b for b in [S]."""
        return self.units(
            list(range(self.r + self.N)) + [self.e(negate(b)) for b in self.rs.positive_roots if self.rs.in_span(b, S)]
        )

    def opposite_parabolic_rows(self, T: Sequence[int]) -> DomainMatrix:
        """p_T^- = h + n^- + e_b for b in [T]."""
        return self.units(
            list(range(self.r))
            + [self.e(b) for b in self.rs.positive_roots if self.rs.in_span(b, T)]
            + list(range(self.r + self.N, self.n))
        )

    def borel_rows(self) -> DomainMatrix:
        return self.units(range(self.r + self.N))

    def opposite_borel_rows(self) -> DomainMatrix:
        return self.units(list(range(self.r)) + list(range(self.r + self.N, self.n)))

    def root_rows(self, roots: Sequence[Root]) -> DomainMatrix:
        return self.units([self.e(b) for b in roots])

    # Maps

    def levi_projection(self, S: Sequence[int]) -> DomainMatrix:
        """Projection of g onto g_S along n_S^- + z_S + n_S."""
        r = self.r
        rows = [[QQ.zero] * self.n for _ in range(self.n)]
        chi = linalg.entries(projection(self.rs, S))
        scale = self.h_scale
        for i in range(r):
            for j in range(r):
                # chi_S in h_i coordinates: D chi D^-1 with D = diag(K_ii / 2)
                rows[i][j] = chi[i][j] * linalg.element(scale[i] / scale[j], QQ)
        for b in self.rs.subsystem(S):
            for root in (b, negate(b)):
                k = self.e(root)
                rows[k][k] = QQ.one
        return linalg.matrix(rows)

    def exp_ad(self, a: int, sign: int = 1) -> DomainMatrix:
        """exp(sign * ad e) for a root vector e, summed until the powers vanish."""
        X = linalg.scale(self.ad[a], sign)
        total = linalg.eye(self.n)
        power = linalg.eye(self.n)
        k = 0
        while True:
            k += 1
            power = linalg.multiply(power, X)
            if linalg.is_zero(power):
                return total
            total = linalg.add(total, linalg.scale(power, Fraction(1, factorial(k))))

    @cached_property
    def _simple_lifts(self) -> List[DomainMatrix]:
        lifts = []
        for i in range(self.r):
            e, f = self.e(self.rs.simple(i)), self.e(negate(self.rs.simple(i)))
            sign = -1 if self.inverse_lifts else 1
            lifts.append(linalg.multiply(self.exp_ad(e, sign), self.exp_ad(f, -sign), self.exp_ad(e, sign)))
        return lifts

    def weyl_lift(self, w: WeylElement) -> DomainMatrix:
        """
        Ad of the lift of w: the product of exp(ad e_i) exp(-ad f_i) exp(ad e_i) along the reduced word,
        or of their inverses for a model built with inverse_lifts.
        """
        result = linalg.eye(self.n)
        for i in w.word:
            result = linalg.multiply(result, self._simple_lifts[i])
        # on h the lift acts as w does on coroots
        scale = self.h_scale
        on_h = [[linalg.entries(result)[i][j] for j in range(self.r)] for i in range(self.r)]
        expected = [[Fraction(w.matrix[i][j]) * scale[i] / scale[j] for j in range(self.r)] for i in range(self.r)]
        assert linalg.equal(linalg.matrix(on_h), linalg.matrix(expected)), f"lift of {w} does not act as {w} on h"
        return result

    def torus_action(self, m: Optional[TorusElement], domain=None) -> DomainMatrix:
        """Ad_m: e_b scaled by the character of b, h fixed."""
        if m is None:
            return linalg.eye(self.n, domain or QQ)
        domain = linalg.unify(domain or QQ, m.domain)
        values = [domain.one] * self.r + [m.character(root, domain) for root in self.weights[self.r :]]
        return linalg.diagonal(values, domain)


_MODELS: Dict[Tuple[int, bool], LieAlgebraModel] = {}


def build_lie_algebra(rs: RootSystem, cap: int = DEFAULTS.oracle_cap, inverse_lifts: bool = False) -> LieAlgebraModel:
    """Chevalley model of g; the oracle size max(rank, longest root string) must not exceed cap."""
    size = oracle_size(rs)
    if size > cap:
        raise CapExceededError("oracle size", size, cap)
    key = (id(rs), inverse_lifts)
    model = _MODELS.get(key)
    if model is None or model.rs is not rs:
        model = _MODELS[key] = LieAlgebraModel(rs, inverse_lifts)
    return model


def verify_model(model: LieAlgebraModel) -> List[str]:
    """Jacobi identity, ad-invariance of the Killing form, <<E_a, E_-a>> = 1, and agreement with rootdata."""
    problems = []
    n = model.n
    units = [[QQ.one if k == a else QQ.zero for k in range(n)] for a in range(n)]
    brackets = [[model.bracket(units[a], units[b]) for b in range(n)] for a in range(n)]

    def br(x, b):
        result = [QQ.zero] * n
        for a, xa in enumerate(x):
            if xa:
                for c, value in enumerate(brackets[a][b]):
                    if value:
                        result[c] += xa * value
        return result

    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                total = [
                    p + q + s
                    for p, q, s in zip(br(brackets[a][b], c), br(brackets[b][c], a), br(brackets[c][a], b))
                ]
                if any(total):
                    problems.append(f"Jacobi fails on basis ({a},{b},{c})")
    K = model.killing
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left = sum(Fraction(int(v.numerator), int(v.denominator)) * K[k][c] for k, v in enumerate(brackets[a][b]) if v)
                right = sum(Fraction(int(v.numerator), int(v.denominator)) * K[b][k] for k, v in enumerate(brackets[a][c]) if v)
                if left + right:
                    problems.append(f"Killing form not invariant on ({a},{b},{c})")
    for root in model.rs.positive_roots:
        kappa = K[model.e(root)][model.e(negate(root))]
        if not kappa:
            problems.append(f"<<E_a, E_-a>> undefined for {root}")
    # kappa(h_i, h_j) = 4 K_ij / (K_ii K_jj)
    rs = model.rs
    for i in range(rs.rank):
        for j in range(rs.rank):
            expected = 4 * rs.killing[i][j] / (rs.killing[i][i] * rs.killing[j][j])
            if K[i][j] != expected:
                problems.append(f"Cartan Gram ({i},{j}) is {K[i][j]}, root data gives {expected}")
    return problems


def normalized_root_vectors(model: LieAlgebraModel, root: Root) -> Tuple[Dict[int, Fraction], Dict[int, Fraction]]:
    """E_a = e_a and E_-a = e_-a / kappa(e_a, e_-a), so <<E_a, E_-a>> = 1."""
    a, b = model.e(root), model.e(negate(root))
    return {a: Fraction(1)}, {b: 1 / model.killing[a][b]}


# gamma_d


def gamma_d_map(model: LieAlgebraModel, triple: Triple) -> DomainMatrix:
    """
    gamma_d: g_S -> g_T as an n x n matrix, zero off g_S.

    h_i -> h_d(i) and e_{+-a_i} -> e_{+-d(a_i)}, extended along brackets; checked to be a bracket
    homomorphism and an isometry.
    """
    rs = model.rs
    mapping = triple.mapping
    images: Dict[int, List] = {}
    for i in triple.S:
        images[model.h(i)] = [QQ.one if k == mapping[i] else QQ.zero for k in range(model.n)]
    for sign in (1, -1):
        for root in rs.subsystem(triple.S):
            signed = root if sign > 0 else negate(root)
            k = model.e(signed)
            support = rs.support(root)
            if sum(root) == 1:
                target = rs.simple(mapping[support[0]])
                target = target if sign > 0 else negate(target)
                images[k] = [QQ.one if c == model.e(target) else QQ.zero for c in range(model.n)]
                continue
            i = next(i for i in triple.S if root[i] and rs.is_root(tuple(c - (j == i) for j, c in enumerate(root))))
            step = rs.simple(i) if sign > 0 else negate(rs.simple(i))
            rest = tuple(c - s for c, s in zip(signed, step))
            N = model.constants[(step, rest)]
            lifted = model.bracket(images[model.e(step)], images[model.e(rest)])
            images[k] = [value / N for value in lifted]
    rows = [[QQ.zero] * model.n for _ in range(model.n)]
    for k, image in images.items():
        for c, value in enumerate(image):
            rows[c][k] = value
    gamma = linalg.matrix(rows)

    levi = linalg.entries(model.levi_rows(triple.S))
    for x in levi:
        for y in levi:
            left = linalg.image(gamma, linalg.matrix([model.bracket(x, y)]))
            gx = linalg.entries(linalg.image(gamma, linalg.matrix([x])))[0]
            gy = linalg.entries(linalg.image(gamma, linalg.matrix([y])))[0]
            if not linalg.equal(left, linalg.matrix([model.bracket(gx, gy)])):
                raise OracleMismatchError(f"gamma_d for {triple} is not a bracket homomorphism")
            kx = linalg.pairing(linalg.matrix([x]), model.gram, linalg.matrix([y]))
            ky = linalg.pairing(linalg.matrix([gx]), model.gram, linalg.matrix([gy]))
            if not linalg.equal(kx, ky):
                raise OracleMismatchError(f"gamma_d for {triple} does not preserve the Killing form")
    return gamma


# Subspaces of g + g


@dataclass(frozen=True, eq=False)
class NormalForm:
    """The data (S, T, d, V, v, m) of Ad_(m, v) l_{S,T,d,V}."""

    triple: Triple
    V: LagrangianSubspace
    v: Optional[WeylElement] = None
    m: Optional[TorusElement] = None


@dataclass(frozen=True, eq=False)
class DoubleSubspace:
    """Rows of basis span a subspace of g + g."""

    model: LieAlgebraModel
    basis: DomainMatrix
    form: Optional[NormalForm] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return linalg.dim(self.basis)

    def same_as(self, other: DoubleSubspace) -> bool:
        return linalg.same_space(self.basis, other.basis)

    def contains(self, other: DoubleSubspace) -> bool:
        return linalg.contains(self.basis, other.basis)


def diagonal_rows(model: LieAlgebraModel, rows: DomainMatrix) -> DomainMatrix:
    """(x, x) for rows x of g."""
    return linalg.hstack(rows, rows)


def _pair_rows(first: DomainMatrix, second: DomainMatrix) -> DomainMatrix:
    return linalg.hstack(first, second)


def double_bracket(model: LieAlgebraModel, x: Sequence, y: Sequence, domain) -> List:
    n = model.n
    return model.bracket(x[:n], y[:n], domain) + model.bracket(x[n:], y[n:], domain)


def derived_rows(L: DoubleSubspace) -> DomainMatrix:
    """Rows spanning [L, L]."""
    model, domain = L.model, L.basis.domain
    rows = linalg.entries(L.basis)
    brackets = [double_bracket(model, rows[j], rows[k], domain) for j in range(len(rows)) for k in range(j + 1, len(rows))]
    return linalg.matrix(brackets, 2 * model.n, domain)


def build_lagrangian(
    model: LieAlgebraModel,
    triple: Triple,
    V: LagrangianSubspace,
    v: Optional[WeylElement] = None,
    m: Optional[TorusElement] = None,
) -> DoubleSubspace:
    """Ad_(m, v) (V + (n_S + n_T^-) + {(x, gamma_d x) : x in g_S})."""
    rs = model.rs
    if V.ambient.dim != 2 * (rs.rank - len(triple.S)) or not is_lagrangian(V):
        raise NotLagrangianError(f"{V} is not Lagrangian in z_S + z_T")
    hh = V.parent_rows
    r, n = rs.rank, model.n
    first = model.from_cartan(hh[:, :r]) if hh.shape[0] else linalg.zeros(0, n)
    second = model.from_cartan(hh[:, r:]) if hh.shape[0] else linalg.zeros(0, n)
    nil_S = model.nilradical_rows(triple.S)
    nil_T = model.opposite_nilradical_rows(triple.T)
    levi = model.levi_rows(triple.S)
    gamma = gamma_d_map(model, triple)
    basis = linalg.stack(
        _pair_rows(first, second),
        _pair_rows(nil_S, linalg.zeros(nil_S.shape[0], n)),
        _pair_rows(linalg.zeros(nil_T.shape[0], n), nil_T),
        _pair_rows(levi, linalg.image(gamma, levi)),
    )
    if v is not None or m is not None:
        domain = linalg.unify(basis.domain, m.domain if m is not None else QQ)
        Ad_v = model.weyl_lift(v) if v is not None else linalg.eye(n)
        basis = linalg.image(linalg.block_diag(model.torus_action(m, domain), Ad_v), basis)
    if linalg.rank(basis) != n:
        raise OracleMismatchError(f"l_{triple} has dimension {linalg.rank(basis)}, expected {n}")
    return DoubleSubspace(model, basis, NormalForm(triple, V, v, m))


def is_lagrangian_subalgebra(L: DoubleSubspace) -> bool:
    """dim n, isotropic, and closed under the bracket."""
    model = L.model
    if L.dim != model.n:
        return False
    if not linalg.is_isotropic(L.basis, model.double_gram):
        return False
    return linalg.contains(L.basis, derived_rows(L))


def normalizer(L: DoubleSubspace, within: Optional[DomainMatrix] = None) -> DoubleSubspace:
    """
    Normalizer of a Lagrangian subalgebra in g + g (or in the span of within).

    <[X, a], b> = <X, [a, b]>, so X normalizes L exactly when X is orthogonal to [L, L].
    """
    model = L.model
    orthogonal = linalg.orthogonal(derived_rows(L), model.double_gram)
    if within is not None:
        orthogonal = linalg.intersect(orthogonal, within)
    return DoubleSubspace(model, linalg.row_basis(orthogonal))


def _direct_normalizer_in_diagonal(L: DoubleSubspace) -> DomainMatrix:
    """Rows x of g with (x, x) orthogonal to [L, L]."""
    model = L.model
    n = model.n
    derived = derived_rows(L)
    if derived.shape[0] == 0:
        return linalg.eye(n, L.basis.domain)
    # (x, x) F D^T = x (G D1^T - G D2^T)
    functionals = linalg.subtract(
        linalg.multiply(model.gram, derived[:, :n].transpose()),
        linalg.multiply(model.gram, derived[:, n:].transpose()),
    )
    return linalg.left_kernel(functionals)


# Formula side


@dataclass(frozen=True, eq=False)
class NormalizerFormula:
    """The pieces of n(l) = z' + g^phi + psi(n_v) for l in normal form."""

    S_v: Tuple[int, ...]
    phi: DomainMatrix
    z_prime: DomainMatrix
    """Rows in H_a coordinates of h"""
    g_phi: DomainMatrix
    psi_nv: DomainMatrix
    V_prime: DomainMatrix
    """Rows in h + h coordinates"""
    length: int

    def normalizer_rows(self, model: LieAlgebraModel) -> DomainMatrix:
        return linalg.span(model.from_cartan(self.z_prime), self.g_phi, self.psi_nv)


def phi_matrix(model: LieAlgebraModel, triple: Triple, v: WeylElement, m: Optional[TorusElement]) -> DomainMatrix:
    """phi = Ad_v gamma_d chi_S Ad_m^-1 on all of g, chi_S the projection onto g_S."""
    domain = m.domain if m is not None else QQ
    inverse_m = model.torus_action(m.inverse() if m is not None else None, domain)
    return linalg.multiply(
        model.weyl_lift(v), gamma_d_map(model, triple), model.levi_projection(triple.S), inverse_m
    )


def fixed_space(phi: DomainMatrix, rows: DomainMatrix) -> DomainMatrix:
    """Rows of span(rows) fixed by phi."""
    if rows.shape[0] == 0:
        return rows
    shifted = linalg.subtract(phi, linalg.eye(phi.shape[0], phi.domain))
    coefficients = linalg.kernel(linalg.multiply(shifted, rows.transpose()))
    return linalg.row_basis(linalg.multiply(coefficients, rows)) if coefficients.shape[0] else linalg.zeros(
        0, rows.shape[1], phi.domain
    )


def _psi(phi: DomainMatrix, x: DomainMatrix, bound: int) -> DomainMatrix:
    """(1 + phi + phi^2 + ...) x for a row x in a space where phi is nilpotent."""
    total, current = x, x
    phi_t = phi.transpose()
    for _ in range(bound + 1):
        current = linalg.multiply(current, phi_t)
        if linalg.is_zero(current):
            return total
        total = linalg.add(total, current)
    raise OracleMismatchError("phi is not nilpotent on n_S(v,d)")


def z_prime(rs: RootSystem, triple: Triple, v: WeylElement, S_v: Sequence[int]) -> DomainMatrix:
    """{z in z_S(v,d) : gamma_d chi_S z = chi_T v^-1 z}, in H_a coordinates."""
    Z = z_basis(rs, S_v)
    if Z.shape[0] == 0:
        return Z
    v_inverse = weyl_group(rs).inverse(v)
    condition = linalg.subtract(
        linalg.multiply(gamma_matrix(rs, triple.d), projection(rs, triple.S)),
        linalg.multiply(projection(rs, triple.T), v_inverse.h_matrix),
    )
    coefficients = linalg.kernel(linalg.multiply(condition, Z.transpose()))
    if coefficients.shape[0] == 0:
        return linalg.zeros(0, rs.rank)
    return linalg.row_basis(linalg.multiply(coefficients, Z))


def z_prime_alternative(rs: RootSystem, triple: Triple, v: WeylElement, S_v: Sequence[int]) -> DomainMatrix:
    """{z in z_S(v,d) : z - phi(z) in v(z_T)}, the same space described through phi."""
    Z = z_basis(rs, S_v)
    if Z.shape[0] == 0:
        return Z
    r = rs.rank
    phi_h = linalg.multiply(v.h_matrix, gamma_matrix(rs, triple.d), projection(rs, triple.S))
    moved = linalg.image(linalg.subtract(linalg.eye(r), phi_h), Z)
    target = linalg.image(v.h_matrix, z_basis(rs, triple.T))
    relations = linalg.left_kernel(linalg.stack(moved, -target)) if target.shape[0] else linalg.left_kernel(moved)
    if relations.shape[0] == 0:
        return linalg.zeros(0, r)
    return linalg.row_basis(linalg.multiply(relations[:, : Z.shape[0]], Z))


def v_prime(
    rs: RootSystem, triple: Triple, V: LagrangianSubspace, v: WeylElement, zp: Optional[DomainMatrix] = None
) -> DomainMatrix:
    """V' = {(z, v^-1 z) : z in z'} meet (V + {(x, gamma_d x) : x in h_S}), in h + h coordinates."""
    if zp is None:
        zp = z_prime(rs, triple, v, _s_of(rs, triple, v))
    if zp.shape[0] == 0:
        return linalg.zeros(0, 2 * rs.rank)
    z_graph = linalg.hstack(zp, linalg.image(weyl_group(rs).inverse(v).h_matrix, zp))
    allowed = linalg.stack(V.parent_rows, cartan_graph(rs, triple.d))
    return linalg.intersect(z_graph, allowed)


def normalizer_formula(model: LieAlgebraModel, form: NormalForm) -> NormalizerFormula:
    rs = model.rs
    group = weyl_group(rs)
    triple = form.triple
    v = form.v or group.identity
    S_v = _s_of(rs, triple, v)
    phi = phi_matrix(model, triple, v, form.m)
    zp = z_prime(rs, triple, v, S_v)
    if not linalg.same_space(zp, z_prime_alternative(rs, triple, v, S_v)):
        raise OracleMismatchError(f"the two descriptions of z' disagree for {triple}, v={v}")
    g_phi = fixed_space(phi, model.levi_rows(S_v))
    v_inverse = group.inverse(v)
    n_v = [root for root in rs.positive_roots if not is_positive(v_inverse.apply(root))]
    psi_rows = [linalg.entries(_psi(phi, model.root_rows([root]), len(rs.positive_roots)))[0] for root in n_v]
    psi_nv = linalg.matrix(psi_rows, model.n, phi.domain)

    V_prime = v_prime(rs, triple, form.V, v, zp)
    return NormalizerFormula(S_v, phi, zp, g_phi, psi_nv, V_prime, v.length)


def normalizer_in_diagonal(L: DoubleSubspace) -> DoubleSubspace:
    """
    n(l) inside g_Delta by a direct solve; for a normal form also assembles z' + g^phi + psi(n_v)
    and raises OracleMismatchError unless the two agree as subspaces.
    """
    direct = _direct_normalizer_in_diagonal(L)
    if L.form is not None:
        formula = normalizer_formula(L.model, L.form)
        expected = formula.normalizer_rows(L.model)
        if not linalg.same_space(direct, expected):
            raise OracleMismatchError(f"normalizer of l_{L.form.triple}", linalg.dim(expected), linalg.dim(direct))
    return DoubleSubspace(L.model, diagonal_rows(L.model, direct))


def intersect_with_diagonal(L: DoubleSubspace) -> DoubleSubspace:
    """g_Delta meet L by a direct solve, checked against Ad_(m,v) V' + (g^phi + psi(n_v))_Delta for normal forms."""
    model = L.model
    identity = linalg.eye(model.n)
    direct = linalg.intersect(L.basis, diagonal_rows(model, identity))
    if L.form is not None:
        formula = normalizer_formula(model, L.form)
        r = model.r
        V_prime = formula.V_prime
        # Ad_(m, v)(z, v^-1 z) = (z, z)
        cartan_part = model.from_cartan(V_prime[:, :r]) if V_prime.shape[0] else linalg.zeros(0, model.n)
        expected = linalg.span(
            diagonal_rows(model, cartan_part),
            diagonal_rows(model, formula.g_phi),
            diagonal_rows(model, formula.psi_nv),
        )
        if not linalg.same_space(direct, expected):
            raise OracleMismatchError(f"g_Delta meet l_{L.form.triple}", linalg.dim(expected), linalg.dim(direct))
        count = linalg.dim(V_prime) + linalg.dim(formula.g_phi) + formula.length
        if count != linalg.dim(direct):
            raise OracleMismatchError(f"dim V' + dim g^phi + l(v) for {L.form.triple}", count, linalg.dim(direct))
    return DoubleSubspace(model, linalg.row_basis(direct))


# phi and its strata


@dataclass(frozen=True)
class NilpotencyReport:
    index: int
    """Least k with phi^k = 0 on n_S(v,d)"""
    strata: int
    preserves: bool
    """phi maps z_S(v,d), g_S(v,d) and n_S(v,d) into themselves"""
    lowers: bool
    """phi maps the j-th layer of n_S(v,d) into layer j - 1"""

    @property
    def ok(self) -> bool:
        return self.preserves and self.lowers and self.index <= self.strata


def _maps_into(phi: DomainMatrix, source: DomainMatrix, target: DomainMatrix) -> bool:
    if source.shape[0] == 0:
        return True
    image = linalg.image(phi, source)
    if linalg.is_zero(image):
        return True
    return linalg.contains(target, image)


def phi_nilpotency(
    model: LieAlgebraModel, triple: Triple, v: WeylElement, m: Optional[TorusElement] = None
) -> NilpotencyReport:
    rs = model.rs
    S_v = _s_of(rs, triple, v)
    phi = phi_matrix(model, triple, v, m)
    z_rows = model.center_rows(S_v)
    g_rows = model.levi_rows(S_v)
    n_rows = model.nilradical_rows(S_v)
    preserves = all(_maps_into(phi, rows, rows) for rows in (z_rows, g_rows, n_rows))

    layers = sigma_strata(rs, triple, v)
    lowers = True
    for j, layer in enumerate(layers):
        below = model.root_rows(layers[j - 1]) if j else linalg.zeros(0, model.n)
        if not _maps_into(phi, model.root_rows(layer), below):
            lowers = False

    index = 0
    current = n_rows
    while current.shape[0] and not linalg.is_zero(current):
        current = linalg.image(phi, current)
        index += 1
        if index > len(rs.positive_roots) + 1:
            break
    return NilpotencyReport(index, len(layers), preserves, lowers)


def linalg_fact_check(layers: Sequence[DomainMatrix], U: DomainMatrix, Y: DomainMatrix, phi: DomainMatrix) -> bool:
    """
    For a graded space with phi lowering degree, Y meeting Im phi trivially and U meeting
    Ker phi trivially: {u in U : u - phi(u) in Y} = 0. InapplicableError when a hypothesis fails.
    """
    ncols = phi.shape[0]
    for j, layer in enumerate(layers):
        below = layers[j - 1] if j else linalg.zeros(0, ncols)
        if not _maps_into(phi, layer, below):
            raise InapplicableError(f"phi does not lower degree on layer {j}")
    whole = linalg.stack(*layers) if layers else linalg.zeros(0, ncols)
    image = linalg.image(phi, whole)
    if linalg.dim(linalg.intersect(Y, image)):
        raise InapplicableError("Y meets the image of phi")
    kernel = linalg.kernel(phi)
    if U.shape[0] and kernel.shape[0] and linalg.dim(linalg.intersect(U, kernel)):
        raise InapplicableError("U meets the kernel of phi")
    if U.shape[0] == 0:
        return True
    moved = linalg.image(linalg.subtract(linalg.eye(ncols, phi.domain), phi), U)
    relations = linalg.left_kernel(linalg.stack(moved, -Y)) if Y.shape[0] else linalg.left_kernel(moved)
    if relations.shape[0] == 0:
        return True
    return linalg.is_zero(linalg.multiply(relations[:, : U.shape[0]], U))


def normalizer_fact_instance(
    model: LieAlgebraModel, triple: Triple, v: WeylElement, m: Optional[TorusElement] = None
) -> Tuple[List[DomainMatrix], DomainMatrix, DomainMatrix, DomainMatrix]:
    """
    The graded space n^-_S(v,d) = sum of n_j^-, with U the layers j >= 1 and
    Y = Ad_v n_T^- meet n^-_S(v,d), as they arise in the normalizer computation.
    """
    rs = model.rs
    layers = sigma_strata(rs, triple, v)
    graded = [model.root_rows([negate(root) for root in layer]) for layer in layers]
    U = linalg.stack(*graded[1:]) if len(graded) > 1 else linalg.zeros(0, model.n)
    S_v = _s_of(rs, triple, v)
    v_inverse = weyl_group(rs).inverse(v)
    Y_roots = [
        negate(root)
        for root in rs.positive_roots
        if not rs.in_span(root, S_v)
        and is_positive(v_inverse.apply(root))
        and not rs.in_span(v_inverse.apply(root), triple.T)
    ]
    Y = model.root_rows(Y_roots)
    return graded, U, Y, phi_matrix(model, triple, v, m)


# Other constructions of the same subalgebras


def _levi_condition(model: LieAlgebraModel, triple: Triple) -> DomainMatrix:
    """The map (x, y) -> gamma_d chi_S(x) - chi_T(y) as an n x 2n matrix."""
    gamma = gamma_d_map(model, triple)
    return linalg.hstack(
        linalg.multiply(gamma, model.levi_projection(triple.S)),
        -model.levi_projection(triple.T),
    )


def _solve_on(rows: DomainMatrix, conditions: DomainMatrix) -> DomainMatrix:
    """Span of the X in span(rows) with conditions X^T = 0."""
    coefficients = linalg.kernel(linalg.multiply(conditions, rows.transpose()))
    if coefficients.shape[0] == 0:
        return linalg.zeros(0, rows.shape[1], rows.domain)
    return linalg.row_basis(linalg.multiply(coefficients, rows))


def _parabolic_pair(model: LieAlgebraModel, triple: Triple) -> DomainMatrix:
    n = model.n
    p_S = model.parabolic_rows(triple.S)
    p_T = model.opposite_parabolic_rows(triple.T)
    return linalg.stack(
        _pair_rows(p_S, linalg.zeros(p_S.shape[0], n)),
        _pair_rows(linalg.zeros(p_T.shape[0], n), p_T),
    )


def stabilizer_algebra(model: LieAlgebraModel, triple: Triple) -> DoubleSubspace:
    """r_{S,T,d} = {(x, y) in p_S + p_T^- : gamma_d chi_S(x) = chi_T(y)}, of dimension n + z."""
    rows = _solve_on(_parabolic_pair(model, triple), _levi_condition(model, triple))
    expected = model.n + model.r - len(triple.S)
    if linalg.dim(rows) != expected:
        raise OracleMismatchError(f"dim r_{triple}", expected, linalg.dim(rows))
    return DoubleSubspace(model, rows)


def karolinsky_lagrangian(model: LieAlgebraModel, triple: Triple, V: LagrangianSubspace) -> DoubleSubspace:
    """
    {(x, y) in p_S + p_T^- : gamma_d(pr x) = pr y and (pr_z x, pr_z y) in V}, with pr the Levi
    projections and pr_z the projections of the Cartan parts onto z_S, z_T.
    """
    rs = model.rs
    r, n = rs.rank, model.n
    hh = V.parent_rows
    functionals = []
    # (a, b) lies in V iff it is orthogonal to V, since V is Lagrangian in z_S + z_T
    for row in linalg.entries(hh):
        first = linalg.matrix([row[:r]])
        second = linalg.matrix([row[r:]])
        pieces = []
        for vector, S, sign in ((first, triple.S, 1), (second, triple.T, -1)):
            # x -> K(v, (1 - chi_S) D^-1 x_h)
            to_z = linalg.subtract(linalg.eye(r), projection(rs, S))
            unscale = linalg.diagonal([1 / s for s in model.h_scale])
            on_h = linalg.multiply(vector, rs.killing_matrix, to_z, unscale)
            padded = linalg.entries(on_h)[0] + [QQ.zero] * (n - r)
            pieces += [sign * x for x in padded]
        functionals.append(pieces)
    conditions = linalg.stack(_levi_condition(model, triple), linalg.matrix(functionals, 2 * n))
    rows = _solve_on(_parabolic_pair(model, triple), conditions)
    return DoubleSubspace(model, rows)


def normalizer_bound(model: LieAlgebraModel, L: DoubleSubspace) -> bool:
    """n(l) lies in p_S(v,d) meet Ad_v p_T^-, and psi - 1 = phi psi on n_v."""
    form = L.form
    if form is None:
        raise ValueError("normalizer_bound needs a Lagrangian in normal form")
    rs = model.rs
    v = form.v or weyl_group(rs).identity
    formula = normalizer_formula(model, form)
    n_l = _direct_normalizer_in_diagonal(L)
    bound = linalg.intersect(
        model.parabolic_rows(formula.S_v), linalg.image(model.weyl_lift(v), model.opposite_parabolic_rows(form.triple.T))
    )
    if not linalg.contains(bound, n_l):
        return False
    group = weyl_group(rs)
    v_inverse = group.inverse(v)
    phi = formula.phi
    for root in rs.positive_roots:
        if is_positive(v_inverse.apply(root)):
            continue
        x = model.root_rows([root])
        psi_x = _psi(phi, x, len(rs.positive_roots))
        if not linalg.is_zero(linalg.subtract(linalg.subtract(psi_x, x), linalg.image(phi, psi_x))):
            return False
    return True


# g + h


@dataclass(frozen=True, eq=False)
class GhSubspace:
    """n + V inside g + h with the form kappa + (-kappa on h)."""

    model: LieAlgebraModel
    basis: DomainMatrix
    V: LagrangianSubspace


def gh_lagrangian(model: LieAlgebraModel, V: LagrangianSubspace) -> GhSubspace:
    """n + V for a Lagrangian V of h + h, as a subspace of g + h."""
    rs = model.rs
    r, n = rs.rank, model.n
    if V.ambient.dim != 2 * r or not is_lagrangian(V):
        raise NotLagrangianError(f"{V} is not Lagrangian in h + h")
    hh = V.parent_rows
    first = model.from_cartan(hh[:, :r])
    # second factor h keeps H_a coordinates scaled to coroots like the first
    second = linalg.entries(model.from_cartan(hh[:, r:]))
    second = linalg.matrix([row[:r] for row in second], r, first.domain)
    nil = model.borel_rows()[r:, :]
    basis = linalg.stack(
        linalg.hstack(first, second),
        linalg.hstack(nil, linalg.zeros(nil.shape[0], r)),
    )
    return GhSubspace(model, basis, V)


def is_gh_lagrangian_subalgebra(L: GhSubspace) -> bool:
    model = L.model
    r, n = model.r, model.n
    gram = linalg.block_diag(model.gram, -model.gram[:r, :r])
    if linalg.dim(L.basis) != model.N + r or not linalg.is_isotropic(L.basis, gram):
        return False
    rows = linalg.entries(L.basis)
    domain = L.basis.domain
    brackets = [
        model.bracket(rows[j][:n], rows[k][:n], domain) + [domain.zero] * r
        for j in range(len(rows))
        for k in range(j + 1, len(rows))
    ]
    return linalg.contains(L.basis, linalg.matrix(brackets, n + r, domain))
