"""
Root systems built from type strings, and the Killing form on the Cartan subalgebra.

Simple roots are indexed 0..r-1 and printed as a1..ar. Roots are integer coordinate
vectors in the simple root basis. The Cartan subalgebra h is Q^r in the basis
{H_a1, ..., H_ar}, where H_a is dual to the root a under the Killing form.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import sympify
from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import CapExceededError, NotIsometryError, ParseError

log = logging.getLogger(__name__)

Root = Tuple[int, ...]
Subset = Tuple[int, ...]
Isometry = Tuple[Tuple[int, int], ...]

_SIMPLE = re.compile(r"([A-G])([1-9][0-9]*)")
_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL = {"E": (6, 7, 8), "F": (4,), "G": (2,)}

# Bourbaki numbering, 1-based
_E_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def _simple_form(letter: str, n: int) -> List[List[Fraction]]:
    """Symmetric form on the simple roots of one simple factor, long roots of length 2."""
    B = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        B[i][i] = Fraction(2)

    def edge(i: int, j: int, value) -> None:
        B[i][j] = B[j][i] = Fraction(value)

    if letter in "ABC":
        for i in range(n - 1):
            edge(i, i + 1, -1)
        if letter == "B":
            B[n - 1][n - 1] = Fraction(1)
            edge(n - 2, n - 1, Fraction(-1))
        if letter == "C":
            B[n - 1][n - 1] = Fraction(4)
            edge(n - 2, n - 1, -2)
    elif letter == "D":
        for i in range(n - 2):
            edge(i, i + 1, -1)
        edge(n - 3, n - 1, -1)
    elif letter == "E":
        for i, j in _E_EDGES:
            if i <= n and j <= n:
                edge(i - 1, j - 1, -1)
    elif letter == "F":
        B[2][2] = B[3][3] = Fraction(1)
        edge(0, 1, -1)
        edge(1, 2, -1)
        edge(2, 3, Fraction(-1, 2))
    elif letter == "G":
        B[1][1] = Fraction(6)
        edge(0, 1, -3)
    return B


def parse_type(spec: str) -> List[Tuple[str, int]]:
    """Split "A1xB2" into [("A", 1), ("B", 2)], reporting the position of the first bad token."""
    if not spec:
        raise ParseError("empty type spec", spec, 0)
    factors = []
    position = 0
    for token in spec.split("x"):
        match = _SIMPLE.fullmatch(token)
        if not match:
            raise ParseError(f"bad simple type {token!r}", spec, position)
        letter, n = match.group(1), int(match.group(2))
        if letter in _EXCEPTIONAL:
            if n not in _EXCEPTIONAL[letter]:
                raise ParseError(f"no simple type {letter}{n}", spec, position)
        elif n < _MIN_RANK[letter]:
            raise ParseError(f"{letter}{n} needs rank at least {_MIN_RANK[letter]}", spec, position)
        factors.append((letter, n))
        position += len(token) + 1
    return factors


@dataclass(frozen=True, eq=False)
class RootSystem:
    """
    A semisimple root system with its Cartan matrix and Killing Gram matrix.

    cartan[i][j] is <a_j, a_i^vee>, so s_i(a_j) = a_j - cartan[i][j] a_i.
    """

    type_spec: str
    factors: Tuple[Tuple[str, int], ...]
    cartan: Tuple[Tuple[int, ...], ...]
    positive_roots: Tuple[Root, ...]
    killing: Tuple[Tuple[Fraction, ...], ...]
    """K[i][j] = <<a_i, a_j>> for the Killing form"""
    factor_of: Tuple[int, ...] = field(repr=False)
    """Index of the simple factor each simple root belongs to"""

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def simple_roots(self) -> Subset:
        return tuple(range(self.rank))

    @property
    def dimension(self) -> int:
        """dim g = r + 2 |positive roots|"""
        return self.rank + 2 * len(self.positive_roots)

    @cached_property
    def roots(self) -> Tuple[Root, ...]:
        """Positive roots followed by their negatives."""
        return self.positive_roots + tuple(negate(root) for root in self.positive_roots)

    @cached_property
    def _positive_index(self) -> Dict[Root, int]:
        return {root: k for k, root in enumerate(self.positive_roots)}

    @cached_property
    def killing_matrix(self) -> DomainMatrix:
        return linalg.matrix(self.killing)

    def is_root(self, root: Root) -> bool:
        return root in self._positive_index or negate(root) in self._positive_index

    def root_index(self, root: Root) -> int:
        """Position of a positive root in height order."""
        return self._positive_index[root]

    def simple(self, i: int) -> Root:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def pairing(self, root: Root, i: int) -> int:
        """<root, a_i^vee>"""
        return sum(c * self.cartan[i][k] for k, c in enumerate(root))

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        """Killing form of two vectors in root (equivalently H_a) coordinates."""
        total = Fraction(0)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                if a and b:
                    total += Fraction(a) * self.killing[i][j] * b
        return total

    def support(self, root: Root) -> Subset:
        return tuple(i for i, c in enumerate(root) if c)

    def in_span(self, root: Root, subset: Iterable[int]) -> bool:
        """Whether the root lies in [S], the span of the simple roots in subset."""
        subset = set(subset)
        return all(i in subset for i in self.support(root))

    def subsystem(self, subset: Iterable[int]) -> Tuple[Root, ...]:
        """Positive roots of [S]."""
        subset = tuple(subset)
        return tuple(root for root in self.positive_roots if self.in_span(root, subset))

    def __str__(self) -> str:
        return self.type_spec


def negate(root: Sequence[int]) -> Root:
    return tuple(-c for c in root)


def height(root: Sequence[int]) -> int:
    return sum(root)


def is_positive(root: Sequence[int]) -> bool:
    return any(c > 0 for c in root)


def _positive_roots(cartan: Sequence[Sequence[int]]) -> List[Root]:
    """Positive roots from root strings, layer by layer in height."""
    r = len(cartan)
    simple = [tuple(1 if k == i else 0 for k in range(r)) for i in range(r)]
    found = set(simple)
    layer = list(simple)
    while layer:
        nxt = set()
        for root in layer:
            for i in range(r):
                if root == simple[i]:
                    continue
                down = 0
                shifted = list(root)
                while True:
                    shifted[i] -= 1
                    if tuple(shifted) not in found:
                        break
                    down += 1
                up = down - sum(c * cartan[i][k] for k, c in enumerate(root))
                if up > 0:
                    raised = list(root)
                    raised[i] += 1
                    nxt.add(tuple(raised))
        nxt -= found
        found |= nxt
        layer = sorted(nxt)
    return sorted(found, key=lambda root: (height(root), negate(root)))


def build_root_system(type_spec: str, rank_cap: int = DEFAULTS.rank_cap) -> RootSystem:
    """Parse a type string such as "A2" or "A1xB2" and build its root system."""
    factors = parse_type(type_spec)
    r = sum(n for _, n in factors)
    if r > rank_cap:
        raise CapExceededError("rank", r, rank_cap)

    form = [[Fraction(0)] * r for _ in range(r)]
    factor_of = []
    offset = 0
    for k, (letter, n) in enumerate(factors):
        block = _simple_form(letter, n)
        for i in range(n):
            for j in range(n):
                form[offset + i][offset + j] = block[i][j]
        factor_of.extend([k] * n)
        offset += n

    cartan = [[int(2 * form[i][j] / form[i][i]) for j in range(r)] for i in range(r)]
    positive = _positive_roots(cartan)

    # Killing form on coroots: kappa(h_i, h_j) = sum over all roots of b(h_i) b(h_j)
    values = [[sum(c * cartan[i][k] for k, c in enumerate(root)) for i in range(r)] for root in positive]
    coroot_gram = linalg.matrix([[2 * sum(v[i] * v[j] for v in values) for j in range(r)] for i in range(r)])
    C = linalg.matrix(cartan)
    K = linalg.multiply(C.transpose(), coroot_gram.inv(), C)
    killing = tuple(tuple(Fraction(int(x.numerator), int(x.denominator)) for x in row) for row in linalg.entries(K))

    rs = RootSystem(
        type_spec=type_spec,
        factors=tuple(factors),
        cartan=tuple(tuple(row) for row in cartan),
        positive_roots=tuple(positive),
        killing=killing,
        factor_of=tuple(factor_of),
    )
    log.info(f"built {type_spec}: rank {r}, {len(positive)} positive roots, dim g {rs.dimension}")
    return rs


def killing_gram(rs: RootSystem) -> DomainMatrix:
    """<<a_i, a_j>> in the H_a basis of h, as an exact matrix over QQ."""
    return rs.killing_matrix


def root_strings(rs: RootSystem) -> int:
    """Length of the longest a_i-string through a root not proportional to a_i; 2 for rank one."""
    longest = 2
    for root in rs.roots:
        for i in range(rs.rank):
            if root == rs.simple(i) or root == negate(rs.simple(i)):
                continue
            shifted = list(root)
            while True:
                shifted[i] -= 1
                if not rs.is_root(tuple(shifted)):
                    break
            bottom = shifted[i] + 1
            shifted = list(root)
            while True:
                shifted[i] += 1
                if not rs.is_root(tuple(shifted)):
                    break
            longest = max(longest, shifted[i] - bottom)
    return longest


def oracle_size(rs: RootSystem) -> int:
    """Measure bounded by the oracle cap: max(rank, longest root string)."""
    return max(rs.rank, root_strings(rs))


# Subsets and isometries


def format_subset(subset: Iterable[int]) -> str:
    return "{" + ",".join(f"a{i + 1}" for i in sorted(subset)) + "}"


def format_isometry(d: Isometry) -> str:
    if not d:
        return "-"
    return ",".join(f"a{i + 1}>a{j + 1}" for i, j in d)


def _parse_root_name(token: str, text: str, position: int, rank: int) -> int:
    match = re.fullmatch(r"a([1-9][0-9]*)", token.strip())
    if not match:
        raise ParseError(f"bad simple root {token!r}", text, position)
    index = int(match.group(1)) - 1
    if index >= rank:
        raise ParseError(f"no simple root {token.strip()} in rank {rank}", text, position)
    return index


def parse_subset(text: str, rank: int) -> Subset:
    """Parse "{a1,a2}" (braces optional, "{}" for the empty set)."""
    body = text.strip()
    offset = text.find(body)
    if body.startswith("{"):
        if not body.endswith("}"):
            raise ParseError("unbalanced brace", text, offset + len(body))
        body = body[1:-1]
        offset += 1
    if not body.strip():
        return ()
    subset = []
    for token in body.split(","):
        subset.append(_parse_root_name(token, text, offset, rank))
        offset += len(token) + 1
    if len(set(subset)) != len(subset):
        raise ParseError("repeated simple root", text)
    return tuple(sorted(subset))


def parse_isometry(text: str, rank: int) -> Isometry:
    """Parse "a1>a2,a2>a1", "id" is not accepted here since it needs S."""
    body = text.strip()
    if body in ("", "-", "1"):
        return ()
    pairs = []
    offset = 0
    for token in body.split(","):
        if ">" not in token:
            raise ParseError("expected source>target", text, offset)
        source, target = token.split(">", 1)
        i = _parse_root_name(source, text, offset, rank)
        j = _parse_root_name(target, text, offset + len(source) + 1, rank)
        pairs.append((i, j))
        offset += len(token) + 1
    return tuple(sorted(pairs))


# Cartan subspaces


def z_basis(rs: RootSystem, S: Iterable[int]) -> DomainMatrix:
    """Rows spanning z_S = {x in h : a(x) = 0 for a in S}; a_i(x) = (K x)_i."""
    S = tuple(S)
    if not S:
        return linalg.eye(rs.rank)
    rows = linalg.matrix([rs.killing[i] for i in S])
    return linalg.kernel(rows)


def h_basis(rs: RootSystem, S: Iterable[int]) -> DomainMatrix:
    """Rows H_a for a in S."""
    return linalg.matrix([[1 if k == i else 0 for k in range(rs.rank)] for i in S], rs.rank)


def projection(rs: RootSystem, S: Iterable[int]) -> DomainMatrix:
    """chi_S, the projection of h onto h_S along z_S, acting on column vectors."""
    S = tuple(S)
    r = rs.rank
    if not S:
        return linalg.zeros(r, r)
    K_SS = linalg.matrix([[rs.killing[i][j] for j in S] for i in S])
    K_S = linalg.matrix([rs.killing[i] for i in S])
    embed = linalg.matrix([[1 if S[k] == i else 0 for k in range(len(S))] for i in range(r)])
    return linalg.multiply(embed, K_SS.inv(), K_S)


def gamma_matrix(rs: RootSystem, d: Isometry) -> DomainMatrix:
    """r x r matrix sending H_a to H_d(a) for a in S and killing the other basis vectors."""
    r = rs.rank
    rows = [[0] * r for _ in range(r)]
    for i, j in d:
        rows[j][i] = 1
    return linalg.matrix(rows)


def is_isometry(rs: RootSystem, d: Isometry) -> bool:
    """Whether d preserves the Killing form on simple roots."""
    return all(rs.killing[i][k] == rs.killing[j][l] for i, j in d for k, l in d)


@dataclass(frozen=True, eq=False)
class CartanSubspaces:
    """h_S, z_S, chi_S and gamma_d for one (S, T, d)."""

    S: Subset
    T: Subset
    d: Isometry
    h_S: DomainMatrix
    z_S: DomainMatrix
    h_T: DomainMatrix
    z_T: DomainMatrix
    chi_S: DomainMatrix
    chi_T: DomainMatrix
    gamma: DomainMatrix


def cartan_subspaces(rs: RootSystem, S: Iterable[int], T: Iterable[int], d: Isometry) -> CartanSubspaces:
    """Cartan data of (S, T, d), with the direct sum and projection identities checked."""
    S, T = tuple(sorted(S)), tuple(sorted(T))
    if sorted(i for i, _ in d) != list(S) or sorted(j for _, j in d) != list(T):
        raise NotIsometryError(f"{format_isometry(d)} is not a bijection {format_subset(S)} -> {format_subset(T)}")
    if not is_isometry(rs, d):
        raise NotIsometryError(f"{format_isometry(d)} does not preserve the Killing form")
    data = CartanSubspaces(
        S=S,
        T=T,
        d=tuple(sorted(d)),
        h_S=h_basis(rs, S),
        z_S=z_basis(rs, S),
        h_T=h_basis(rs, T),
        z_T=z_basis(rs, T),
        chi_S=projection(rs, S),
        chi_T=projection(rs, T),
        gamma=gamma_matrix(rs, d),
    )
    assert linalg.rank(linalg.stack(data.h_S, data.z_S)) == rs.rank
    assert linalg.multiply(data.chi_S, data.chi_S) == data.chi_S
    return data


def subsets(rs: RootSystem, size: Optional[int] = None) -> List[Subset]:
    """All subsets of the simple roots ordered by size then lexicographically."""
    sizes = range(rs.rank + 1) if size is None else (size,)
    return [combo for k in sizes for combo in combinations(range(rs.rank), k)]


@dataclass(frozen=True)
class TorusElement:
    """
    An element of the maximal torus, given by its values t_i on the simple roots.

    It acts on the root space of b = sum c_i a_i by prod t_i^c_i and trivially on h.
    """

    values: Tuple
    """Nonzero exact numbers, rational or quadratic irrational"""

    def __post_init__(self):
        values = tuple(sympify(value) for value in self.values)
        if any(value == 0 for value in values):
            raise ValueError("torus values must be nonzero")
        object.__setattr__(self, "values", values)

    @classmethod
    def identity(cls, rank: int) -> TorusElement:
        return cls((1,) * rank)

    @property
    def is_identity(self) -> bool:
        return all(value == 1 for value in self.values)

    @property
    def domain(self):
        return linalg.field_of(self.values)

    def character(self, root: Sequence[int], domain=None):
        """prod t_i^c_i as an element of domain."""
        domain = domain or self.domain
        result = domain.one
        for value, c in zip(self.values, root):
            t = linalg.element(value, domain)
            if c > 0:
                result *= t**c
            elif c < 0:
                result /= t ** (-c)
        return result

    def inverse(self) -> TorusElement:
        return TorusElement(tuple(1 / value for value in self.values))

    def __str__(self) -> str:
        return "(" + ",".join(str(value) for value in self.values) + ")"
