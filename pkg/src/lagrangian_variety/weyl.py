"""
The Weyl group as integer matrices on simple root coordinates.

The same integer matrix gives the action on h in the basis {H_a}, since w(H_a) = H_w(a).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.matrices import DomainMatrix

from lagrangian_variety import linalg
from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import CapExceededError, NotMinimalError, ParseError
from lagrangian_variety.rootdata import Root, RootSystem, Subset, is_positive

log = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


def _identity(r: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))


def _mul(A: Matrix, B: Matrix) -> Matrix:
    n = len(B)
    return tuple(tuple(sum(row[k] * B[k][j] for k in range(n)) for j in range(len(B[0]))) for row in A)


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element with its lexicographically first reduced word."""

    matrix: Matrix
    """Action on simple root coordinates (column vectors)"""
    word: Tuple[int, ...] = field(compare=False)
    """Reduced word; (0, 1) is s1 s2"""

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def apply(self, root: Sequence[int]) -> Root:
        return tuple(sum(row[k] * root[k] for k in range(len(root))) for row in self.matrix)

    @cached_property
    def h_matrix(self) -> DomainMatrix:
        """Action on h in the H_a basis."""
        return linalg.matrix(self.matrix)

    def __str__(self) -> str:
        return format_word(self.word)


def format_word(word: Iterable[int]) -> str:
    word = tuple(word)
    if not word:
        return "e"
    return "".join(f"s{i + 1}" for i in word)


def parse_word(text: str, rank: int) -> Tuple[int, ...]:
    """Parse "s1s2" (or "e") into 0-based indices."""
    body = text.strip()
    if body in ("e", "1", ""):
        return ()
    word = []
    for match in re.finditer(r"s([1-9][0-9]*)|.", body):
        if match.group(1) is None:
            raise ParseError("expected s<index>", text, match.start())
        index = int(match.group(1)) - 1
        if index >= rank:
            raise ParseError(f"no simple reflection s{index + 1} in rank {rank}", text, match.start())
        word.append(index)
    return tuple(word)


class WeylGroup:
    """All elements of W(rs), enumerated breadth first from the identity."""

    def __init__(self, rs: RootSystem, cap: int = DEFAULTS.weyl_cap):
        self.rs = rs
        r = rs.rank
        self.generators: Tuple[Matrix, ...] = tuple(
            tuple(
                tuple((1 if k == j else 0) - (rs.cartan[i][j] if i == k else 0) for j in range(r)) for k in range(r)
            )
            for i in range(r)
        )
        identity = WeylElement(_identity(r), ())
        self._by_matrix: Dict[Matrix, WeylElement] = {identity.matrix: identity}
        layer = [identity]
        while layer:
            nxt = []
            for w in layer:
                for i, s in enumerate(self.generators):
                    m = _mul(w.matrix, s)
                    if m in self._by_matrix:
                        continue
                    if len(self._by_matrix) >= cap:
                        raise CapExceededError("Weyl group order", len(self._by_matrix) + 1, cap)
                    element = WeylElement(m, w.word + (i,))
                    self._by_matrix[m] = element
                    nxt.append(element)
            layer = nxt
        self.elements: Tuple[WeylElement, ...] = tuple(sorted(self._by_matrix.values(), key=sort_key))
        log.info(f"enumerated W({rs.type_spec}): {len(self.elements)} elements")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, w: WeylElement) -> bool:
        return w.matrix in self._by_matrix

    @property
    def identity(self) -> WeylElement:
        return self.elements[0]

    @cached_property
    def longest(self) -> WeylElement:
        return self.elements[-1]

    def lookup(self, matrix: Matrix) -> WeylElement:
        return self._by_matrix[matrix]

    def element(self, word: Iterable[int] | str) -> WeylElement:
        """Element of a word, given as indices or as a string like "s1s2"."""
        if isinstance(word, str):
            word = parse_word(word, self.rs.rank)
        matrix = _identity(self.rs.rank)
        for i in word:
            matrix = _mul(matrix, self.generators[i])
        return self._by_matrix[matrix]

    def reflection(self, i: int) -> WeylElement:
        return self._by_matrix[self.generators[i]]

    def product(self, *elements: WeylElement) -> WeylElement:
        matrix = _identity(self.rs.rank)
        for w in elements:
            matrix = _mul(matrix, w.matrix)
        return self._by_matrix[matrix]

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(reversed(w.word))

    def conjugate(self, x: WeylElement, w: WeylElement) -> WeylElement:
        """x w x^-1"""
        return self.product(x, w, self.inverse(x))

    def inversions(self, w: WeylElement) -> int:
        """#{a > 0 : w(a) < 0}, equal to the length."""
        return sum(1 for root in self.rs.positive_roots if not is_positive(w.apply(root)))

    def parabolic(self, J: Iterable[int]) -> List[WeylElement]:
        """W_J; every reduced word of an element of W_J uses only letters in J."""
        J = set(J)
        return [w for w in self.elements if set(w.word) <= J]

    def sends_positive(self, w: WeylElement, subset: Iterable[int]) -> bool:
        """Whether w(a_i) > 0 for every i in subset."""
        return all(is_positive(w.apply(self.rs.simple(i))) for i in subset)


def sort_key(w: WeylElement) -> Tuple[int, Tuple[int, ...]]:
    return (w.length, w.word)


_GROUPS: Dict[Tuple[int, int], WeylGroup] = {}


def weyl_group(rs: RootSystem, cap: int = DEFAULTS.weyl_cap) -> WeylGroup:
    """Cached WeylGroup per root system."""
    key = (id(rs), cap)
    group = _GROUPS.get(key)
    if group is None or group.rs is not rs:
        group = _GROUPS[key] = WeylGroup(rs, cap)
    return group


def enumerate_weyl(rs: RootSystem, cap: int = DEFAULTS.weyl_cap) -> Tuple[WeylElement, ...]:
    """All of W sorted by (length, word)."""
    return weyl_group(rs, cap).elements


def min_coset_reps(rs: RootSystem, T: Iterable[int], cap: int = DEFAULTS.weyl_cap) -> List[WeylElement]:
    """W^T: minimal length representatives of W / W_T, the w with w(a) > 0 for a in T."""
    group = weyl_group(rs, cap)
    T = tuple(T)
    return [w for w in group if group.sends_positive(w, T)]


def min_double_coset_reps(
    rs: RootSystem, S: Iterable[int], T: Iterable[int], cap: int = DEFAULTS.weyl_cap, within: Optional[Subset] = None
) -> List[WeylElement]:
    """^S W^T, optionally restricted to the parabolic subgroup W_within."""
    group = weyl_group(rs, cap)
    S, T = tuple(S), tuple(T)
    pool = group.elements if within is None else group.parabolic(within)
    return [w for w in pool if group.sends_positive(w, T) and group.sends_positive(group.inverse(w), S)]


def is_min_coset_rep(rs: RootSystem, v: WeylElement, T: Iterable[int], cap: int = DEFAULTS.weyl_cap) -> bool:
    return weyl_group(rs, cap).sends_positive(v, T)


def require_min_coset_rep(rs: RootSystem, v: WeylElement, T: Iterable[int], cap: int = DEFAULTS.weyl_cap) -> None:
    T = tuple(T)
    if not is_min_coset_rep(rs, v, T, cap):
        raise NotMinimalError(f"{v} is not in W^T for T = {{{','.join(f'a{i + 1}' for i in T)}}}")


def uw_decompose(
    rs: RootSystem,
    v: WeylElement,
    S: Iterable[int],
    T: Iterable[int],
    d=None,
    cap: int = DEFAULTS.weyl_cap,
) -> Tuple[WeylElement, WeylElement]:
    """
    Split v in W^T as v = u w with w in ^S W^T and u in W_S, l(v) = l(u) + l(w).

    w is found by stripping simple reflections of S from the left while that shortens it.
    """
    group = weyl_group(rs, cap)
    S, T = tuple(S), tuple(T)
    require_min_coset_rep(rs, v, T, cap)
    w = v
    while True:
        inverse = group.inverse(w)
        descent = next((i for i in S if not is_positive(inverse.apply(rs.simple(i)))), None)
        if descent is None:
            break
        w = group.product(group.reflection(descent), w)
    u = group.product(v, group.inverse(w))
    assert u.length + w.length == v.length
    assert set(u.word) <= set(S)
    return u, w


def h_minus_w_dim(w: WeylElement) -> int:
    """dim h^{-w} = dim ker(w + 1) on h."""
    r = len(w.matrix)
    shifted = linalg.matrix([[w.matrix[i][j] + (1 if i == j else 0) for j in range(r)] for i in range(r)])
    return r - linalg.rank(shifted)
