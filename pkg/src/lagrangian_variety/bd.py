"""
Generalized Belavin-Drinfeld triples (S, T, d), the subset S(v, d), and the sequences of
quadruples that index the Weyl coset representatives W^T.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from lagrangian_variety.config import DEFAULTS
from lagrangian_variety.errors import IllegalChoiceError, ParseError
from lagrangian_variety.rootdata import (
    Isometry,
    Root,
    RootSystem,
    Subset,
    cartan_subspaces,
    format_isometry,
    format_subset,
    is_positive,
    parse_isometry,
    parse_subset,
    subsets,
)
from lagrangian_variety.weyl import (
    WeylElement,
    min_double_coset_reps,
    require_min_coset_rep,
    uw_decompose,
    weyl_group,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Triple:
    """A generalized BD triple: subsets S, T of simple roots and an isometry d: S -> T."""

    S: Subset
    T: Subset
    d: Isometry
    """Sorted pairs (i, d(i))"""

    @property
    def mapping(self) -> Dict[int, int]:
        return dict(self.d)

    @property
    def size(self) -> int:
        return len(self.S)

    def apply(self, i: int) -> int:
        return self.mapping[i]

    def apply_root(self, root: Sequence[int]) -> Root:
        """Linear extension of d to roots in [S]."""
        image = [0] * len(root)
        for i, j in self.d:
            image[j] += root[i]
        return tuple(image)

    def restrict(self, S1: Sequence[int]) -> Triple:
        """(S1, d(S1), d|S1)."""
        d1 = tuple((i, j) for i, j in self.d if i in S1)
        return Triple(tuple(sorted(S1)), tuple(sorted(j for _, j in d1)), d1)

    def sort_key(self) -> Tuple:
        return (len(self.S), self.S, self.T, tuple(j for _, j in self.d))

    def __str__(self) -> str:
        return f"({format_subset(self.S)},{format_subset(self.T)},{format_isometry(self.d)})"


def identity_triple(S: Sequence[int]) -> Triple:
    S = tuple(sorted(S))
    return Triple(S, S, tuple((i, i) for i in S))


_TRIPLE = re.compile(r"^\s*(\{[^}]*\})\s*,\s*(\{[^}]*\})\s*,\s*(.*?)\s*$")


def parse_triple(text: str, rs: RootSystem) -> Triple:
    """Parse "{a1},{a2},a1>a2"; the isometry may be "id" when S = T, or "-" when S is empty."""
    match = _TRIPLE.match(text)
    if not match:
        raise ParseError("expected {S},{T},d", text, 0)
    S = parse_subset(match.group(1), rs.rank)
    T = parse_subset(match.group(2), rs.rank)
    body = match.group(3)
    if body == "id":
        if S != T:
            raise ParseError("id needs S = T", text, match.start(3))
        d = tuple((i, i) for i in S)
    else:
        d = parse_isometry(body, rs.rank)
    cartan_subspaces(rs, S, T, d)
    return Triple(S, T, d)


def _degrees(rs: RootSystem, subset: Subset) -> Dict[int, int]:
    return {i: sum(1 for j in subset if j != i and rs.cartan[i][j]) for i in subset}


def isometries(rs: RootSystem, S: Sequence[int], T: Sequence[int]) -> List[Isometry]:
    """All Killing-form preserving bijections S -> T, lexicographic in the images."""
    S, T = tuple(sorted(S)), tuple(sorted(T))
    if len(S) != len(T):
        return []
    degree_S, degree_T = _degrees(rs, S), _degrees(rs, T)
    found = []

    def extend(k: int, images: Tuple[int, ...]) -> None:
        if k == len(S):
            found.append(tuple(zip(S, images)))
            return
        i = S[k]
        for j in T:
            if j in images or degree_S[i] != degree_T[j]:
                continue
            if any(rs.killing[i][S[m]] != rs.killing[j][images[m]] for m in range(k)):
                continue
            if rs.killing[i][i] != rs.killing[j][j]:
                continue
            extend(k + 1, images + (j,))

    extend(0, ())
    return found


def enumerate_triples(rs: RootSystem, nilpotent_only: bool = False) -> List[Triple]:
    """All generalized BD triples in (|S|, S, T, d) order; with nilpotent_only, those with S(1, d) empty."""
    triples = []
    for size in range(rs.rank + 1):
        for S, T in product(subsets(rs, size), repeat=2):
            for d in isometries(rs, S, T):
                triple = Triple(S, T, d)
                if nilpotent_only and not is_nilpotent(rs, triple):
                    continue
                triples.append(triple)
    log.debug(f"{rs.type_spec}: {len(triples)} triples (nilpotent only: {nilpotent_only})")
    return triples


def is_nilpotent(rs: RootSystem, triple: Triple) -> bool:
    """Every a in S leaves S under iteration of d."""
    mapping = triple.mapping
    for start in triple.S:
        current = start
        for _ in range(len(triple.S) + 1):
            if current not in mapping:
                break
            current = mapping[current]
        else:
            return False
    return True


def s_of(rs: RootSystem, triple: Triple, v: WeylElement, cap: int = DEFAULTS.weyl_cap) -> Subset:
    """S(v, d), the largest subset of S invariant under vd, by shrinking S to a fixed point."""
    require_min_coset_rep(rs, v, triple.T, cap)
    return _s_of(rs, triple, v)


def _simple_index(root: Root) -> Optional[int]:
    if sum(root) == 1 and all(c in (0, 1) for c in root):
        return root.index(1)
    return None


def _s_of(rs: RootSystem, triple: Triple, v: WeylElement) -> Subset:
    mapping = triple.mapping
    current = set(triple.S)
    while True:
        kept = {i for i in current if _simple_index(v.apply(rs.simple(mapping[i]))) in current}
        if kept == current:
            return tuple(sorted(current))
        current = kept


@dataclass(frozen=True)
class Quadruple:
    S: Subset
    T: Subset
    d: Isometry
    w: WeylElement


@dataclass(frozen=True)
class QuadrupleSequence:
    """q_0, ..., q_i0 with the limit element v_inf = w_i0 ... w_0 and S_inf = S(v_inf, d)."""

    triple: Triple
    quadruples: Tuple[Quadruple, ...]
    v_inf: WeylElement
    S_inf: Subset

    @property
    def stabilization_index(self) -> int:
        return len(self.quadruples) - 1

    @property
    def choices(self) -> Tuple[WeylElement, ...]:
        return tuple(q.w for q in self.quadruples)


def legal_choices(rs: RootSystem, previous_S: Subset, S: Subset, T: Subset, cap: int = DEFAULTS.weyl_cap):
    """^{S_i}(W_{S_{i-1}})^{T_i}"""
    return min_double_coset_reps(rs, S, T, cap, within=previous_S)


def twisted_triple(rs: RootSystem, triple: Triple, w: WeylElement) -> Triple:
    """
    (S_w, T_w, wd) for w in ^S W^T, a triple inside S.

    S_w = d^-1(T meet w^-1 S) and T_w = S meet w(T).
    """
    S = set(triple.S)
    d = []
    for i, j in triple.d:
        image = _simple_index(w.apply(rs.simple(j)))
        if image is not None and image in S:
            d.append((i, image))
    return Triple(tuple(sorted(i for i, _ in d)), tuple(sorted(j for _, j in d)), tuple(d))


def _step(rs: RootSystem, S: Subset, T: Subset, d: Isometry, w: WeylElement) -> Tuple[Subset, Subset, Isometry]:
    """(S_{i+1}, T_{i+1}, d_{i+1}) from q_i."""
    following = twisted_triple(rs, Triple(S, T, d), w)
    return following.S, following.T, following.d


def run_sequence(
    rs: RootSystem, triple: Triple, choices: Sequence[WeylElement], cap: int = DEFAULTS.weyl_cap
) -> QuadrupleSequence:
    """
    Build the quadruple sequence from choices w_0, w_1, ...

    A short list is padded with the identity. Choices past the stabilization index must be e.
    """
    group = weyl_group(rs, cap)
    previous = rs.simple_roots
    S, T, d = triple.S, triple.T, triple.d
    quadruples = []
    step = 0
    while True:
        w = choices[step] if step < len(choices) else group.identity
        legal = legal_choices(rs, previous, S, T, cap)
        if w not in legal:
            raise IllegalChoiceError(step, str(w), [str(x) for x in legal])
        quadruples.append(Quadruple(S, T, d, w))
        S_next, T_next, d_next = _step(rs, S, T, d, w)
        if S_next == S:
            break
        previous, (S, T, d) = S, (S_next, T_next, d_next)
        step += 1

    for extra, w in enumerate(choices[step + 1 :], start=step + 1):
        if not w.is_identity:
            raise IllegalChoiceError(extra, str(w), ["e"])

    v_inf = group.product(*reversed([q.w for q in quadruples]))
    S_inf = quadruples[-1].S
    assert S_inf == _s_of(rs, triple, v_inf), f"S_inf {S_inf} differs from S(v, d)"
    return QuadrupleSequence(triple, tuple(quadruples), v_inf, S_inf)


def enumerate_sequences(rs: RootSystem, triple: Triple, cap: int = DEFAULTS.weyl_cap) -> Iterator[QuadrupleSequence]:
    """Every legal choice sequence, depth first."""

    def walk(previous: Subset, S: Subset, T: Subset, d: Isometry, chosen: Tuple[WeylElement, ...]):
        for w in legal_choices(rs, previous, S, T, cap):
            S_next, T_next, d_next = _step(rs, S, T, d, w)
            if S_next == S:
                yield run_sequence(rs, triple, chosen + (w,), cap)
            else:
                yield from walk(S, S_next, T_next, d_next, chosen + (w,))

    yield from walk(rs.simple_roots, triple.S, triple.T, triple.d, ())


def sequence_for(rs: RootSystem, triple: Triple, v: WeylElement, cap: int = DEFAULTS.weyl_cap) -> QuadrupleSequence:
    """The unique sequence with v_inf = v, peeling w_i off as the minimal element of W_{S_i} x."""
    require_min_coset_rep(rs, v, triple.T, cap)
    S, T, d = triple.S, triple.T, triple.d
    remaining = v
    choices = []
    while True:
        u, w = uw_decompose(rs, remaining, S, T, cap=cap)
        choices.append(w)
        S_next, T_next, d_next = _step(rs, S, T, d, w)
        remaining = u
        if S_next == S:
            break
        S, T, d = S_next, T_next, d_next
    if not remaining.is_identity:
        raise IllegalChoiceError(len(choices), str(remaining), ["e"])
    sequence = run_sequence(rs, triple, choices, cap)
    assert sequence.v_inf == v
    return sequence


def sigma_strata(
    rs: RootSystem, triple: Triple, v: WeylElement, cap: int = DEFAULTS.weyl_cap
) -> List[Tuple[Root, ...]]:
    """
    Partition of the positive roots outside [S(v, d)] into layers.

    Layer 0 is everything outside [S]; layer j holds the roots of [S] that vd moves out of [S]
    after exactly j steps. vd maps layer j into layer j - 1. Empty when S(v, d) is all of S and S
    covers every positive root.
    """
    S_v = s_of(rs, triple, v, cap)
    outside = [root for root in rs.positive_roots if not rs.in_span(root, S_v)]
    if not outside:
        return []
    layers: List[List[Root]] = [[root for root in rs.positive_roots if not rs.in_span(root, triple.S)]]
    assigned = set(layers[0])
    for root in rs.subsystem(triple.S):
        if rs.in_span(root, S_v):
            continue
        current, steps = root, 0
        while rs.in_span(current, triple.S):
            current = v.apply(triple.apply_root(current))
            steps += 1
            assert steps <= len(rs.positive_roots), f"{root} never leaves [S]"
        while len(layers) <= steps:
            layers.append([])
        layers[steps].append(root)
        assigned.add(root)
    assert assigned == set(outside)
    for j in range(1, len(layers)):
        for root in layers[j]:
            image = v.apply(triple.apply_root(root))
            assert is_positive(image) and image in layers[j - 1], f"vd does not lower {root}"
    while layers and not layers[-1]:
        layers.pop()
    return [tuple(layer) for layer in layers]
