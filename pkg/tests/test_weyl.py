import pytest

from lagrangian_variety.errors import CapExceededError, NotMinimalError, ParseError
from lagrangian_variety.rootdata import build_root_system, subsets
from lagrangian_variety.weyl import (
    enumerate_weyl,
    h_minus_w_dim,
    min_coset_reps,
    min_double_coset_reps,
    parse_word,
    require_min_coset_rep,
    uw_decompose,
    weyl_group,
)


@pytest.mark.parametrize("spec, order", [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("A1xA1", 4)])
def test_weyl_order(spec, order):
    rs = build_root_system(spec)
    group = weyl_group(rs)

    assert len(group) == order
    assert group.longest.length == len(rs.positive_roots)


def test_lengths_match_inversions(B2):
    group = weyl_group(B2)

    assert all(group.inversions(w) == w.length for w in group)


def test_words(A2):
    group = weyl_group(A2)
    w = group.element("s1s2")

    assert str(w) == "s1s2"
    assert str(group.inverse(w)) == "s2s1"
    assert group.product(w, group.inverse(w)).is_identity
    assert group.element("s1s2s1") == group.element("s2s1s2")
    assert str(group.identity) == "e"


def test_parse_word_rejects_letters_outside_rank():
    with pytest.raises(ParseError):
        parse_word("s1s3", 2)
    assert parse_word("e", 2) == ()


def test_weyl_cap():
    with pytest.raises(CapExceededError):
        weyl_group(build_root_system("A3"), cap=10)


def test_min_coset_reps(A2):
    reps = min_coset_reps(A2, (0,))

    assert sorted(str(w) for w in reps) == ["e", "s1s2", "s2"]
    assert len(min_coset_reps(A2, ())) == 6
    assert [str(w) for w in min_coset_reps(A2, (0, 1))] == ["e"]


def test_double_coset_reps(A2):
    reps = min_double_coset_reps(A2, (0,), (0,))

    assert sorted(str(w) for w in reps) == ["e", "s2"]


def test_require_min_coset_rep(A2):
    with pytest.raises(NotMinimalError):
        require_min_coset_rep(A2, weyl_group(A2).element("s1"), (0,))


def test_uw_decompose(A2):
    group = weyl_group(A2)
    v = group.element("s1s2")

    u, w = uw_decompose(A2, v, (0,), ())

    assert group.product(u, w) == v
    assert str(u) == "s1" and str(w) == "s2"


@pytest.mark.parametrize("spec, word, expected", [("A1", "s1", 1), ("A2", "s1s2s1", 1), ("B2", "s1s2s1s2", 2)])
def test_h_minus_w_dim(spec, word, expected):
    group = weyl_group(build_root_system(spec))

    assert h_minus_w_dim(group.element(word)) == expected
    assert h_minus_w_dim(group.identity) == 0


def test_enumeration_is_sorted_by_length(A2):
    elements = enumerate_weyl(A2)

    assert [str(w) for w in elements[:3]] == ["e", "s1", "s2"]
    assert [w.length for w in elements] == sorted(w.length for w in elements)


@pytest.mark.parametrize("spec", ["A2", "B2", "G2", "A3", "A1xA1"])
def test_coset_representatives_times_parabolic_is_the_group(spec):
    rs = build_root_system(spec)
    group = weyl_group(rs)
    for T in subsets(rs):
        assert len(min_coset_reps(rs, T)) * len(group.parabolic(T)) == len(group)


@pytest.mark.parametrize("spec", ["A2", "B2", "G2", "A3"])
def test_h_minus_w_dim_is_a_class_function(spec):
    group = weyl_group(build_root_system(spec))
    for w in group:
        assert {h_minus_w_dim(group.conjugate(x, w)) for x in group} == {h_minus_w_dim(w)}
