import pytest

from lagrangian_variety.bd import (
    Triple,
    enumerate_sequences,
    enumerate_triples,
    identity_triple,
    is_nilpotent,
    isometries,
    parse_triple,
    run_sequence,
    s_of,
    sequence_for,
    sigma_strata,
    twisted_triple,
)
from lagrangian_variety.errors import IllegalChoiceError, NotIsometryError, ParseError
from lagrangian_variety.rootdata import build_root_system
from lagrangian_variety.weyl import is_min_coset_rep, min_coset_reps, min_double_coset_reps, weyl_group


@pytest.mark.parametrize("spec, count", [("A1", 2), ("A2", 7), ("B2", 4), ("A1xA1", 7)])
def test_triple_counts(spec, count):
    assert len(enumerate_triples(build_root_system(spec))) == count


def test_nilpotent_triples_of_sl3(A2):
    triples = enumerate_triples(A2, nilpotent_only=True)

    assert [str(t) for t in triples] == ["({},{},-)", "({a1},{a2},a1>a2)", "({a2},{a1},a2>a1)"]


def test_nilpotent_means_s_of_identity_is_empty(A2):
    identity = weyl_group(A2).identity
    for triple in enumerate_triples(A2):
        assert is_nilpotent(A2, triple) == (s_of(A2, triple, identity) == ())


def test_g2_has_no_diagram_swap():
    G2 = build_root_system("G2")

    assert isometries(G2, (0, 1), (0, 1)) == [((0, 0), (1, 1))]


def test_a2_diagram_swap(A2):
    assert isometries(A2, (0, 1), (0, 1)) == [((0, 0), (1, 1)), ((0, 1), (1, 0))]


def test_parse_triple(A2):
    assert parse_triple("{a1},{a1},id", A2) == identity_triple((0,))
    assert parse_triple("{},{},-", A2) == Triple((), (), ())
    assert parse_triple("{a1},{a2},a1>a2", A2) == Triple((0,), (1,), ((0, 1),))
    assert str(identity_triple((0,))) == "({a1},{a1},a1>a1)"


def test_parse_triple_rejects(A2, B2):
    with pytest.raises(ParseError):
        parse_triple("{a1},{a2},id", A2)
    with pytest.raises(ParseError):
        parse_triple("a1", A2)
    with pytest.raises(NotIsometryError):
        parse_triple("{a1},{a2},a1>a2", B2)


def test_sigma_strata(A2):
    triple = Triple((0,), (1,), ((0, 1),))

    layers = sigma_strata(A2, triple, weyl_group(A2).identity)

    assert layers == [((0, 1), (1, 1)), ((1, 0),)]


def test_sigma_strata_empty_when_nothing_moves(A2):
    triple = identity_triple((0, 1))

    assert sigma_strata(A2, triple, weyl_group(A2).identity) == []


def test_illegal_choice_names_legal_words(A2):
    group = weyl_group(A2)

    with pytest.raises(IllegalChoiceError) as info:
        run_sequence(A2, identity_triple((0,)), [group.element("s1")])

    assert info.value.step == 0
    assert "s2" in info.value.legal


def test_short_choice_list_is_padded(A2):
    sequence = run_sequence(A2, identity_triple((0,)), [])

    assert sequence.v_inf.is_identity
    assert sequence.S_inf == (0,)


@pytest.mark.parametrize("spec", ["A2", "B2", "A1xA1"])
def test_sequences_biject_onto_coset_reps(spec):
    rs = build_root_system(spec)
    for triple in enumerate_triples(rs):
        limits = [str(sequence.v_inf) for sequence in enumerate_sequences(rs, triple)]
        reps = [str(v) for v in min_coset_reps(rs, triple.T)]

        assert sorted(limits) == sorted(reps)
        for v in min_coset_reps(rs, triple.T):
            sequence = sequence_for(rs, triple, v)
            assert run_sequence(rs, triple, sequence.choices).v_inf == v


@pytest.mark.slow
def test_sequences_biject_onto_coset_reps_a3():
    rs = build_root_system("A3")
    for triple in enumerate_triples(rs):
        limits = sorted(str(sequence.v_inf) for sequence in enumerate_sequences(rs, triple))
        assert limits == sorted(str(v) for v in min_coset_reps(rs, triple.T))


@pytest.mark.parametrize("spec", ["A2", "B2", "A3"])
def test_s_of_factors_through_the_twisted_triple(spec):
    rs = build_root_system(spec)
    group = weyl_group(rs)
    for triple in enumerate_triples(rs):
        for w in min_double_coset_reps(rs, triple.S, triple.T):
            twisted = twisted_triple(rs, triple, w)
            assert set(twisted.S) <= set(triple.S) and set(twisted.T) <= set(triple.S)
            for u in group.parabolic(triple.S):
                if is_min_coset_rep(rs, u, twisted.T):
                    assert s_of(rs, triple, group.product(u, w)) == s_of(rs, twisted, u)


def test_twisted_triple_of_the_identity(A2):
    triple = Triple((0,), (1,), ((0, 1),))

    assert twisted_triple(A2, triple, weyl_group(A2).identity) == Triple((), (), ())
    assert twisted_triple(A2, Triple((0, 1), (0, 1), ((0, 1), (1, 0))), weyl_group(A2).identity).d == ((0, 1), (1, 0))
