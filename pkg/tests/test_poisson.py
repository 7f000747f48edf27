import pytest
from sympy.polys.domains import GF

from lagrangian_variety import linalg
from lagrangian_variety.bd import Triple, enumerate_triples
from lagrangian_variety.errors import OrbitMismatchError
from lagrangian_variety.lagrlin import h_delta, twisted_graphs
from lagrangian_variety.poisson import (
    CERTIFIED,
    UNKNOWN,
    Pi0Calculator,
    conjugacy_correction,
    conjugacy_rank,
    double_bruhat_rank,
    flag_labels,
    flag_table,
    nonempty_check,
    opposite_bruhat_permutation,
    permutation,
    pi0_rank,
    rank_correction,
    regular_rank,
    x_space,
)
from lagrangian_variety.strata import OrbitLabel, torus_sample
from lagrangian_variety.weyl import h_minus_w_dim, min_coset_reps, weyl_group


def test_conjugacy_ranks_on_sl2(A1):
    group = weyl_group(A1)

    identity = conjugacy_rank(2, group.identity)
    s = conjugacy_rank(2, group.element("s1"))

    assert (identity.rank, identity.open_leaf, identity.empty) == (2, True, False)
    assert (s.rank, s.open_leaf, s.empty) == (0, False, False)


def test_conjugacy_rank_goes_negative_on_small_classes(A2):
    longest = weyl_group(A2).longest

    result = conjugacy_rank(2, longest)

    assert result.rank == 2 - 3 - 1
    assert result.empty


def test_conjugacy_rank_rejects_negative_dimension(A1):
    with pytest.raises(ValueError):
        conjugacy_rank(-1, weyl_group(A1).identity)


@pytest.mark.parametrize("fixture", ["A1", "A2", "B2"])
def test_conjugacy_correction_is_minus_one_eigenspace(fixture, request):
    rs = request.getfixturevalue(fixture)
    for w in weyl_group(rs):
        assert conjugacy_correction(rs, w) == h_minus_w_dim(w)


def test_double_bruhat_rank(A1):
    group = weyl_group(A1)
    e, s = group.identity, group.element("s1")

    assert double_bruhat_rank(A1, s, s, e) == (2, 2)
    assert double_bruhat_rank(A1, s, e, s) == (0, 0)
    assert double_bruhat_rank(A1, e, s, e) == (0, 1)


def test_x_space_has_dimension_rank(A2):
    for triple in enumerate_triples(A2):
        for v in min_coset_reps(A2, triple.T):
            assert x_space(A2, triple, v).dim == 2


def test_permutation_of_words(A2):
    group = weyl_group(A2)

    assert permutation(A2, group.identity) == (0, 1, 2)
    assert permutation(A2, group.element("s1")) == (1, 0, 2)
    assert permutation(A2, group.longest) == (2, 1, 0)


def test_opposite_bruhat_permutation():
    F = GF(7)
    one, zero = F.one, F.zero

    assert opposite_bruhat_permutation([[one, zero], [zero, one]], F) == (0, 1)
    assert opposite_bruhat_permutation([[zero, one], [one, zero]], F) == (1, 0)
    assert opposite_bruhat_permutation([[one, one], [one, F(2)]], F) == (1, 0)


def test_nonempty_check_certifies_big_cell(A1):
    group = weyl_group(A1)
    s = group.element("s1")

    assert nonempty_check(A1, s, s, group.identity, samples=16) == CERTIFIED


def test_nonempty_check_certifies_identity_coset(A2):
    e = weyl_group(A2).identity

    assert nonempty_check(A2, e, e, e, samples=0) == CERTIFIED


def test_nonempty_check_certifies_cells_holding_the_permutation_matrix(A2):
    group = weyl_group(A2)
    for u in group:
        for w in group:
            v = group.product(u, w)
            assert nonempty_check(A2, u, v, w, samples=0) == CERTIFIED
            assert double_bruhat_rank(A2, u, v, w)[0] == u.length + v.length - w.length


def test_nonempty_check_only_handles_type_a(B2, A1xA1):
    for rs in (B2, A1xA1):
        e = weyl_group(rs).identity
        assert nonempty_check(rs, e, e, e) == UNKNOWN


def test_flag_table_on_sl2(A1):
    rows = flag_table(A1, samples=32)

    assert len(rows) == 8
    for row in rows:
        assert row.dim - row.rank == row.correction
        if row.nonempty == CERTIFIED:
            assert row.rank % 2 == 0
            assert row.rank <= row.dim
    big = [row for row in rows if str(row.u) == str(row.v) == "s1" and row.w.is_identity]
    assert big[0].nonempty == CERTIFIED
    closed = [row for row in rows if row.u.is_identity and row.v.is_identity and row.w.is_identity]
    assert closed[0].nonempty == CERTIFIED
    assert sum(row.nonempty == CERTIFIED for row in rows) >= 4


def test_flag_table_agrees_with_general_ranks(A1):
    group = weyl_group(A1)
    s = group.element("s1")

    (row,) = flag_table(A1, [(s, s, group.identity)], samples=16, general=True)

    assert row.general_rank == row.rank == 2
    assert row.as_dict()["generalRank"] == 2


def test_flag_labels_share_the_closed_orbit(A1):
    group = weyl_group(A1)
    s = group.element("s1")

    O, O_prime = flag_labels(A1, s, s, group.identity)

    assert (O.kind, O_prime.kind) == ("GDelta", "BB")
    assert O.triple == O_prime.triple == Triple((), (), ())


def test_rank_on_open_gdelta_orbit_meet_big_cell(A1):
    group = weyl_group(A1)
    s = group.element("s1")
    O, O_prime = flag_labels(A1, s, s, group.identity)

    result = Pi0Calculator(A1).rank(O, O_prime)

    assert (result.dim, result.rank, result.correction) == (2, 2, 0)
    assert result.conditional


def test_rank_rejects_swapped_labels(A1):
    group = weyl_group(A1)
    O, O_prime = flag_labels(A1, group.identity, group.identity, group.identity)

    with pytest.raises(OrbitMismatchError):
        Pi0Calculator(A1).rank(O_prime, O)


def test_rank_rejects_labels_from_different_orbits(A1):
    triple = Triple((0,), (0,), ((0, 0),))
    (V,) = twisted_graphs(A1, triple.S, triple.T, triple.d)
    O = OrbitLabel("GDelta", triple, V)
    O_prime = OrbitLabel("BB", Triple((), (), ()), h_delta(A1))

    with pytest.raises(OrbitMismatchError):
        Pi0Calculator(A1).rank(O, O_prime)


def test_regular_rank_is_independent_of_the_torus(A1):
    group = weyl_group(A1)
    triple = Triple((0,), (0,), ((0, 0),))
    (V,) = twisted_graphs(A1, triple.S, triple.T, triple.d)
    e = group.identity

    rank = regular_rank(A1, triple, V, e, e, e, torus_sample(1, samples=2))

    assert rank % 2 == 0


def test_rank_correction_on_the_diagonal(A2):
    group = weyl_group(A2)
    X = x_space(A2, Triple((), (), ()), group.identity)

    assert rank_correction(A2, group.identity, group.identity, X) == 0
    assert rank_correction(A2, group.longest, group.identity, X) == h_minus_w_dim(group.longest)


def test_pi0_rank_of_the_closed_orbit(A1):
    e = weyl_group(A1).identity
    O, O_prime = flag_labels(A1, e, e, e)

    result = pi0_rank(A1, O, O_prime)

    assert (result.dim, result.rank) == (0, 0)
    assert result.nonempty == UNKNOWN


def test_weyl_lifts_differ_on_sl3(A2):
    s = weyl_group(A2).element("s1")

    standard = Pi0Calculator(A2).model.weyl_lift(s)
    alternative = Pi0Calculator(A2, inverse_lifts=True).model.weyl_lift(s)

    assert not linalg.equal(standard, alternative)


def test_flag_ranks_do_not_depend_on_the_weyl_lift(A2):
    group = weyl_group(A2)
    standard, alternative = Pi0Calculator(A2), Pi0Calculator(A2, inverse_lifts=True)
    for u in group:
        for v in group:
            for w in group:
                O, O_prime = flag_labels(A2, u, v, w)
                assert alternative.rank(O, O_prime) == standard.rank(O, O_prime)


def test_orbit_dimensions_do_not_depend_on_the_weyl_lift(A2):
    standard, alternative = Pi0Calculator(A2), Pi0Calculator(A2, inverse_lifts=True)
    (m,) = torus_sample(A2.rank, samples=1)
    for triple in enumerate_triples(A2):
        for V in twisted_graphs(A2, triple.S, triple.T, triple.d):
            for v in min_coset_reps(A2, triple.T):
                for label in (OrbitLabel("GDelta", triple, V, v=v), OrbitLabel("GDelta", triple, V, v=v, m=m)):
                    assert alternative.gdelta_dim(label) == standard.gdelta_dim(label)
                bb = OrbitLabel("BB", triple, V, w=v, v=v)
                assert alternative.bb_dim(bb) == standard.bb_dim(bb)
