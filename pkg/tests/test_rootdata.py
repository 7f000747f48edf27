from fractions import Fraction

import pytest
from sympy import Matrix, Rational

from lagrangian_variety import linalg
from lagrangian_variety.errors import CapExceededError, NotIsometryError, ParseError
from lagrangian_variety.rootdata import (
    TorusElement,
    build_root_system,
    cartan_subspaces,
    format_isometry,
    format_subset,
    height,
    killing_gram,
    oracle_size,
    parse_isometry,
    parse_subset,
    parse_type,
    projection,
    root_strings,
    z_basis,
)


@pytest.mark.parametrize(
    "spec, positive, dimension",
    [("A1", 1, 3), ("A2", 3, 8), ("B2", 4, 10), ("G2", 6, 14), ("A3", 6, 15), ("A1xA1", 2, 6)],
)
def test_root_counts(spec, positive, dimension):
    rs = build_root_system(spec)

    assert len(rs.positive_roots) == positive
    assert rs.dimension == dimension


def rs_killing(rs):
    return [list(row) for row in rs.killing]


def test_killing_form_of_sl3(A2):
    assert rs_killing(A2) == [[Fraction(1, 3), Fraction(-1, 6)], [Fraction(-1, 6), Fraction(1, 3)]]


def test_killing_form_of_sl2(A1):
    assert rs_killing(A1) == [[Fraction(1, 2)]]


def test_product_type_is_block_diagonal(A1xA1):
    assert A1xA1.killing[0][1] == 0
    assert A1xA1.cartan == ((2, 0), (0, 2))


def test_b2_highest_root(B2):
    assert B2.positive_roots[-1] == (1, 2)


@pytest.mark.parametrize("spec, size", [("A1", 2), ("A2", 2), ("B2", 3), ("A3", 3), ("B3", 3), ("G2", 4)])
def test_oracle_size(spec, size):
    assert oracle_size(build_root_system(spec)) == size


def test_parse_type_reports_position():
    with pytest.raises(ParseError) as info:
        parse_type("A1xQ2")

    assert info.value.position == 3


@pytest.mark.parametrize("spec", ["", "A0", "B1", "E5", "G3", "a2"])
def test_parse_type_rejects(spec):
    with pytest.raises(ParseError):
        parse_type(spec)


def test_rank_cap():
    with pytest.raises(CapExceededError):
        build_root_system("A9")
    assert build_root_system("A9", rank_cap=9).rank == 9


def test_subset_and_isometry_strings():
    assert parse_subset("{a1,a2}", 2) == (0, 1)
    assert parse_subset("{}", 2) == ()
    assert format_subset((1, 0)) == "{a1,a2}"
    assert parse_isometry("a2>a1,a1>a2", 2) == ((0, 1), (1, 0))
    assert format_isometry(()) == "-"


def test_parse_subset_rejects_unknown_root():
    with pytest.raises(ParseError):
        parse_subset("{a3}", 2)


def test_cartan_subspaces_sl3(A2):
    data = cartan_subspaces(A2, (0,), (1,), ((0, 1),))

    assert linalg.dim(data.z_S) == 1
    assert linalg.is_zero(linalg.multiply(data.chi_S, data.z_S.transpose()))


def test_long_and_short_roots_are_not_isometric(B2):
    with pytest.raises(NotIsometryError):
        cartan_subspaces(B2, (0,), (1,), ((0, 1),))


def test_projection_is_identity_on_h_S(A2):
    chi = projection(A2, (0, 1))

    assert linalg.equal(chi, linalg.eye(2))
    assert linalg.dim(z_basis(A2, (0, 1))) == 0


def test_torus_character():
    m = TorusElement((2, 3))

    assert m.character((1, 1)) == linalg.element(6)
    assert m.character((-1, 0)) == linalg.element(Fraction(1, 2))
    assert TorusElement.identity(2).is_identity


def test_torus_rejects_zero():
    with pytest.raises(ValueError):
        TorusElement((0, 1))


def test_killing_gram_is_exact(A2):
    third, sixth = Rational(1, 3), Rational(-1, 6)

    assert killing_gram(A2).to_Matrix() == Matrix([[third, sixth], [sixth, third]])


@pytest.mark.parametrize("spec, length", [("A1", 2), ("A2", 2), ("B2", 3), ("G2", 4)])
def test_root_strings(spec, length):
    assert root_strings(build_root_system(spec)) == length


def test_roots_and_pairings(A2, B2):
    assert A2.is_root((1, 1)) and A2.is_root((-1, -1))
    assert not A2.is_root((1, -1))
    assert A2.pairing((1, 1), 0) == 1
    assert B2.pairing(B2.simple(0), 0) == 2
    assert height(B2.positive_roots[-1]) == 3
    assert A2.root_index((1, 1)) == 2
