import pytest

from lagrangian_variety import linalg
from lagrangian_variety.bd import enumerate_triples
from lagrangian_variety.errors import DimensionMismatchError, NotLagrangianError, NotSplitError
from lagrangian_variety.lagrlin import (
    QuadraticSpace,
    canonical_lagrangians,
    h_delta,
    h_minus_delta,
    hh_space,
    is_lagrangian,
    isotropic_lines,
    lagrangian_components,
    lagrangian_grassmannian_dim,
    named_lagrangian,
    parity,
    same_component,
    sign_patterns,
    twisted_graphs,
    witt_extension,
    zz_space,
)
from lagrangian_variety.rootdata import build_root_system


@pytest.mark.parametrize("dim, expected", [(0, 0), (2, 0), (4, 1), (6, 3), (3, 1), (5, 3)])
def test_grassmannian_dimension(dim, expected):
    assert lagrangian_grassmannian_dim(dim) == expected


@pytest.mark.parametrize("dim, expected", [(0, 1), (1, 1), (2, 2), (4, 2), (5, 1)])
def test_grassmannian_components(dim, expected):
    assert lagrangian_components(dim) == expected


def test_diagonals_are_lagrangian_in_opposite_components(A2):
    diagonal, antidiagonal = h_delta(A2), h_minus_delta(A2)

    assert is_lagrangian(diagonal) and is_lagrangian(antidiagonal)
    # they meet in 0 inside a space of dimension 4, so dim - dim(meet) = 2 is even
    assert same_component(diagonal, antidiagonal)


def test_diagonals_of_sl2_are_opposite(A1):
    assert parity(h_minus_delta(A1), h_delta(A1)) == 1


def test_isotropic_lines_of_sl2(A1):
    space = zz_space(A1, (), ())

    lines = isotropic_lines(space)

    expected = [h_delta(A1).basis, h_minus_delta(A1).basis]
    for line in lines:
        assert any(linalg.same_space(line.basis, rows) for rows in expected)


def test_anisotropic_plane_is_not_split():
    space = QuadraticSpace(linalg.diagonal([1, 1]), "euclidean")

    with pytest.raises(NotSplitError):
        isotropic_lines(space)


def test_isotropic_lines_need_a_plane(A2):
    with pytest.raises(DimensionMismatchError):
        isotropic_lines(hh_space(A2))


def test_witt_extension_is_an_isometry(A2):
    K = A2.killing_matrix
    source = linalg.matrix([[1, 0]])
    target = linalg.matrix([[0, 1]])

    g = witt_extension(K, source, target)

    assert linalg.image(g, source) == target
    assert linalg.multiply(g.transpose(), K, g) == K


@pytest.mark.parametrize("spec", ["A1", "A2", "B2", "A1xA1"])
def test_twisted_graphs_have_opposite_parity(spec, request):
    rs = request.getfixturevalue(spec)
    for triple in enumerate_triples(rs):
        graphs = twisted_graphs(rs, triple.S, triple.T, triple.d)
        if len(graphs) == 1:
            assert graphs[0].dim == 0 and len(triple.S) == rs.rank
            continue
        plus, minus = graphs
        assert is_lagrangian(plus) and is_lagrangian(minus)
        assert parity(minus, plus) == 1


def test_canonical_lagrangians_are_distinct(A2):
    found = canonical_lagrangians(A2, (), (), ())

    assert len(found) >= 2
    for i, V in enumerate(found):
        assert is_lagrangian(V)
        assert not any(linalg.same_space(V.basis, W.basis) for W in found[:i])


def test_named_lagrangian(A2):
    assert named_lagrangian(A2, (0, 1), (0, 1), ((0, 0), (1, 1)), "zero").dim == 0
    assert named_lagrangian(A2, (0,), (0,), ((0, 0),), "antidiag").dim == 1
    with pytest.raises(NotLagrangianError):
        named_lagrangian(A2, (), (), (), "zero")
    with pytest.raises(ValueError):
        named_lagrangian(A2, (), (), (), "sideways")


@pytest.mark.parametrize("spec", ["A1", "A2", "A3"])
def test_coordinate_lagrangians_fall_into_two_components(spec):
    patterns = sign_patterns(build_root_system(spec), (), (), ())

    for V1 in patterns:
        for V2 in patterns:
            flips = sum(a != b for a, b in zip(V1.name, V2.name))
            assert same_component(V1, V2) == (flips % 2 == 0)
    classes = {frozenset(V2.name for V2 in patterns if same_component(V1, V2)) for V1 in patterns}
    assert len(classes) == 2
    assert sum(len(members) for members in classes) == len(patterns)
