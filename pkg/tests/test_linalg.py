from sympy import sqrt
from sympy.polys.domains import QQ

from lagrangian_variety import linalg


def test_kernel_spans_solutions():
    M = linalg.matrix([[1, 1, 0], [0, 1, 1]])
    K = linalg.kernel(M)

    assert linalg.dim(K) == 1
    assert linalg.is_zero(linalg.multiply(M, K.transpose()))


def test_kernel_of_empty_matrix_is_everything():
    assert linalg.same_space(linalg.kernel(linalg.zeros(0, 3)), linalg.eye(3))


def test_intersect_of_planes_is_a_line():
    A = linalg.matrix([[1, 0, 0], [0, 1, 0]])
    B = linalg.matrix([[0, 1, 0], [0, 0, 1]])

    meet = linalg.intersect(A, B)

    assert linalg.same_space(meet, linalg.matrix([[0, 1, 0]]))


def test_intersect_with_empty_is_empty():
    assert linalg.intersect(linalg.eye(2), linalg.zeros(0, 2)).shape == (0, 2)


def test_contains_and_same_space():
    A = linalg.matrix([[1, 2], [0, 1]])

    assert linalg.contains(A, linalg.matrix([[3, 7]]))
    assert linalg.same_space(A, linalg.eye(2))
    assert not linalg.same_space(linalg.matrix([[1, 0]]), linalg.matrix([[0, 1]]))


def test_orthogonal_complement():
    gram = linalg.diagonal([1, -1])
    line = linalg.matrix([[1, 1]])

    assert linalg.is_isotropic(line, gram)
    assert linalg.same_space(linalg.orthogonal(line, gram), line)


def test_coordinates_solve_in_a_basis():
    basis = linalg.matrix([[1, 1], [1, -1]])

    coordinates = linalg.coordinates(basis, linalg.matrix([[3, 1]]))

    assert linalg.to_sympy(coordinates) == [[2, 1]]


def test_quadratic_field_is_picked_up():
    domain = linalg.field_of([1, sqrt(2)])

    assert domain != QQ
    M = linalg.matrix([[sqrt(2), 1]], domain=domain)
    assert linalg.rank(linalg.stack(M, linalg.scale(M, sqrt(2)))) == 1


def test_block_diag_and_image():
    A = linalg.matrix([[0, 1], [1, 0]])
    B = linalg.matrix([[2]])

    D = linalg.block_diag(A, B)

    assert D.shape == (3, 3)
    assert linalg.to_sympy(linalg.image(D, linalg.matrix([[1, 0, 1]]))) == [[0, 1, 2]]


def test_equal_ignores_storage_format():
    dense = linalg.matrix([[1, 0], [0, 1]]).to_dense()

    assert linalg.equal(dense, linalg.eye(2))
    assert linalg.equal(linalg.eye(2), dense)
    assert not linalg.equal(dense, linalg.zeros(2, 2))
    assert not linalg.equal(linalg.eye(2), linalg.eye(3))


def test_equal_across_fields():
    domain = linalg.field_of([sqrt(3)])

    assert linalg.equal(linalg.eye(2, domain), linalg.eye(2))
    assert not linalg.equal(linalg.matrix([[sqrt(3)]], domain=domain), linalg.matrix([[1]]))
