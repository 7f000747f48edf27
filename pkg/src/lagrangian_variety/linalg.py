"""
Exact subspace algebra on top of sympy's DomainMatrix.

Subspaces are DomainMatrix objects whose rows span them. Everything works over QQ,
or over a quadratic extension QQ<sqrt(D)> when an input carries a square root.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from sympy import Basic, Rational, sympify
from sympy.polys.constructor import construct_domain
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix


def field_of(values: Iterable) -> object:
    """Smallest field among QQ and QQ<sqrt(D)> holding all values."""
    values = [sympify(value) for value in values]
    if all(value.is_Rational for value in values):
        return QQ
    domain, _ = construct_domain(values, extension=True)
    return domain.get_field()


def unify(*domains) -> object:
    """Common field of several domains."""
    return reduce(lambda a, b: a.unify(b), domains, QQ).get_field()


def element(value, domain=QQ):
    """Convert an int, Fraction, sympy number or domain element into domain."""
    if isinstance(value, Basic):
        return domain.from_sympy(value)
    if isinstance(value, (int, Fraction)):
        return domain.from_sympy(Rational(value.numerator, value.denominator))
    return domain.convert(value)


def matrix(rows: Sequence[Sequence], ncols: int | None = None, domain=QQ) -> DomainMatrix:
    """DomainMatrix from nested lists; ncols is needed when rows is empty."""
    rows = [list(row) for row in rows]
    if not rows:
        return zeros(0, ncols or 0, domain)
    width = len(rows[0])
    return DomainMatrix([[element(value, domain) for value in row] for row in rows], (len(rows), width), domain)


def zeros(nrows: int, ncols: int, domain=QQ) -> DomainMatrix:
    return DomainMatrix.zeros((nrows, ncols), domain)


def eye(n: int, domain=QQ) -> DomainMatrix:
    return DomainMatrix.eye(n, domain)


def entries(M: DomainMatrix) -> list[list]:
    """Rows of domain elements."""
    if M.shape[0] == 0:
        return []
    return M.to_list()


def to_sympy(M: DomainMatrix) -> list[list]:
    """Rows of sympy numbers."""
    return [[M.domain.to_sympy(value) for value in row] for row in entries(M)]


def convert(M: DomainMatrix, domain) -> DomainMatrix:
    if M.domain == domain:
        return M
    if M.shape[0] == 0:
        return zeros(0, M.shape[1], domain)
    return M.convert_to(domain)


def stack(*matrices: DomainMatrix) -> DomainMatrix:
    """Vertical concatenation; empty blocks are skipped."""
    domain = unify(*(M.domain for M in matrices))
    ncols = matrices[0].shape[1]
    for M in matrices:
        if M.shape[1] != ncols:
            raise ValueError(f"cannot stack {M.shape[1]} columns onto {ncols}")
    blocks = [convert(M, domain) for M in matrices if M.shape[0]]
    if not blocks:
        return zeros(0, ncols, domain)
    if len(blocks) == 1:
        return blocks[0]
    return blocks[0].vstack(*blocks[1:])


def hstack(*matrices: DomainMatrix) -> DomainMatrix:
    domain = unify(*(M.domain for M in matrices))
    nrows = matrices[0].shape[0]
    if nrows == 0:
        return zeros(0, sum(M.shape[1] for M in matrices), domain)
    blocks = [convert(M, domain) for M in matrices if M.shape[1]]
    if len(blocks) == 1:
        return blocks[0]
    return blocks[0].hstack(*blocks[1:])


def block_diag(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    domain = unify(A.domain, B.domain)
    (m, n), (p, q) = A.shape, B.shape
    top = hstack(convert(A, domain), zeros(m, q, domain))
    bottom = hstack(zeros(p, n, domain), convert(B, domain))
    return stack(top, bottom)


def multiply(*matrices: DomainMatrix) -> DomainMatrix:
    """Matrix product in a common field."""
    domain = unify(*(M.domain for M in matrices))
    result = convert(matrices[0], domain)
    for M in matrices[1:]:
        if result.shape[1] != M.shape[0]:
            raise ValueError(f"shape mismatch {result.shape} * {M.shape}")
        if result.shape[0] == 0 or M.shape[1] == 0 or M.shape[0] == 0:
            result = zeros(result.shape[0], M.shape[1], domain)
        else:
            result = result * convert(M, domain)
    return result


def image(A: DomainMatrix, rows: DomainMatrix) -> DomainMatrix:
    """Rows mapped by the linear map whose matrix A acts on column vectors."""
    return multiply(rows, A.transpose())


def rref(M: DomainMatrix) -> tuple[list[list], tuple[int, ...]]:
    M = M.to_field()
    reduced, pivots = M.rref()
    return entries(reduced), tuple(pivots)


def rank(M: DomainMatrix) -> int:
    if M.shape[0] == 0 or M.shape[1] == 0:
        return 0
    return len(rref(M)[1])


def row_basis(M: DomainMatrix) -> DomainMatrix:
    """Reduced row echelon basis of the row space."""
    domain = M.domain.get_field()
    if M.shape[0] == 0:
        return zeros(0, M.shape[1], domain)
    reduced, pivots = rref(M)
    return matrix(reduced[: len(pivots)], M.shape[1], domain)


def kernel(M: DomainMatrix) -> DomainMatrix:
    """Rows spanning {x : M x = 0}."""
    domain = M.domain.get_field()
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return eye(ncols, domain)
    reduced, pivots = rref(M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        vector = [domain.zero] * ncols
        vector[j] = domain.one
        for i, p in enumerate(pivots):
            vector[p] = -reduced[i][j]
        basis.append(vector)
    return matrix(basis, ncols, domain)


def left_kernel(M: DomainMatrix) -> DomainMatrix:
    """Rows y with y M = 0."""
    return kernel(M.transpose())


def dim(M: DomainMatrix) -> int:
    return rank(M)


def span(*matrices: DomainMatrix) -> DomainMatrix:
    return row_basis(stack(*matrices))


def intersect(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    """Basis of rowspace(A) meet rowspace(B)."""
    domain = unify(A.domain, B.domain)
    if A.shape[0] == 0 or B.shape[0] == 0:
        return zeros(0, A.shape[1], domain)
    relations = kernel(stack(A, B).transpose())
    if relations.shape[0] == 0:
        return zeros(0, A.shape[1], domain)
    return row_basis(multiply(relations[:, : A.shape[0]], A))


def contains(A: DomainMatrix, B: DomainMatrix) -> bool:
    """Whether rowspace(B) lies in rowspace(A)."""
    if B.shape[0] == 0:
        return True
    return rank(stack(A, B)) == rank(A)


def same_space(A: DomainMatrix, B: DomainMatrix) -> bool:
    rank_a, rank_b = rank(A), rank(B)
    return rank_a == rank_b and rank(stack(A, B)) == rank_a


def equal(A: DomainMatrix, B: DomainMatrix) -> bool:
    """Entrywise equality, whatever the storage format or field of either side."""
    if A.shape != B.shape:
        return False
    domain = unify(A.domain, B.domain)
    return entries(convert(A, domain)) == entries(convert(B, domain))


def is_zero(M: DomainMatrix) -> bool:
    zero = M.domain.zero
    return all(value == zero for row in entries(M) for value in row)


def pairing(U: DomainMatrix, gram: DomainMatrix, W: DomainMatrix) -> DomainMatrix:
    """Matrix of form values <u_i, w_j>."""
    return multiply(U, gram, W.transpose())


def is_isotropic(U: DomainMatrix, gram: DomainMatrix) -> bool:
    if U.shape[0] == 0:
        return True
    return is_zero(pairing(U, gram, U))


def orthogonal(U: DomainMatrix, gram: DomainMatrix) -> DomainMatrix:
    """Rows spanning the orthogonal complement of U for gram."""
    if U.shape[0] == 0:
        return eye(gram.shape[0], gram.domain.get_field())
    return kernel(multiply(U, gram))


def coordinates(basis: DomainMatrix, rows: DomainMatrix) -> DomainMatrix:
    """Coordinates of rows in an independent basis; rows must lie in its span."""
    domain = unify(basis.domain, rows.domain)
    if rows.shape[0] == 0:
        return zeros(0, basis.shape[0], domain)
    # solve c * basis = rows column by column through the kernel of [basis; -row]
    result = []
    k = basis.shape[0]
    for row in entries(convert(rows, domain)):
        target = matrix([row], domain=domain)
        relations = kernel(stack(basis, -target).transpose())
        solution = None
        for relation in entries(relations):
            if relation[k] != domain.zero:
                scale = relation[k]
                solution = [value / scale for value in relation[:k]]
                break
        if solution is None:
            raise ValueError("vector is not in the span of the basis")
        result.append(solution)
    return matrix(result, k, domain)


def scale(M: DomainMatrix, factor, domain=None) -> DomainMatrix:
    """factor * M, with factor converted into the field of M (or the given domain)."""
    domain = domain or M.domain
    M = convert(M, domain)
    factor = element(factor, domain)
    return matrix([[factor * value for value in row] for row in entries(M)], M.shape[1], domain)


def add(*matrices: DomainMatrix) -> DomainMatrix:
    domain = unify(*(M.domain for M in matrices))
    result = convert(matrices[0], domain)
    for M in matrices[1:]:
        result = result + convert(M, domain)
    return result


def subtract(A: DomainMatrix, B: DomainMatrix) -> DomainMatrix:
    domain = unify(A.domain, B.domain)
    return convert(A, domain) - convert(B, domain)


def diagonal(values: Sequence, domain=QQ) -> DomainMatrix:
    n = len(values)
    zero = domain.zero
    return matrix([[values[i] if i == j else zero for j in range(n)] for i in range(n)], n, domain)


def inverse(M: DomainMatrix) -> DomainMatrix:
    return M.to_field().inv()
