from fractions import Fraction

import pytest

from matroid_circuits.errors import LinalgError, MatrixTooLarge, NotRegular, ZeroRow
from matroid_circuits.fixtures import complete_graph
from matroid_circuits.linalg import (
    IntMatrix,
    SignedMatrix,
    camion_sign,
    det_exact,
    incidence_matrix,
    int_det,
    is_tu,
    merge_parallel_columns,
    star_mesh,
    weighted_gram,
)
from matroid_circuits.matroid import as_binary, edges_to_graph, enumerate_bases
from matroid_circuits.tree import A7, A10, with_identity


class TestDeterminants:
    def test_det_exact(self):
        assert det_exact([[2, 1], [1, 3]]) == 5
        assert det_exact([[Fraction(1, 2), 0], [0, 4]]) == 2
        assert det_exact([]) == 1

    def test_det_needs_pivoting(self):
        assert det_exact([[0, 1], [1, 0]]) == -1
        assert int_det([[0, 0], [1, 1]]) == 0

    def test_non_square(self):
        with pytest.raises(LinalgError, match="non-square"):
            det_exact([[1, 2]])


class TestMatrices:
    def test_ragged(self):
        with pytest.raises(LinalgError, match="ragged"):
            IntMatrix(((1, 0), (1,)))

    def test_signed_entries(self):
        with pytest.raises(LinalgError, match="outside"):
            SignedMatrix(((2, 0),))

    def test_incidence_matrix_of_a_triangle(self):
        A = incidence_matrix(edges_to_graph(complete_graph(3, "abc")))
        # vertex 1 dropped; a=1-2, b=1-3, c=2-3
        assert A.rows == ((-1, 0, 1), (0, -1, -1))
        assert A.col_labels == ("a", "b", "c")


class TestTotalUnimodularity:
    def test_incidence_matrices_are_tu(self, k4_edges):
        assert is_tu(incidence_matrix(edges_to_graph(k4_edges)))

    def test_not_tu(self):
        assert not is_tu(IntMatrix(((1, 1), (-1, 1))))

    def test_guard(self):
        A = IntMatrix(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
        with pytest.raises(MatrixTooLarge):
            is_tu(A, max_tu=3)

    @pytest.mark.parametrize("rows", [with_identity(A10), [[1, 1, 0], [0, 1, 1]]])
    def test_camion_sign_regular(self, rows):
        A = camion_sign(rows)
        assert is_tu(A)
        assert [[abs(v) for v in row] for row in A.rows] == [list(row) for row in rows]

    def test_camion_sign_fano(self):
        with pytest.raises(NotRegular):
            camion_sign(with_identity(A7))

    def test_signed_r10_counts_bases(self, r10):
        A = camion_sign(as_binary(r10).backing.rows)
        assert det_exact(weighted_gram(A, [1] * 10).L) == 162
        assert len(enumerate_bases(r10)) == 162


class TestStarMesh:
    def test_shape_and_labels(self):
        A = IntMatrix(((1, 0, 1, -1), (1, 1, 0, 1)), (), ("a", "b", "c", "d"))
        sm = star_mesh(A)
        # row 1 support {a, b, d}: N0 = {c}, then pairs ab, ad, bd
        assert sm.support == (0, 1, 3)
        assert sm.columns == (2, (0, 1), (0, 3), (1, 3))
        assert sm.matrix.col_labels == ("c", "a~b", "a~d", "b~d")
        assert sm.matrix.rows == ((1, 1, 2, 1),)

    def test_identity(self):
        A = IntMatrix(((1, 0, 1, -1), (1, 1, 0, 1)))
        z = [Fraction(2), Fraction(3), Fraction(5), Fraction(7)]
        sm = star_mesh(A)
        y, z2 = sm.weights(z)
        assert y == 2 + 3 + 7
        assert z2[1] == Fraction(2 * 3, 12)
        assert det_exact(weighted_gram(A, z).L) == y * det_exact(weighted_gram(sm.matrix, z2).L)

    def test_zero_row(self):
        with pytest.raises(ZeroRow):
            star_mesh(IntMatrix(((1, 1), (0, 0))))

    def test_weight_count(self):
        with pytest.raises(LinalgError, match="weights"):
            weighted_gram(IntMatrix(((1, 1),)), [1])


def test_merge_parallel_columns():
    A = IntMatrix(((1, -1, 0, 0), (0, 0, 1, 0)), (), ("a", "b", "c", "z"))
    B, w = merge_parallel_columns(A, [2, 3, 5, 7])
    assert B.col_labels == ("a", "c")
    assert w == [5, 5]
    assert weighted_gram(B, w).L == weighted_gram(A, [2, 3, 5, 7]).L
