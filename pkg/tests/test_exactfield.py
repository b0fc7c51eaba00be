import pytest
from fractions import Fraction
from hypothesis import given, settings
import hypothesis.strategies as st

from soficrank.exactfield import (
    FpMatrix,
    FpScalar,
    kernel_basis,
    mat_mul,
    rank,
    rational_lt,
    parse_rational,
)


def F2(rows):
    return FpMatrix(rows, 2)


class TestScalar:
    def test_reduction_and_ops(self):
        a = FpScalar(7, 5)
        assert a.value == 2
        b = FpScalar(4, 5)
        assert (a + b).value == 1
        assert (a * b).value == 3
        assert (a - b).value == 3
        assert (-b).value == 1
        assert (b * b.inverse()).value == 1

    def test_rejects_composite_modulus(self):
        with pytest.raises(ValueError):
            FpScalar(1, 6)

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            FpScalar(1, 3) + FpScalar(1, 5)


class TestMatMul:
    def test_identity_neutral(self):
        m = FpMatrix([[1, 2], [3, 4]], 5)
        assert mat_mul(FpMatrix.identity(2, 5), m) == m
        assert mat_mul(m, FpMatrix.identity(2, 5)) == m

    def test_f2_square(self):
        m = F2([[1, 1], [0, 1]])
        assert mat_mul(m, m) == FpMatrix.identity(2, 2)

    def test_zero_absorbs(self):
        m = FpMatrix([[1, 2], [3, 4]], 7)
        z = FpMatrix.zeros(2, 2, 7)
        assert mat_mul(z, m) == z

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul(FpMatrix.zeros(2, 3, 5), FpMatrix.zeros(2, 3, 5))

    def test_modulus_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul(FpMatrix.zeros(2, 2, 5), FpMatrix.zeros(2, 2, 7))


class TestRankKernel:
    def test_identity_rank(self):
        for n in (1, 2, 5):
            assert rank(FpMatrix.identity(n, 3)) == n
            assert kernel_basis(FpMatrix.identity(n, 3)) == []

    def test_zero_matrix(self):
        z = FpMatrix.zeros(3, 3, 2)
        assert rank(z) == 0
        assert len(kernel_basis(z)) == 3

    def test_equal_rows_f2(self):
        assert rank(F2([[1, 1], [1, 1]])) == 1

    def test_kernel_of_sum_row(self):
        basis = kernel_basis(F2([[1, 1]]))
        assert len(basis) == 1
        assert basis[0].array.ravel().tolist() == [1, 1]


matrices = st.integers(2, 4).flatmap(
    lambda n: st.integers(1, 5).flatmap(
        lambda m: st.sampled_from([2, 3, 5, 7]).flatmap(
            lambda p: st.lists(
                st.lists(st.integers(0, p - 1), min_size=m, max_size=m),
                min_size=n,
                max_size=n,
            ).map(lambda rows: FpMatrix(rows, p))
        )
    )
)


class TestProperties:
    @given(matrices)
    @settings(max_examples=60, deadline=None)
    def test_rank_nullity(self, m):
        assert rank(m) + len(kernel_basis(m)) == m.cols

    @given(matrices)
    @settings(max_examples=60, deadline=None)
    def test_kernel_vectors_annihilate(self, m):
        for v in kernel_basis(m):
            assert mat_mul(m, v).is_zero()

    @given(matrices, st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_rank_invariant_under_row_permutation(self, m, rnd):
        perm = list(range(m.rows))
        rnd.shuffle(perm)
        shuffled = FpMatrix(m.array[perm, :], m.p)
        assert rank(shuffled) == rank(m)
        assert len(kernel_basis(shuffled)) == len(kernel_basis(m))

    @given(
        st.sampled_from([2, 3, 5]),
        st.integers(1, 3),
        st.integers(1, 3),
        st.integers(1, 3),
        st.integers(1, 3),
        st.data(),
    )
    @settings(max_examples=40, deadline=None)
    def test_matmul_associative(self, p, a, b, c, d, data):
        def draw(rows, cols):
            entries = data.draw(
                st.lists(
                    st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
                    min_size=rows,
                    max_size=rows,
                )
            )
            return FpMatrix(entries, p)

        x, y, z = draw(a, b), draw(b, c), draw(c, d)
        assert mat_mul(mat_mul(x, y), z) == mat_mul(x, mat_mul(y, z))

    def test_determinism_repeated_runs(self):
        m = FpMatrix([[2, 4, 1], [3, 0, 5], [2, 4, 1]], 7)
        first_rank = rank(m)
        first_kernel = [k.array.tolist() for k in kernel_basis(m)]
        for _ in range(5):
            assert rank(m) == first_rank
            assert [k.array.tolist() for k in kernel_basis(m)] == first_kernel


class TestRationals:
    def test_lt(self):
        assert rational_lt(Fraction(1, 3), Fraction(1, 2))
        assert not rational_lt(Fraction(1, 2), Fraction(1, 2))
        assert not rational_lt(Fraction(6, 14), Fraction(3, 7))

    def test_parse(self):
        assert parse_rational("1/10") == Fraction(1, 10)
        assert parse_rational("3") == Fraction(3)
        with pytest.raises(ValueError):
            parse_rational("x/y")


class TestImmutability:
    def test_array_read_only(self):
        m = FpMatrix.identity(2, 5)
        with pytest.raises(ValueError):
            m.array[0, 0] = 3

    def test_no_attribute_assignment(self):
        m = FpMatrix.identity(2, 5)
        with pytest.raises(AttributeError):
            m.p = 7
