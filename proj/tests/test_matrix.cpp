#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "bgg/matrix.hpp"

using namespace bgg;

namespace {

ExactMatrix random_matrix(int rows, int cols, std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    ExactMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.set(i, j, Rational(num(rng), den(rng)));
    return m;
}

} // namespace

TEST_CASE("basic accessors and sparsity invariants") {
    ExactMatrix m(2, 3);
    m.set(0, 1, Rational(1, 2));
    m.add(0, 1, Rational(-1, 2));
    m.add(1, 2, Rational(3));
    REQUIRE(m.get(0, 1) == 0);
    REQUIRE(m.row(0).empty()); // exact cancellation removes the entry
    REQUIRE(m.nnz() == 1);
    REQUIRE(m.get(1, 2) == 3);
    REQUIRE_THROWS_AS(m.get(2, 0), std::out_of_range);
    REQUIRE_THROWS_AS(m.set(0, 3, Rational(1)), std::out_of_range);
    REQUIRE_FALSE(m.is_zero());
    REQUIRE(ExactMatrix(4, 7).is_zero());
}

TEST_CASE("arithmetic, transpose, vstack") {
    ExactMatrix a(2, 2), b(2, 2);
    a.set(0, 0, 1);
    a.set(0, 1, 2);
    a.set(1, 1, Rational(1, 3));
    b.set(0, 1, -2);
    b.set(1, 0, 5);
    ExactMatrix s = a + b;
    REQUIRE(s.get(0, 1) == 0);
    REQUIRE(s.get(1, 0) == 5);
    REQUIRE((s - b) == a);
    REQUIRE(a.scaled(Rational(3)).get(1, 1) == 1);
    REQUIRE(a.transpose().transpose() == a);
    REQUIRE(a.transpose().get(1, 0) == 2);
    ExactMatrix v = ExactMatrix::vstack(a, b);
    REQUIRE(v.rows() == 4);
    REQUIRE(v.get(3, 0) == 5);
    REQUIRE_THROWS_AS(ExactMatrix::vstack(a, ExactMatrix(1, 3)), std::invalid_argument);
}

TEST_CASE("compose matches hand computation and respects identity") {
    ExactMatrix a(2, 3);
    a.set(0, 0, 1);
    a.set(0, 2, Rational(1, 2));
    a.set(1, 1, -3);
    ExactMatrix b(3, 2);
    b.set(0, 0, 2);
    b.set(1, 1, 4);
    b.set(2, 0, -2);
    ExactMatrix c = a.compose(b);
    REQUIRE(c.get(0, 0) == 1); // 1*2 + (1/2)*(-2)
    REQUIRE(c.get(0, 1) == 0);
    REQUIRE(c.get(1, 1) == -12);
    REQUIRE(a.compose(ExactMatrix::identity(3)) == a);
    REQUIRE(ExactMatrix::identity(2).compose(a) == a);
    REQUIRE_THROWS_AS(a.compose(ExactMatrix(2, 2)), std::invalid_argument);
}

TEST_CASE("rank on hand-checked matrices") {
    ExactMatrix m(3, 3);
    // Rows: (1,2,3), (2,4,6), (0,0,1) -> rank 2.
    m.set(0, 0, 1);
    m.set(0, 1, 2);
    m.set(0, 2, 3);
    m.set(1, 0, 2);
    m.set(1, 1, 4);
    m.set(1, 2, 6);
    m.set(2, 2, 1);
    REQUIRE(m.rank() == 2);
    REQUIRE(m.kernel_dim() == 1);
    REQUIRE_FALSE(m.is_nondegenerate());
    REQUIRE(ExactMatrix::identity(5).rank() == 5);
    REQUIRE(ExactMatrix(3, 4).rank() == 0);
    REQUIRE(ExactMatrix(3, 4).kernel_dim() == 4);
    REQUIRE_THROWS_AS(ExactMatrix(2, 3).is_nondegenerate(), std::invalid_argument);
}

TEST_CASE("rank identities on random matrices") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        ExactMatrix a = random_matrix(5, 7, rng);
        ExactMatrix b = random_matrix(7, 4, rng);
        int ra = a.rank();
        REQUIRE(ra == a.transpose().rank());
        REQUIRE(a.compose(b).rank() <= std::min(ra, b.rank()));
        // rank(A) + dim ker(A) = #cols
        REQUIRE(ra + a.kernel_dim() == a.cols());
        // Gram matrix A^T A has the same kernel as A over Q.
        REQUIRE(a.transpose().compose(a).rank() == ra);
    }
}

TEST_CASE("dense inverse and kernel basis") {
    DenseMatrix a{{Rational(2), Rational(1)}, {Rational(1), Rational(1)}};
    DenseMatrix inv = dense_inverse(a);
    REQUIRE(inv[0][0] == 1);
    REQUIRE(inv[0][1] == -1);
    REQUIRE(inv[1][0] == -1);
    REQUIRE(inv[1][1] == 2);
    REQUIRE_THROWS_AS(dense_inverse(DenseMatrix{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}),
                      std::domain_error);

    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        ExactMatrix m = random_matrix(3, 6, rng);
        auto basis = dense_kernel_basis(dense_from(m), m.cols());
        REQUIRE(static_cast<int>(basis.size()) == m.kernel_dim());
        for (const auto& v : basis) {
            for (int i = 0; i < m.rows(); ++i) {
                Rational s = 0;
                for (const auto& [c, val] : m.row(i)) s += val * v[c];
                REQUIRE(s == 0);
            }
        }
    }
}
