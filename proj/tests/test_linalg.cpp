#include "hirsch/linalg.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hirsch;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937& rng, int zero_bias = 2) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4), z(0, zero_bias);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (z(rng) == 0) {
                m(i, j) = Scalar(num(rng), den(rng));
                m(i, j).canonicalize();
            }
    return m;
}

std::vector<std::vector<mpq_class>> rows_of(const Matrix& m) {
    std::vector<std::vector<mpq_class>> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i].assign(m.row(i).begin(), m.row(i).end());
    return out;
}

}  // namespace

TEST(Linalg, RankOfSmallMatrices) {
    Matrix m = Matrix::from_rows(3, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
    EXPECT_EQ(rank(m), 2u);
    EXPECT_EQ(rank(Matrix(0, 5)), 0u);
    EXPECT_EQ(rank(Matrix(3, 3)), 0u);
    EXPECT_EQ(rank(Matrix::identity(4)), 4u);
}

TEST(Linalg, RrefIsReduced) {
    Matrix m = Matrix::from_rows(3, {{0, 2, 4}, {1, 1, 1}, {Scalar(1, 2), 0, Scalar(-1, 2)}});
    const auto piv = rref(m);
    ASSERT_EQ(piv.size(), 2u);
    EXPECT_EQ(piv[0], 0u);
    EXPECT_EQ(piv[1], 1u);
    EXPECT_EQ(m(0, 0), 1);
    EXPECT_EQ(m(1, 0), 0);
    EXPECT_EQ(m(0, 1), 0);
    EXPECT_EQ(m(1, 1), 1);
    EXPECT_TRUE(is_zero(m.row(2)));
}

TEST(Linalg, RankMatchesOracleOnRandomMatrices) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    for (int t = 0; t < 300; ++t) {
        const Matrix m = random_matrix(dim(rng), dim(rng), rng);
        EXPECT_EQ(rank(m), oracle::rank(rows_of(m)));
        Matrix r = m;
        EXPECT_EQ(rref(r).size(), rank(m));
    }
}

TEST(Linalg, NullspaceVectorsAreKilledAndIndependent) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    for (int t = 0; t < 200; ++t) {
        const Matrix m = random_matrix(dim(rng), dim(rng), rng);
        const auto ns = nullspace(m);
        EXPECT_EQ(ns.size() + rank(m), m.cols());
        for (const auto& v : ns) EXPECT_TRUE(is_zero(m * v));
        if (!ns.empty()) {
            EXPECT_EQ(rank(Matrix::from_rows(m.cols(), ns)), ns.size());
        }
    }
}

TEST(Linalg, InverseAndSolver) {
    std::mt19937 rng(3);
    for (int t = 0; t < 100; ++t) {
        const Matrix m = random_matrix(4, 4, rng, 1);
        const auto inv = inverse(m);
        EXPECT_EQ(inv.has_value(), rank(m) == 4);
        if (inv) {
            EXPECT_EQ(m * *inv, Matrix::identity(4));
            EXPECT_EQ(*inv * m, Matrix::identity(4));
        }
        const LinearSolver s(m);
        Vector x(4);
        for (auto& c : x) c = Scalar(static_cast<int>(rng() % 7) - 3);
        const Vector b = m * x;
        const auto y = s.solve(b);
        ASSERT_TRUE(y.has_value());
        EXPECT_EQ(m * *y, b);
    }
}

TEST(Linalg, SolverRejectsInconsistentSystems) {
    const Matrix m = Matrix::from_rows(2, {{1, 1}, {2, 2}});
    const LinearSolver s(m);
    EXPECT_FALSE(s.solve(Vector{1, 3}).has_value());
    EXPECT_TRUE(s.solve(Vector{1, 2}).has_value());
    EXPECT_THROW(s.solve(Vector{1}), std::invalid_argument);
}

TEST(Linalg, SpanBasis) {
    const auto b = span_basis(3, {{1, 0, 1}, {2, 0, 2}, {0, 1, 0}});
    EXPECT_EQ(b.size(), 2u);
    EXPECT_TRUE(span_basis(3, {}).empty());
}

TEST(Linalg, ShapeErrors) {
    EXPECT_THROW(Matrix::identity(2) * Matrix::identity(3), std::invalid_argument);
    EXPECT_THROW(inverse(Matrix(2, 3)), std::invalid_argument);
    EXPECT_THROW(Matrix::from_rows(2, {{1, 2, 3}}), std::invalid_argument);
}
