#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "qhosvd/errors.hpp"
#include "qhosvd/qsvd.hpp"
#include "test_util.hpp"

using namespace qhosvd;

namespace {

void expect_valid_svd(const QMatrix& a, const SVDResult& s) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    ASSERT_EQ(s.u.rows(), m);
    ASSERT_EQ(s.u.cols(), m);
    ASSERT_EQ(s.v.rows(), n);
    ASSERT_EQ(s.v.cols(), n);
    ASSERT_EQ(s.sigma.size(), std::min(m, n));
    EXPECT_LE(unitarity_defect(s.u), 1e-10 * static_cast<double>(m));
    EXPECT_LE(unitarity_defect(s.v), 1e-10 * static_cast<double>(n));
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
        EXPECT_GE(s.sigma[k], 0.0);
        if (k > 0) {
            EXPECT_GE(s.sigma[k - 1], s.sigma[k]);
        }
    }
    const double scale = std::max(fro_norm(a), std::numeric_limits<double>::min());
    EXPECT_LE(fro_norm(svd_reconstruct(s) - a) / scale, 1e-10);
    for (std::size_t k = 0; k < s.u.cols(); ++k) {
        const auto col = s.u.col(k);
        std::size_t best = 0;
        for (std::size_t r = 1; r < col.size(); ++r) {
            if (col[r].norm2() > col[best].norm2()) best = r;
        }
        EXPECT_EQ(col[best].x, 0.0);
        EXPECT_EQ(col[best].y, 0.0);
        EXPECT_EQ(col[best].z, 0.0);
        EXPECT_GE(col[best].w, 0.0);
    }
}

}  // namespace

TEST(ComplexEmbedding, Layout) {
    const auto a = QMatrix::from_rows({{Quaternion{1, 2, 3, 4}}});
    const CMatrix x = complex_embedding(a);
    ASSERT_EQ(x.rows, 2u);
    EXPECT_EQ(x(0, 0), Complex(1, 2));
    EXPECT_EQ(x(0, 1), Complex(3, 4));
    EXPECT_EQ(x(1, 0), Complex(-3, 4));
    EXPECT_EQ(x(1, 1), Complex(1, -2));
}

TEST(ComplexEmbedding, IsAMultiplicativeHomomorphism) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 50; ++t) {
        const auto a = qtest::random_matrix(4, 6, rng);
        const auto b = qtest::random_matrix(6, 3, rng);
        EXPECT_LE(cmax_abs_diff(complex_embedding(matmul(a, b)),
                                cmatmul(complex_embedding(a), complex_embedding(b))),
                  1e-13);
        EXPECT_LE(cmax_abs_diff(complex_embedding(hermitian(a)), cadjoint(complex_embedding(a))), 1e-13);
    }
}

TEST(ComplexSvd, ReconstructsTallAndWide) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> nd;
    for (auto [r, c] : {std::pair{7, 3}, std::pair{3, 7}, std::pair{5, 5}, std::pair{12, 2}}) {
        CMatrix a(r, c);
        for (auto& z : a.data) z = Complex(nd(rng), nd(rng));
        const auto s = complex_svd(a);
        ASSERT_EQ(s.sigma.size(), static_cast<std::size_t>(std::min(r, c)));
        CMatrix us = s.u;
        for (std::size_t k = 0; k < s.sigma.size(); ++k)
            for (std::size_t i = 0; i < us.rows; ++i) us(i, k) *= s.sigma[k];
        EXPECT_LT(cmax_abs_diff(cmatmul(us, cadjoint(s.v)), a), 1e-12);
        EXPECT_TRUE(std::is_sorted(s.sigma.rbegin(), s.sigma.rend()));
    }
}

TEST(Qsvd, ScalarJ) {
    const auto s = qsvd(QMatrix::from_rows({{Quaternion::j()}}));
    ASSERT_EQ(s.sigma.size(), 1u);
    EXPECT_NEAR(s.sigma[0], 1.0, 1e-15);
    EXPECT_LT(qtest::qdist(s.u(0, 0), Quaternion{1}), 1e-15);
    EXPECT_LT(qtest::qdist(s.v(0, 0), -Quaternion::j()), 1e-15);
}

TEST(Qsvd, RealDiagonal) {
    const auto s = qsvd(QMatrix::from_rows({{3, 0}, {0, 1}}));
    EXPECT_NEAR(s.sigma[0], 3.0, 1e-15);
    EXPECT_NEAR(s.sigma[1], 1.0, 1e-15);
    EXPECT_LT(max_abs_diff(s.u, QMatrix::identity(2)), 1e-15);
    EXPECT_LT(max_abs_diff(s.v, QMatrix::identity(2)), 1e-15);
}

TEST(Qsvd, RandomShapesUpTo40By60) {
    std::mt19937_64 rng(37);
    for (auto [m, n] : {std::pair{1, 1}, std::pair{1, 5}, std::pair{5, 1}, std::pair{3, 3}, std::pair{6, 4},
                        std::pair{4, 6}, std::pair{9, 2}, std::pair{17, 8}, std::pair{40, 60}, std::pair{60, 40}}) {
        SCOPED_TRACE(std::to_string(m) + "x" + std::to_string(n));
        const auto a = qtest::random_matrix(m, n, rng);
        expect_valid_svd(a, qsvd(a));
    }
}

TEST(Qsvd, SingularValuesMatchComplexEmbeddingPairs) {
    std::mt19937_64 rng(41);
    const auto a = qtest::random_matrix(6, 4, rng);
    const auto s = qsvd(a);
    const auto c = complex_svd(complex_embedding(a));
    ASSERT_EQ(c.sigma.size(), 8u);
    for (std::size_t k = 0; k < 4; ++k) {
        EXPECT_NEAR(c.sigma[2 * k], s.sigma[k], 1e-12);
        EXPECT_NEAR(c.sigma[2 * k + 1], s.sigma[k], 1e-12);
    }
}

TEST(Qsvd, RealInputMatchesRealReference) {
    std::mt19937_64 rng(43);
    for (auto [m, n] : {std::pair{5, 3}, std::pair{3, 5}, std::pair{8, 8}, std::pair{10, 4}}) {
        const auto a = qtest::random_real_matrix(m, n, rng);
        const auto s = qsvd(a);
        expect_valid_svd(a, s);
        const auto ref = qtest::real_singular_values(a);
        for (std::size_t k = 0; k < ref.size(); ++k) EXPECT_NEAR(s.sigma[k], ref[k], 1e-10);
        EXPECT_TRUE(is_real(s.u.leading_cols(s.sigma.size())));
    }
}

TEST(Qsvd, RankDeficientAndZero) {
    std::mt19937_64 rng(47);
    const auto x = qtest::random_matrix(6, 2, rng);
    const auto y = qtest::random_matrix(2, 5, rng);
    const auto a = matmul(x, y);
    const auto s = qsvd(a);
    expect_valid_svd(a, s);
    EXPECT_LT(s.sigma[2] / s.sigma[0], 1e-13);

    const QMatrix z(4, 3);
    const auto sz = qsvd(z);
    EXPECT_EQ(sz.sigma, std::vector<double>(3, 0.0));
    EXPECT_LE(unitarity_defect(sz.u), 1e-14);
    EXPECT_LE(unitarity_defect(sz.v), 1e-14);
}

TEST(Qsvd, RepeatedSingularValues) {
    std::mt19937_64 rng(53);
    // A unitary matrix times 2: every singular value equals 2.
    const auto q = qsvd(qtest::random_matrix(5, 5, rng)).u;
    const auto a = 2.0 * q;
    const auto s = qsvd(a);
    expect_valid_svd(a, s);
    for (double v : s.sigma) EXPECT_NEAR(v, 2.0, 1e-12);

    const auto b = QMatrix::from_rows({{Quaternion::i(), 0}, {0, Quaternion::k()}, {0, 0}});
    expect_valid_svd(b, qsvd(b));
}

TEST(Qsvd, NonFiniteInputThrows) {
    auto a = QMatrix::identity(3);
    a(1, 2) = Quaternion{0, std::numeric_limits<double>::quiet_NaN()};
    EXPECT_THROW((void)qsvd(a), DataError);
    a(1, 2) = Quaternion{std::numeric_limits<double>::infinity()};
    EXPECT_THROW((void)qsvd(a), DataError);
}

TEST(Qsvd, Deterministic) {
    std::mt19937_64 rng(59);
    const auto a = qtest::random_matrix(12, 7, rng);
    const auto s1 = qsvd(a);
    const auto s2 = qsvd(a);
    EXPECT_EQ(s1.u, s2.u);
    EXPECT_EQ(s1.v, s2.v);
    EXPECT_EQ(s1.sigma, s2.sigma);
}

TEST(Qsvd, ThinIsTheLeadingPartOfFull) {
    std::mt19937_64 rng(61);
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{9, 4}, {4, 9}, {6, 6}, {30, 3}}) {
        QMatrix a = qtest::random_matrix(m, n, rng);
        // A zero column makes one singular value vanish, so the thin basis
        // also needs completing.
        for (std::size_t i = 0; i < m; ++i) a(i, 0) = 0.0;
        const auto full = qsvd(a);
        const auto thin = qsvd(a, SvdShape::thin);
        const std::size_t r = std::min(m, n);
        EXPECT_EQ(thin.u.cols(), r);
        EXPECT_EQ(thin.v.cols(), r);
        EXPECT_EQ(thin.sigma, full.sigma);
        EXPECT_EQ(thin.u, full.u.leading_cols(r));
        EXPECT_EQ(thin.v, full.v.leading_cols(r));
        EXPECT_LE(orthonormality_defect(thin.u), 1e-12);
        EXPECT_LE(fro_norm(svd_reconstruct(thin) - a), 1e-12 * fro_norm(a));
    }
}
