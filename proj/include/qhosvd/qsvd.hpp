#pragma once

/**
 * Quaternion singular value decomposition A = U * diag(sigma) * V^H.
 *
 * The decomposition goes through the complex adjoint embedding. Writing
 * A = A1 + A2 j with complex A1 = A0 + A1' i and A2 = A2' + A3' i,
 *
 *     chi(A) = [  A1       A2     ]
 *              [ -conj(A2) conj(A1) ]
 *
 * is a 2m x 2n complex matrix with chi(PQ) = chi(P) chi(Q) and
 * chi(P^H) = chi(P)^H. Its singular values are those of A, each repeated
 * twice. A complex column [a; c] of length 2n corresponds to the quaternion
 * column a - conj(c) j.
 *
 * The complex SVD is a cyclic one-sided (Hestenes) Jacobi iteration, with a
 * Householder QR preconditioner for tall inputs. It is single threaded and
 * fully deterministic.
 */

#include <complex>
#include <cstddef>
#include <vector>

#include "qhosvd/qmatrix.hpp"

namespace qhosvd {

using Complex = std::complex<double>;

// Dense complex matrix, column-major.
struct CMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Complex> data;

    CMatrix() = default;
    CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Complex& operator()(std::size_t r, std::size_t c) { return data[c * rows + r]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }
};

[[nodiscard]] CMatrix cmatmul(const CMatrix& a, const CMatrix& b);
[[nodiscard]] CMatrix cadjoint(const CMatrix& a);
[[nodiscard]] double cmax_abs_diff(const CMatrix& a, const CMatrix& b);

// chi(A), size 2m x 2n.
[[nodiscard]] CMatrix complex_embedding(const QMatrix& a);

inline constexpr int kJacobiSweepCap = 60;

// Thin complex SVD of an arbitrary matrix: A = u * diag(sigma) * v^H with
// u of size rows x r, v of size cols x r, r = min(rows, cols), sigma
// descending. Columns of u belonging to zero singular values are zero.
struct ComplexSVD {
    CMatrix u;
    std::vector<double> sigma;
    CMatrix v;
};
[[nodiscard]] ComplexSVD complex_svd(const CMatrix& a);

struct SVDResult {
    QMatrix u;                  // m x m, unitary (m x r when thin)
    std::vector<double> sigma;  // r = min(m, n), descending, nonnegative
    QMatrix v;                  // n x n, unitary (n x r when thin)
};

// A thin SVD keeps only the r = min(m, n) leading singular vectors on each
// side, which avoids completing a large unitary basis for very tall or wide
// inputs.
enum class SvdShape { full, thin };

// Quaternion SVD. In every column of U the entry of largest modulus is
// real and nonnegative; the compensating unit quaternion is carried by the
// paired column of V.
//
// Throws DataError on non-finite input and ConvergenceError if the Jacobi
// iteration does not settle within kJacobiSweepCap sweeps.
[[nodiscard]] SVDResult qsvd(const QMatrix& a, SvdShape shape = SvdShape::full);

// U * diag(sigma) * V^H, the inverse of qsvd.
[[nodiscard]] QMatrix svd_reconstruct(const SVDResult& s);

}  // namespace qhosvd
