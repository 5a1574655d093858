#include "qhosvd/qmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qhosvd/errors.hpp"
#include "qhosvd/parallel.hpp"

namespace qhosvd {

namespace {

std::string shape_str(const QMatrix& a) {
    std::ostringstream os;
    os << a.rows() << 'x' << a.cols();
    return os.str();
}

void require_same_shape(const QMatrix& a, const QMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " + shape_str(b));
    }
}

}  // namespace

QMatrix::QMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw ShapeError("QMatrix: dimensions must be positive");
}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw ShapeError("QMatrix: dimensions must be positive");
    if (data_.size() != rows * cols) throw ShapeError("QMatrix: data length does not match rows*cols");
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

QMatrix QMatrix::from_rows(std::initializer_list<std::initializer_list<Quaternion>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    QMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("QMatrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (const auto& q : row) m(i, j++) = q;
        ++i;
    }
    return m;
}

QMatrix QMatrix::leading_cols(std::size_t count) const {
    if (count == 0 || count > cols_) throw ShapeError("leading_cols: count out of range");
    return QMatrix(rows_, count,
                   std::vector<Quaternion>(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(count * rows_)));
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions differ (" + shape_str(a) + " * " + shape_str(b) + ")");
    }
    QMatrix c(a.rows(), b.cols());
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    // Column j of C depends only on column j of B, so columns are independent.
    parallel_for(0, b.cols(), [&](std::size_t j) {
        auto cj = c.col(j);
        for (std::size_t k = 0; k < n; ++k) {
            const Quaternion bkj = b(k, j);
            if (bkj == Quaternion{}) continue;
            auto ak = a.col(k);
            for (std::size_t i = 0; i < m; ++i) cj[i] += qmul(ak[i], bkj);
        }
    });
    return c;
}

QMatrix adjoint(const QMatrix& a, AdjointKind kind) {
    if (kind == AdjointKind::conjugate) {
        QMatrix c(a.rows(), a.cols());
        std::transform(a.data().begin(), a.data().end(), c.data().begin(),
                       [](const Quaternion& q) { return qconj(q); });
        return c;
    }
    QMatrix t(a.cols(), a.rows());
    const bool conj = kind == AdjointKind::hermitian;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            t(j, i) = conj ? qconj(a(i, j)) : a(i, j);
        }
    }
    return t;
}

QMatrix kron(const QMatrix& a, const QMatrix& b) {
    QMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
        for (std::size_t ia = 0; ia < a.rows(); ++ia) {
            const Quaternion s = a(ia, ja);
            for (std::size_t jb = 0; jb < b.cols(); ++jb) {
                for (std::size_t ib = 0; ib < b.rows(); ++ib) {
                    k(ia * b.rows() + ib, ja * b.cols() + jb) = qmul(s, b(ib, jb));
                }
            }
        }
    }
    return k;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    require_same_shape(a, b, "operator+");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    require_same_shape(a, b, "operator-");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

QMatrix operator*(double s, const QMatrix& a) {
    QMatrix c = a;
    for (auto& q : c.data()) q *= s;
    return c;
}

double fro_norm(const QMatrix& a) {
    double s = 0.0;
    for (const auto& q : a.data()) s += q.norm2();
    return std::sqrt(s);
}

Quaternion trace(const QMatrix& a) {
    if (!a.is_square()) throw ShapeError("trace: matrix is not square (" + shape_str(a) + ")");
    Quaternion t;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double orthonormality_defect(const QMatrix& a) {
    const QMatrix g = matmul(hermitian(a), a);
    return fro_norm(g - QMatrix::identity(a.cols()));
}

double unitarity_defect(const QMatrix& a) {
    if (!a.is_square()) throw ShapeError("unitarity_defect: matrix is not square (" + shape_str(a) + ")");
    return orthonormality_defect(a);
}

double max_abs_diff(const QMatrix& a, const QMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, qmodulus(a.data()[i] - b.data()[i]));
    return m;
}

bool is_real(const QMatrix& a) {
    return std::all_of(a.data().begin(), a.data().end(),
                       [](const Quaternion& q) { return q.x == 0.0 && q.y == 0.0 && q.z == 0.0; });
}

}  // namespace qhosvd
