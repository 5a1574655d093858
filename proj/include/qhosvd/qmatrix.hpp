#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qhosvd/quaternion.hpp"

namespace qhosvd {

// Dense quaternion matrix, column-major (row index fastest).
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);
    QMatrix(std::size_t rows, std::size_t cols, std::vector<Quaternion> data);

    static QMatrix identity(std::size_t n);
    // Row-major nested initializer, convenient in tests and fixtures.
    static QMatrix from_rows(std::initializer_list<std::initializer_list<Quaternion>> rows);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }
    [[nodiscard]] bool is_square() const noexcept { return rows_ == cols_; }

    Quaternion& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const Quaternion& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    [[nodiscard]] std::span<Quaternion> col(std::size_t c) {
        return {data_.data() + c * rows_, rows_};
    }
    [[nodiscard]] std::span<const Quaternion> col(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

    [[nodiscard]] std::span<Quaternion> data() noexcept { return data_; }
    [[nodiscard]] std::span<const Quaternion> data() const noexcept { return data_; }

    // First `count` columns.
    [[nodiscard]] QMatrix leading_cols(std::size_t count) const;

    bool operator==(const QMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Quaternion> data_;
};

enum class AdjointKind { conjugate, transpose, hermitian };

// A*B with entry (i,j) = sum_k A(i,k)*B(k,j), quaternion products in that order.
[[nodiscard]] QMatrix matmul(const QMatrix& a, const QMatrix& b);

[[nodiscard]] QMatrix adjoint(const QMatrix& a, AdjointKind kind);
[[nodiscard]] inline QMatrix conjugate(const QMatrix& a) { return adjoint(a, AdjointKind::conjugate); }
[[nodiscard]] inline QMatrix transpose(const QMatrix& a) { return adjoint(a, AdjointKind::transpose); }
[[nodiscard]] inline QMatrix hermitian(const QMatrix& a) { return adjoint(a, AdjointKind::hermitian); }

// Kronecker product; block (i,j) is A(i,j)*B with A(i,j) on the left.
[[nodiscard]] QMatrix kron(const QMatrix& a, const QMatrix& b);

[[nodiscard]] QMatrix operator+(const QMatrix& a, const QMatrix& b);
[[nodiscard]] QMatrix operator-(const QMatrix& a, const QMatrix& b);
[[nodiscard]] QMatrix operator*(double s, const QMatrix& a);

[[nodiscard]] double fro_norm(const QMatrix& a);
[[nodiscard]] Quaternion trace(const QMatrix& a);

// ||A^H A - I||_F for a square A.
[[nodiscard]] double unitarity_defect(const QMatrix& a);
// ||A^H A - I||_F for any A; zero iff the columns are orthonormal.
[[nodiscard]] double orthonormality_defect(const QMatrix& a);

// Largest entrywise modulus of A - B.
[[nodiscard]] double max_abs_diff(const QMatrix& a, const QMatrix& b);

[[nodiscard]] bool is_real(const QMatrix& a);

}  // namespace qhosvd
