#pragma once

/**
 * Dense order-N quaternion tensors stored in generalized column-major order
 * (first index fastest).
 *
 * Mode numbers are 1-based throughout this header (k = 1..N) to line up with
 * the usual mathematical notation; element indices passed to operator() are
 * 0-based like any C++ container.
 */

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "qhosvd/qmatrix.hpp"

namespace qhosvd {

enum class Side { left, right };

class QTensor {
public:
    QTensor() = default;
    // Zero tensor.
    explicit QTensor(std::vector<std::size_t> dims);
    QTensor(std::vector<std::size_t> dims, std::vector<Quaternion> data);

    // Order-2 tensor with the same entries as the matrix.
    static QTensor from_matrix(const QMatrix& m);

    [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
    [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    // I_k for 1-based k; throws ModeError when out of range.
    [[nodiscard]] std::size_t dim(std::size_t k) const;
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] std::span<Quaternion> data() noexcept { return data_; }
    [[nodiscard]] std::span<const Quaternion> data() const noexcept { return data_; }

    Quaternion& operator()(std::initializer_list<std::size_t> idx) { return data_[linear_index(idx)]; }
    const Quaternion& operator()(std::initializer_list<std::size_t> idx) const { return data_[linear_index(idx)]; }
    [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> idx) const;
    [[nodiscard]] std::size_t linear_index(std::initializer_list<std::size_t> idx) const {
        return linear_index(std::span<const std::size_t>(idx.begin(), idx.size()));
    }

    // Real part identically zero.
    [[nodiscard]] bool is_pure() const;

    // Order-2 tensor viewed as a matrix.
    [[nodiscard]] QMatrix to_matrix() const;

    bool operator==(const QTensor&) const = default;

private:
    std::vector<std::size_t> dims_;
    std::vector<Quaternion> data_;
};

// Left unfolding: I_k x prod_{l != k} I_l, mode-k fibers as columns, the
// remaining indices ordered with the lowest mode fastest. The right
// unfolding is its plain transpose.
[[nodiscard]] QMatrix unfold(const QTensor& t, std::size_t k, Side side);

// Inverse of unfold for a tensor of shape `dims`.
[[nodiscard]] QTensor fold(const QMatrix& m, std::size_t k, Side side, const std::vector<std::size_t>& dims);

// U x_k^L T: entries sum_i U(j, i) * T(..i..), the matrix entry on the left.
[[nodiscard]] QTensor lmode_product(const QMatrix& u, std::size_t k, const QTensor& t);

// T x_k^R V: entries sum_i T(..i..) * V(i, j), the matrix entry on the right.
[[nodiscard]] QTensor rmode_product(const QTensor& t, std::size_t k, const QMatrix& v);

// Left: sum a * conj(b). Right: sum conj(a) * b.
[[nodiscard]] Quaternion inner(const QTensor& a, const QTensor& b, Side side);

[[nodiscard]] double fro_norm(const QTensor& t);

// The order-(N-1) slice with index k fixed to the 1-based alpha. Slicing an
// order-1 tensor yields a single-entry order-1 tensor.
[[nodiscard]] QTensor subtensor(const QTensor& t, std::size_t k, std::size_t alpha);

[[nodiscard]] QTensor operator+(const QTensor& a, const QTensor& b);
[[nodiscard]] QTensor operator-(const QTensor& a, const QTensor& b);
[[nodiscard]] QTensor operator*(double s, const QTensor& a);

[[nodiscard]] double max_abs_diff(const QTensor& a, const QTensor& b);

// Entries with independent standard normal components.
[[nodiscard]] QTensor random_qtensor(const std::vector<std::size_t>& dims, std::mt19937_64& rng);

}  // namespace qhosvd
