#pragma once

/**
 * Executable checks of the structural properties of a decomposition core,
 * the residual tensors behind the truncation error, and the worked-example
 * harness built on the embedded 3x3x3x3 fixture.
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qhosvd/decomposition.hpp"

namespace qhosvd {

struct PropertyDetail {
    std::string label;  // e.g. "mode 2 left"
    double residual = 0.0;
};

struct PropertyReport {
    std::string name;
    double residual = 0.0;  // worst case over details
    double tolerance = 0.0;
    bool pass = false;
    std::optional<double> value;  // measured quantity, for example checks
    std::vector<PropertyDetail> details;
};

[[nodiscard]] std::string to_text(const PropertyReport& r);
[[nodiscard]] std::string to_json_line(const PropertyReport& r);

inline constexpr double kPropertyTol = 1e-9;

// Core subtensor norms per mode are nonincreasing and equal the recorded
// spectrum (zero past its end), relative to ||S||. For a truncated
// decomposition the later projections can only shrink slices, so there the
// check is ||S_{i_k=a}|| <= sigma_a.
[[nodiscard]] PropertyReport check_ordering(const Decomposition& d, double tol = kPropertyTol);

// Distinct slices have vanishing one-sided inner products on the sides the
// variant guarantees: TS left at mode 1 and right at mode N, L left at mode 1,
// R right at mode N. Residuals are |<.,.>| / ||S||^2.
[[nodiscard]] PropertyReport check_orthogonality(const Decomposition& d, double tol = kPropertyTol);

// |Re<S_a, S_b>| / ||S||^2 over every mode, both sides.
[[nodiscard]] PropertyReport check_weak_orthogonality(const Decomposition& d, double tol = kPropertyTol);

// Largest |<S_a, S_b>| / ||S||^2 over distinct slices at one mode and side.
[[nodiscard]] double max_slice_inner(const QTensor& core, std::size_t k, Side side);
// The inner product of two slices at mode k (1-based alpha, beta).
[[nodiscard]] Quaternion slice_inner(const QTensor& core, std::size_t k, std::size_t alpha, std::size_t beta,
                                     Side side);

// One TS round with the residuals of both truncated SVDs. `before` is the
// tensor entering the round and `after` the one leaving it.
struct ResidualRound {
    std::size_t left_mode = 0;   // 0 for the standalone right step of odd N
    std::size_t right_mode = 0;
    QTensor before;
    QTensor after;
    std::optional<QMatrix> u_hat;
    QMatrix v_hat;
    std::optional<QTensor> el;  // discarded left part, folded
    QTensor er;                 // discarded right part, folded
};

struct ResidualSet {
    std::vector<ResidualRound> rounds;  // in processing order
    Decomposition decomposition;
};

// Re-runs the TS algorithm keeping the discarded SVD parts:
// E^L_k from U~ S~ V^H of the left unfolding, E^R from U S~ V~^H of the right.
[[nodiscard]] ResidualSet residual_tensors(const QTensor& t, const TruncationSpec& spec);

// Sum of ||E^L_k||^2 + ||U_k^H x_k E^R||^2 over rounds (plus ||E^R||^2 for a
// standalone step): the exact squared error of the truncated TS decomposition.
[[nodiscard]] double error_identity_sum(const ResidualSet& r);

// Worst relative mismatch of
//   U_k x_k^L after x^R V^H == before - E^L - U_k U_k^H x_k^L E^R
// over the paired rounds.
[[nodiscard]] double round_identity_residual(const ResidualSet& r);

// Worked examples on the 3x3x3x3 fixture. Both return one report per
// printed quantity.
[[nodiscard]] std::vector<PropertyReport> run_example1(const QTensor& fixture);
[[nodiscard]] std::vector<PropertyReport> run_example2(const QTensor& fixture);

// Untruncated TS, L and R decompositions of `count` random tensors (orders
// 2 to 4, dimensions 1 to 6): ordering, orthogonality, weak orthogonality and
// reconstruction reports for each.
[[nodiscard]] std::vector<PropertyReport> run_random_battery(std::uint64_t seed, std::size_t count);

}  // namespace qhosvd
