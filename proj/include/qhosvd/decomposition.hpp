#pragma once

/**
 * Two-sided (TS), left (L) and right (R) quaternion higher-order SVDs with
 * optional truncation.
 *
 * TS, for an order-N tensor with m = floor(N/2): rounds k = m, ..., 1 each
 * take the SVDs of the left mode-k and right mode-(N-k+1) unfoldings of the
 * current tensor and update it as U_k^H x_k^L C x_{N-k+1}^R V_{N-k+1}. When N
 * is odd, mode m+1 is first handled by a standalone right step. Modes 1..m
 * therefore carry left factors and modes m+1..N right factors.
 *
 * L processes k = N, ..., 1 with left factors only; R processes k = 1, ..., N
 * with right factors only.
 */

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qhosvd/qmatrix.hpp"
#include "qhosvd/qsvd.hpp"
#include "qhosvd/qtensor.hpp"

namespace qhosvd {

enum class Variant { ts, l, r };

[[nodiscard]] std::string to_string(Variant v);
// Accepts "ts", "l", "r"; throws SpecError otherwise.
[[nodiscard]] Variant parse_variant(const std::string& s);

// Per-mode target ranks, or per-mode ratios resolved as
// clamp(round(ratio * I_k), 1, I_k). An empty spec keeps every mode at full
// rank.
class TruncationSpec {
public:
    TruncationSpec() = default;
    static TruncationSpec full() { return {}; }
    static TruncationSpec from_ranks(std::vector<std::size_t> ranks);
    static TruncationSpec from_ratios(std::vector<double> ratios);

    [[nodiscard]] bool is_full() const noexcept { return !ranks_ && !ratios_; }
    [[nodiscard]] const std::optional<std::vector<std::size_t>>& ranks() const noexcept { return ranks_; }
    [[nodiscard]] const std::optional<std::vector<double>>& ratios() const noexcept { return ratios_; }

    // Throws SpecError (naming the offending mode) when the spec does not fit.
    [[nodiscard]] std::vector<std::size_t> resolve(const std::vector<std::size_t>& dims) const;

private:
    std::optional<std::vector<std::size_t>> ranks_;
    std::optional<std::vector<double>> ratios_;
};

struct ModeSpectrum {
    std::size_t mode = 0;  // 1-based
    Side side = Side::left;
    std::vector<double> sigma;  // full spectrum, descending
};

struct Decomposition {
    Variant variant = Variant::ts;
    QTensor core;
    // left_factors[i] belongs to mode i+1.
    std::vector<QMatrix> left_factors;
    // right_factors[i] belongs to mode first_right_mode() + i.
    std::vector<QMatrix> right_factors;
    // spectra[k-1] is the spectrum recorded for mode k.
    std::vector<ModeSpectrum> spectra;
    std::vector<std::size_t> original_dims;
    std::vector<std::size_t> ranks;

    [[nodiscard]] std::size_t order() const noexcept { return original_dims.size(); }
    [[nodiscard]] std::size_t first_right_mode() const noexcept {
        return variant == Variant::r ? 1 : order() / 2 + 1;
    }
    // Factor used at mode k, with the side it acts from.
    [[nodiscard]] Side factor_side(std::size_t k) const;
    [[nodiscard]] const QMatrix& factor(std::size_t k) const;
};

// Wall-clock seconds spent in the SVDs and in the mode products.
struct PhaseTimes {
    double svd_seconds = 0.0;
    double product_seconds = 0.0;
};

[[nodiscard]] Decomposition ts_qhosvd(const QTensor& t, const TruncationSpec& spec = {}, PhaseTimes* times = nullptr);
[[nodiscard]] Decomposition l_qhosvd(const QTensor& t, const TruncationSpec& spec = {}, PhaseTimes* times = nullptr);
[[nodiscard]] Decomposition r_qhosvd(const QTensor& t, const TruncationSpec& spec = {}, PhaseTimes* times = nullptr);
[[nodiscard]] Decomposition decompose(Variant v, const QTensor& t, const TruncationSpec& spec = {},
                                      PhaseTimes* times = nullptr);

[[nodiscard]] QTensor reconstruct(const Decomposition& d);

struct ModeTail {
    std::size_t mode = 0;
    double energy = 0.0;
};

// Sum over modes of the squared singular values beyond the kept rank.
[[nodiscard]] double tail_energy(const Decomposition& d);
[[nodiscard]] std::vector<ModeTail> mode_tails(const Decomposition& d);

struct ErrorReport {
    double abs_error = 0.0;
    double rel_error = 0.0;
    double sq_error = 0.0;
    double tail_bound = 0.0;
    std::vector<ModeTail> per_mode_tails;
    // False when sq_error exceeds tail_bound by more than 1e-8 relative.
    // Reported, never thrown.
    bool within_bound = true;
};

[[nodiscard]] ErrorReport error_report(const QTensor& t, const Decomposition& d);

}  // namespace qhosvd
