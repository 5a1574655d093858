#include "qhosvd/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qhosvd/errors.hpp"
#include "qhosvd/parallel.hpp"

namespace qhosvd {

namespace {

using Clock = std::chrono::steady_clock;

class PhaseTimer {
public:
    PhaseTimer(PhaseTimes* times, double PhaseTimes::*field) : times_(times), field_(field), start_(Clock::now()) {}
    ~PhaseTimer() {
        if (times_) times_->*field_ += std::chrono::duration<double>(Clock::now() - start_).count();
    }
    PhaseTimer(const PhaseTimer&) = delete;
    PhaseTimer& operator=(const PhaseTimer&) = delete;

private:
    PhaseTimes* times_;
    double PhaseTimes::*field_;
    Clock::time_point start_;
};

struct SideSvd {
    QMatrix factor;  // leading singular vectors
    std::vector<double> sigma;
};

// The full basis is only needed when the rank exceeds min(rows, cols), and
// then the factor side is the smaller one, so completing it stays cheap.
SvdShape shape_for(const QMatrix& x, std::size_t rank) {
    return rank <= std::min(x.rows(), x.cols()) ? SvdShape::thin : SvdShape::full;
}

SideSvd left_step(const QTensor& c, std::size_t k, std::size_t rank) {
    const QMatrix x = unfold(c, k, Side::left);
    auto s = qsvd(x, shape_for(x, rank));
    return {s.u.leading_cols(rank), std::move(s.sigma)};
}

SideSvd right_step(const QTensor& c, std::size_t k, std::size_t rank) {
    const QMatrix x = unfold(c, k, Side::right);
    auto s = qsvd(x, shape_for(x, rank));
    return {s.v.leading_cols(rank), std::move(s.sigma)};
}

Decomposition start(Variant v, const QTensor& t, const TruncationSpec& spec) {
    if (t.empty()) throw ShapeError("decompose: empty tensor");
    Decomposition d;
    d.variant = v;
    d.original_dims = t.dims();
    d.ranks = spec.resolve(t.dims());
    d.spectra.resize(t.order());
    return d;
}

}  // namespace

std::string to_string(Variant v) {
    switch (v) {
        case Variant::ts: return "ts";
        case Variant::l: return "l";
        case Variant::r: return "r";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "ts") return Variant::ts;
    if (s == "l") return Variant::l;
    if (s == "r") return Variant::r;
    throw SpecError("unknown variant '" + s + "' (expected ts, l or r)");
}

TruncationSpec TruncationSpec::from_ranks(std::vector<std::size_t> ranks) {
    TruncationSpec s;
    s.ranks_ = std::move(ranks);
    return s;
}

TruncationSpec TruncationSpec::from_ratios(std::vector<double> ratios) {
    TruncationSpec s;
    s.ratios_ = std::move(ratios);
    return s;
}

std::vector<std::size_t> TruncationSpec::resolve(const std::vector<std::size_t>& dims) const {
    if (is_full()) return dims;
    const std::size_t n = ranks_ ? ranks_->size() : ratios_->size();
    if (n != dims.size()) {
        std::ostringstream os;
        os << "truncation spec has " << n << " entries but the tensor has order " << dims.size();
        throw SpecError(os.str());
    }
    std::vector<std::size_t> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (ranks_) {
            const std::size_t r = (*ranks_)[k];
            if (r < 1 || r > dims[k]) {
                std::ostringstream os;
                os << "rank " << r << " for mode " << k + 1 << " must lie in 1.." << dims[k];
                throw SpecError(os.str());
            }
            out[k] = r;
        } else {
            const double q = (*ratios_)[k];
            if (!(q > 0.0 && q <= 1.0)) {
                std::ostringstream os;
                os << "ratio " << q << " for mode " << k + 1 << " must lie in (0, 1]";
                throw SpecError(os.str());
            }
            const auto r = static_cast<std::size_t>(std::llround(q * static_cast<double>(dims[k])));
            out[k] = std::clamp<std::size_t>(r, 1, dims[k]);
        }
    }
    return out;
}

Side Decomposition::factor_side(std::size_t k) const {
    if (k < 1 || k > order()) throw ModeError("Decomposition: mode out of range");
    switch (variant) {
        case Variant::l: return Side::left;
        case Variant::r: return Side::right;
        case Variant::ts: return k < first_right_mode() ? Side::left : Side::right;
    }
    return Side::left;
}

const QMatrix& Decomposition::factor(std::size_t k) const {
    const Side s = factor_side(k);
    const auto& list = s == Side::left ? left_factors : right_factors;
    const std::size_t idx = s == Side::left ? k - 1 : k - first_right_mode();
    if (idx >= list.size()) throw InternalStateError("Decomposition: factor for mode " + std::to_string(k) + " missing");
    return list[idx];
}

Decomposition ts_qhosvd(const QTensor& t, const TruncationSpec& spec, PhaseTimes* times) {
    Decomposition d = start(Variant::ts, t, spec);
    const std::size_t n = t.order();
    const std::size_t m = n / 2;
    d.left_factors.resize(m);
    d.right_factors.resize(n - m);
    QTensor c = t;

    if (n % 2 == 1) {
        const std::size_t k = m + 1;
        SideSvd r;
        {
            PhaseTimer pt(times, &PhaseTimes::svd_seconds);
            r = right_step(c, k, d.ranks[k - 1]);
        }
        PhaseTimer pt(times, &PhaseTimes::product_seconds);
        c = rmode_product(c, k, r.factor);
        d.spectra[k - 1] = {k, Side::right, std::move(r.sigma)};
        d.right_factors[0] = std::move(r.factor);
    }

    for (std::size_t k = m; k >= 1; --k) {
        const std::size_t kr = n - k + 1;
        SideSvd l;
        SideSvd r;
        {
            PhaseTimer pt(times, &PhaseTimes::svd_seconds);
            run_pair([&] { l = left_step(c, k, d.ranks[k - 1]); },
                     [&] { r = right_step(c, kr, d.ranks[kr - 1]); });
        }
        {
            PhaseTimer pt(times, &PhaseTimes::product_seconds);
            c = rmode_product(lmode_product(hermitian(l.factor), k, c), kr, r.factor);
        }
        d.spectra[k - 1] = {k, Side::left, std::move(l.sigma)};
        d.spectra[kr - 1] = {kr, Side::right, std::move(r.sigma)};
        d.left_factors[k - 1] = std::move(l.factor);
        d.right_factors[kr - d.first_right_mode()] = std::move(r.factor);
    }
    d.core = std::move(c);
    return d;
}

Decomposition l_qhosvd(const QTensor& t, const TruncationSpec& spec, PhaseTimes* times) {
    Decomposition d = start(Variant::l, t, spec);
    const std::size_t n = t.order();
    d.left_factors.resize(n);
    QTensor c = t;
    for (std::size_t k = n; k >= 1; --k) {
        SideSvd l;
        {
            PhaseTimer pt(times, &PhaseTimes::svd_seconds);
            l = left_step(c, k, d.ranks[k - 1]);
        }
        {
            PhaseTimer pt(times, &PhaseTimes::product_seconds);
            c = lmode_product(hermitian(l.factor), k, c);
        }
        d.spectra[k - 1] = {k, Side::left, std::move(l.sigma)};
        d.left_factors[k - 1] = std::move(l.factor);
    }
    d.core = std::move(c);
    return d;
}

Decomposition r_qhosvd(const QTensor& t, const TruncationSpec& spec, PhaseTimes* times) {
    Decomposition d = start(Variant::r, t, spec);
    const std::size_t n = t.order();
    d.right_factors.resize(n);
    QTensor c = t;
    for (std::size_t k = 1; k <= n; ++k) {
        SideSvd r;
        {
            PhaseTimer pt(times, &PhaseTimes::svd_seconds);
            r = right_step(c, k, d.ranks[k - 1]);
        }
        {
            PhaseTimer pt(times, &PhaseTimes::product_seconds);
            c = rmode_product(c, k, r.factor);
        }
        d.spectra[k - 1] = {k, Side::right, std::move(r.sigma)};
        d.right_factors[k - 1] = std::move(r.factor);
    }
    d.core = std::move(c);
    return d;
}

Decomposition decompose(Variant v, const QTensor& t, const TruncationSpec& spec, PhaseTimes* times) {
    switch (v) {
        case Variant::ts: return ts_qhosvd(t, spec, times);
        case Variant::l: return l_qhosvd(t, spec, times);
        case Variant::r: return r_qhosvd(t, spec, times);
    }
    throw SpecError("decompose: unknown variant");
}

QTensor reconstruct(const Decomposition& d) {
    const std::size_t n = d.order();
    if (d.core.empty() || d.core.order() != n) throw InternalStateError("reconstruct: decomposition has no core");
    QTensor y = d.core;
    switch (d.variant) {
        case Variant::ts: {
            const std::size_t m = n / 2;
            for (std::size_t k = 1; k <= m; ++k) {
                y = lmode_product(d.factor(k), k, y);
                y = rmode_product(y, n - k + 1, hermitian(d.factor(n - k + 1)));
            }
            if (n % 2 == 1) y = rmode_product(y, m + 1, hermitian(d.factor(m + 1)));
            break;
        }
        case Variant::l:
            for (std::size_t k = 1; k <= n; ++k) y = lmode_product(d.factor(k), k, y);
            break;
        case Variant::r:
            for (std::size_t k = n; k >= 1; --k) y = rmode_product(y, k, hermitian(d.factor(k)));
            break;
    }
    if (y.dims() != d.original_dims) throw ShapeError("reconstruct: factors do not restore the original shape");
    return y;
}

std::vector<ModeTail> mode_tails(const Decomposition& d) {
    if (d.spectra.size() != d.order() || d.ranks.size() != d.order()) {
        throw InternalStateError("tail_energy: decomposition lacks spectra or ranks");
    }
    std::vector<ModeTail> tails;
    for (std::size_t k = 1; k <= d.order(); ++k) {
        const auto& s = d.spectra[k - 1];
        if (s.mode != k) throw InternalStateError("tail_energy: spectrum for mode " + std::to_string(k) + " missing");
        double e = 0.0;
        for (std::size_t i = d.ranks[k - 1]; i < s.sigma.size(); ++i) e += s.sigma[i] * s.sigma[i];
        tails.push_back({k, e});
    }
    return tails;
}

double tail_energy(const Decomposition& d) {
    double e = 0.0;
    for (const auto& t : mode_tails(d)) e += t.energy;
    return e;
}

ErrorReport error_report(const QTensor& t, const Decomposition& d) {
    if (t.dims() != d.original_dims) throw ShapeError("error_report: tensor shape differs from the decomposed one");
    ErrorReport r;
    r.abs_error = fro_norm(t - reconstruct(d));
    const double tn = fro_norm(t);
    r.rel_error = tn > 0.0 ? r.abs_error / tn : 0.0;
    r.sq_error = r.abs_error * r.abs_error;
    r.per_mode_tails = mode_tails(d);
    for (const auto& m : r.per_mode_tails) r.tail_bound += m.energy;
    // The bound is exact arithmetic; allow roundoff relative to ||T||^2 when
    // both sides are at noise level.
    r.within_bound = r.sq_error <= r.tail_bound * (1.0 + 1e-8) + 1e-24 * tn * tn;
    return r;
}

}  // namespace qhosvd
