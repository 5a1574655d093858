#include "qhosvd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "qhosvd/errors.hpp"

namespace qhosvd {

namespace {

double safe_scale(double s) { return s > 0.0 ? s : 1.0; }

PropertyReport finish(std::string name, double tol, std::vector<PropertyDetail> details) {
    PropertyReport r;
    r.name = std::move(name);
    r.tolerance = tol;
    for (const auto& d : details) r.residual = std::max(r.residual, d.residual);
    r.details = std::move(details);
    r.pass = r.residual <= tol;
    return r;
}

PropertyReport value_check(std::string name, double value, double expected, double tol) {
    PropertyReport r;
    r.name = std::move(name);
    r.value = value;
    r.residual = std::abs(value - expected);
    r.tolerance = tol;
    r.pass = r.residual <= tol;
    return r;
}

const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

std::string mode_label(std::size_t k, Side s) {
    return "mode " + std::to_string(k) + " " + side_name(s);
}

bool is_full(const Decomposition& d) { return d.ranks == d.original_dims; }

}  // namespace

std::string to_text(const PropertyReport& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
    if (r.value) os << "  value=" << std::setprecision(6) << *r.value;
    os << "  residual=" << std::scientific << std::setprecision(3) << r.residual << "  tol=" << r.tolerance;
    return os.str();
}

std::string to_json_line(const PropertyReport& r) {
    nlohmann::ordered_json j;
    j["property"] = r.name;
    j["pass"] = r.pass;
    j["residual"] = r.residual;
    j["tolerance"] = r.tolerance;
    if (r.value) j["value"] = *r.value;
    if (!r.details.empty()) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& d : r.details) arr.push_back({{"label", d.label}, {"residual", d.residual}});
        j["details"] = std::move(arr);
    }
    return j.dump();
}

Quaternion slice_inner(const QTensor& core, std::size_t k, std::size_t alpha, std::size_t beta, Side side) {
    return inner(subtensor(core, k, alpha), subtensor(core, k, beta), side);
}

double max_slice_inner(const QTensor& core, std::size_t k, Side side) {
    const double scale = safe_scale(fro_norm(core) * fro_norm(core));
    double worst = 0.0;
    for (std::size_t a = 1; a <= core.dim(k); ++a)
        for (std::size_t b = a + 1; b <= core.dim(k); ++b)
            worst = std::max(worst, qmodulus(slice_inner(core, k, a, b, side)) / scale);
    return worst;
}

PropertyReport check_ordering(const Decomposition& d, double tol) {
    const QTensor& s = d.core;
    const double scale = safe_scale(fro_norm(s));
    const bool full = is_full(d);
    std::vector<PropertyDetail> details;
    for (std::size_t k = 1; k <= s.order(); ++k) {
        const auto& sigma = d.spectra.at(k - 1).sigma;
        double worst = 0.0;
        double prev = 0.0;
        for (std::size_t a = 1; a <= s.dim(k); ++a) {
            const double n = fro_norm(subtensor(s, k, a));
            const double expect = a <= sigma.size() ? sigma[a - 1] : 0.0;
            if (full) {
                worst = std::max(worst, std::abs(n - expect) / scale);
                if (a > 1) worst = std::max(worst, (n - prev) / scale);
            } else {
                worst = std::max(worst, (n - expect) / scale);
            }
            prev = n;
        }
        details.push_back({"mode " + std::to_string(k), worst});
    }
    return finish("ordering", tol, std::move(details));
}

PropertyReport check_orthogonality(const Decomposition& d, double tol) {
    const std::size_t n = d.core.order();
    std::vector<std::pair<std::size_t, Side>> checks;
    if (d.variant != Variant::r) checks.emplace_back(1, Side::left);
    if (d.variant != Variant::l) checks.emplace_back(n, Side::right);
    std::vector<PropertyDetail> details;
    for (auto [k, side] : checks) details.push_back({mode_label(k, side), max_slice_inner(d.core, k, side)});
    return finish("orthogonality", tol, std::move(details));
}

PropertyReport check_weak_orthogonality(const Decomposition& d, double tol) {
    const QTensor& s = d.core;
    const double scale = safe_scale(fro_norm(s) * fro_norm(s));
    std::vector<PropertyDetail> details;
    for (std::size_t k = 1; k <= s.order(); ++k) {
        for (Side side : {Side::left, Side::right}) {
            double worst = 0.0;
            for (std::size_t a = 1; a <= s.dim(k); ++a)
                for (std::size_t b = a + 1; b <= s.dim(k); ++b)
                    worst = std::max(worst, std::abs(slice_inner(s, k, a, b, side).w) / scale);
            details.push_back({mode_label(k, side), worst});
        }
    }
    return finish("weak_orthogonality", tol, std::move(details));
}

namespace {

// Discarded part of an SVD: sum over i >= rank of u_i sigma_i v_i^H.
QMatrix discarded(const SVDResult& s, std::size_t rank, std::size_t rows, std::size_t cols) {
    QMatrix e(rows, cols);
    for (std::size_t i = rank; i < s.sigma.size(); ++i) {
        const double sg = s.sigma[i];
        if (sg == 0.0) continue;
        for (std::size_t c = 0; c < cols; ++c) {
            const Quaternion vc = qconj(s.v(c, i)) * sg;
            for (std::size_t r = 0; r < rows; ++r) e(r, c) += s.u(r, i) * vc;
        }
    }
    return e;
}

}  // namespace

ResidualSet residual_tensors(const QTensor& t, const TruncationSpec& spec) {
    ResidualSet out;
    const std::size_t n = t.order();
    const std::size_t m = n / 2;
    const auto ranks = spec.resolve(t.dims());
    QTensor c = t;

    auto right_part = [&](ResidualRound& round, std::size_t k) {
        const QMatrix x = unfold(c, k, Side::right);
        const SVDResult s = qsvd(x, ranks[k - 1] <= std::min(x.rows(), x.cols()) ? SvdShape::thin : SvdShape::full);
        round.right_mode = k;
        round.v_hat = s.v.leading_cols(ranks[k - 1]);
        round.er = fold(discarded(s, ranks[k - 1], x.rows(), x.cols()), k, Side::right, c.dims());
    };

    if (n % 2 == 1) {
        ResidualRound round;
        round.before = c;
        right_part(round, m + 1);
        c = rmode_product(c, m + 1, round.v_hat);
        round.after = c;
        out.rounds.push_back(std::move(round));
    }
    for (std::size_t k = m; k >= 1; --k) {
        ResidualRound round;
        round.before = c;
        round.left_mode = k;
        const QMatrix x = unfold(c, k, Side::left);
        const SVDResult s = qsvd(x, ranks[k - 1] <= std::min(x.rows(), x.cols()) ? SvdShape::thin : SvdShape::full);
        round.u_hat = s.u.leading_cols(ranks[k - 1]);
        round.el = fold(discarded(s, ranks[k - 1], x.rows(), x.cols()), k, Side::left, c.dims());
        right_part(round, n - k + 1);
        c = rmode_product(lmode_product(hermitian(*round.u_hat), k, c), n - k + 1, round.v_hat);
        round.after = c;
        out.rounds.push_back(std::move(round));
    }
    out.decomposition = ts_qhosvd(t, spec);
    return out;
}

double error_identity_sum(const ResidualSet& r) {
    double sum = 0.0;
    for (const auto& round : r.rounds) {
        if (round.el) {
            const double el = fro_norm(*round.el);
            const double er = fro_norm(lmode_product(hermitian(*round.u_hat), round.left_mode, round.er));
            sum += el * el + er * er;
        } else {
            const double er = fro_norm(round.er);
            sum += er * er;
        }
    }
    return sum;
}

double round_identity_residual(const ResidualSet& r) {
    double worst = 0.0;
    for (const auto& round : r.rounds) {
        if (!round.u_hat) continue;
        const std::size_t k = round.left_mode;
        const QTensor lhs = rmode_product(lmode_product(*round.u_hat, k, round.after), round.right_mode,
                                          hermitian(round.v_hat));
        const QMatrix proj = matmul(*round.u_hat, hermitian(*round.u_hat));
        const QTensor rhs = round.before - *round.el - lmode_product(proj, k, round.er);
        worst = std::max(worst, fro_norm(lhs - rhs) / safe_scale(fro_norm(round.before)));
    }
    return worst;
}

namespace {

constexpr double kExampleTol = 5e-3;

// Printed slice norms of the example core, modes 1 to 4.
constexpr double kExample1Norms[4][3] = {
    {12.4550, 10.8534, 9.0081},
    {12.3954, 11.0461, 8.8549},
    {12.2781, 10.6921, 9.4339},
    {12.7434, 10.4284, 9.1063},
};

// Printed one-sided inner products at modes 2 and 3 for slice pairs
// (1,2), (1,3), (2,3); only their moduli are compared.
constexpr double kExample1Inner[2][2][3][3] = {
    // mode 2
    {{{8.939, 6.52, -23.13}, {5.701, -12.55, 11.03}, {3.3036, -4.878, 8.623}},
     {{-11.93, -2.038, -13.68}, {3.362, -15.1, -6.201}, {10.8, 0.7439, -6.862}}},
    // mode 3
    {{{-1.823, 23.94, 9.284}, {-6.529, -6.912, 5.433}, {-12.05, 3.777, -3.913}},
     {{2.717, -8.606, 0.8131}, {4.386, 2.482, 0.8396}, {-4.507, 10.22, 10.68}}},
};

constexpr double kNegativeControlTol = 0.05;

}  // namespace

std::vector<PropertyReport> run_example1(const QTensor& fixture) {
    const Decomposition d = ts_qhosvd(fixture);
    std::vector<PropertyReport> out;
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t a = 1; a <= 3; ++a) {
            out.push_back(value_check("example1.norm.mode" + std::to_string(k) + ".slice" + std::to_string(a),
                                      fro_norm(subtensor(d.core, k, a)), kExample1Norms[k - 1][a - 1],
                                      kExampleTol));
        }
    }
    out.push_back(check_ordering(d));
    out.push_back(check_orthogonality(d));
    out.push_back(check_weak_orthogonality(d));

    const std::pair<std::size_t, std::size_t> pairs[3] = {{1, 2}, {1, 3}, {2, 3}};
    for (std::size_t mi = 0; mi < 2; ++mi) {
        const std::size_t k = mi + 2;
        for (std::size_t si = 0; si < 2; ++si) {
            const Side side = si == 0 ? Side::left : Side::right;
            for (std::size_t p = 0; p < 3; ++p) {
                const auto& e = kExample1Inner[mi][si][p];
                const double printed = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
                const double got = qmodulus(slice_inner(d.core, k, pairs[p].first, pairs[p].second, side));
                PropertyReport r;
                r.name = "example1.nonzero.mode" + std::to_string(k) + "." + side_name(side) + "." +
                         std::to_string(pairs[p].first) + std::to_string(pairs[p].second);
                r.value = got;
                r.residual = std::abs(got - printed) / printed;
                r.tolerance = kNegativeControlTol;
                r.pass = r.residual <= r.tolerance;
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::vector<PropertyReport> run_example2(const QTensor& fixture) {
    const Decomposition d = ts_qhosvd(fixture, TruncationSpec::from_ranks({2, 2, 2, 2}));
    const ErrorReport e = error_report(fixture, d);
    constexpr double kThird[4] = {5.7675, 8.8549, 9.4339, 5.9257};
    std::vector<PropertyReport> out;
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto& sigma = d.spectra[k - 1].sigma;
        out.push_back(value_check("example2.sigma3.mode" + std::to_string(k), sigma.size() > 2 ? sigma[2] : 0.0,
                                  kThird[k - 1], kExampleTol));
    }
    out.push_back(value_check("example2.tail_bound", e.tail_bound, 235.786, 1e-2));
    out.push_back(value_check("example2.sq_error", e.sq_error, 209.7183, 5e-2));
    PropertyReport b;
    b.name = "example2.error_within_bound";
    b.value = e.sq_error;
    b.residual = std::max(0.0, e.sq_error - e.tail_bound);
    b.tolerance = 1e-8 * e.tail_bound;
    b.pass = e.within_bound;
    out.push_back(std::move(b));
    return out;
}

std::vector<PropertyReport> run_random_battery(std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::vector<PropertyReport> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<std::size_t> dims(2 + i % 3);
        for (auto& x : dims) x = dim(rng);
        const QTensor t = random_qtensor(dims, rng);
        const std::string prefix = "random" + std::to_string(i) + ".";
        for (Variant v : {Variant::ts, Variant::l, Variant::r}) {
            const Decomposition d = decompose(v, t, TruncationSpec::full());
            const std::string p = prefix + to_string(v) + ".";
            for (auto r : {check_ordering(d), check_orthogonality(d), check_weak_orthogonality(d)}) {
                r.name = p + r.name;
                out.push_back(std::move(r));
            }
            const ErrorReport e = error_report(t, d);
            PropertyReport rec;
            rec.name = p + "reconstruction";
            rec.residual = e.rel_error;
            rec.tolerance = 1e-10;
            rec.pass = rec.residual <= rec.tolerance;
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace qhosvd
