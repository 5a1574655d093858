#include "qhosvd/qsvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qhosvd/errors.hpp"

namespace qhosvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Singular values closer than this (relative to the largest) are treated as
// one cluster when extracting quaternion vectors from the complex basis.
constexpr double kClusterTol = 1e-12;

// A candidate whose component outside the accepted span is below this norm
// is considered dependent. Legitimate candidates sit near 1, dependent ones
// near machine precision.
constexpr double kAcceptTol = 0.05;

using QVector = std::vector<Quaternion>;

double col_norm2(const CMatrix& x, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) s += std::norm(x(i, j));
    return s;
}

// x_i^H x_j
Complex col_dot(const CMatrix& x, std::size_t i, std::size_t j) {
    Complex s{};
    for (std::size_t r = 0; r < x.rows; ++r) s += std::conj(x(r, i)) * x(r, j);
    return s;
}

CMatrix identity_c(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

// R factor of a Householder QR of a tall matrix (rows >= cols).
CMatrix householder_r(CMatrix a) {
    const std::size_t p = a.rows;
    const std::size_t q = a.cols;
    std::vector<Complex> v;
    for (std::size_t k = 0; k < q; ++k) {
        double nx2 = 0.0;
        for (std::size_t i = k; i < p; ++i) nx2 += std::norm(a(i, k));
        if (nx2 == 0.0) continue;
        const double nx = std::sqrt(nx2);
        const Complex x0 = a(k, k);
        const double ax0 = std::abs(x0);
        const Complex phase = ax0 == 0.0 ? Complex{1.0} : x0 / ax0;
        const Complex alpha = -phase * nx;

        v.assign(p - k, Complex{});
        v[0] = x0 - alpha;
        for (std::size_t i = k + 1; i < p; ++i) v[i - k] = a(i, k);
        double vn2 = 0.0;
        for (const auto& e : v) vn2 += std::norm(e);
        if (vn2 == 0.0) continue;

        for (std::size_t j = k; j < q; ++j) {
            Complex s{};
            for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * a(k + i, j);
            s *= 2.0 / vn2;
            for (std::size_t i = 0; i < v.size(); ++i) a(k + i, j) -= v[i] * s;
        }
    }
    CMatrix r(q, q);
    for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t i = 0; i <= j; ++i) r(i, j) = a(i, j);
    }
    return r;
}

struct JacobiOutput {
    CMatrix z;                  // accumulated right rotations (unitary)
    std::vector<double> norms;  // final column norms of x * z
};

// Cyclic one-sided Jacobi: rotates column pairs of x until every pair is
// orthogonal to within tol relative to the product of their norms.
JacobiOutput one_sided_jacobi(CMatrix x) {
    const std::size_t n = x.cols;
    CMatrix z = identity_c(n);
    const double tol = kEps * std::sqrt(static_cast<double>(std::max<std::size_t>(x.rows, 1)));

    bool converged = false;
    double worst = 0.0;
    for (int sweep = 0; sweep < kJacobiSweepCap && !converged; ++sweep) {
        bool rotated = false;
        worst = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double a = col_norm2(x, i);
                const double b = col_norm2(x, j);
                if (a == 0.0 || b == 0.0) continue;
                const Complex c = col_dot(x, i, j);
                const double ac = std::abs(c);
                const double rel = ac / (std::sqrt(a) * std::sqrt(b));
                if (!(rel > tol)) continue;
                worst = std::max(worst, rel);
                rotated = true;

                const Complex e = c / ac;
                const double zeta = (b - a) / (2.0 * ac);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                const Complex sn_ce = sn * std::conj(e);
                const Complex sn_e = sn * e;

                auto rotate = [&](CMatrix& m) {
                    for (std::size_t r = 0; r < m.rows; ++r) {
                        const Complex xi = m(r, i);
                        const Complex xj = m(r, j);
                        m(r, i) = cs * xi - sn_ce * xj;
                        m(r, j) = sn_e * xi + cs * xj;
                    }
                };
                rotate(x);
                rotate(z);
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        std::ostringstream os;
        os << "qsvd: Jacobi iteration did not converge in " << kJacobiSweepCap
           << " sweeps (off-diagonal residual " << worst << ")";
        throw ConvergenceError(os.str(), worst);
    }

    JacobiOutput out{std::move(z), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) out.norms[j] = std::sqrt(col_norm2(x, j));
    return out;
}

JacobiOutput jacobi_svd_right(const CMatrix& x) {
    if (x.rows >= 2 * x.cols) return one_sided_jacobi(householder_r(x));
    return one_sided_jacobi(x);
}

std::vector<std::size_t> descending_order(const std::vector<double>& s) {
    std::vector<std::size_t> idx(s.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });
    return idx;
}

// ---- quaternion vector helpers -------------------------------------------

double vnorm(const QVector& v) {
    double s = 0.0;
    for (const auto& q : v) s += q.norm2();
    return std::sqrt(s);
}

// Removes the components of w along each (orthonormal) basis vector; the
// coefficient q^H w multiplies from the right.
void project_out(QVector& w, const QVector& q) {
    Quaternion coef;
    for (std::size_t r = 0; r < w.size(); ++r) coef += qmul(qconj(q[r]), w[r]);
    for (std::size_t r = 0; r < w.size(); ++r) w[r] -= qmul(q[r], coef);
}

void orthogonalize(QVector& w, const std::vector<QVector>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) project_out(w, q);
    }
}

// Pivoted Gram-Schmidt: repeatedly accepts the candidate with the largest
// component outside span(basis) until `limit` vectors are in the basis or
// no candidate is independent. Returns the number accepted.
std::size_t absorb(std::vector<QVector> candidates, std::vector<QVector>& basis, std::size_t limit) {
    for (auto& c : candidates) orthogonalize(c, basis);
    std::vector<bool> used(candidates.size(), false);
    std::size_t accepted = 0;
    while (basis.size() < limit) {
        std::size_t best = candidates.size();
        double best_norm = kAcceptTol;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (used[c]) continue;
            const double nrm = vnorm(candidates[c]);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = c;
            }
        }
        if (best == candidates.size()) break;
        used[best] = true;
        QVector w = candidates[best];
        orthogonalize(w, basis);
        const double nrm = vnorm(w);
        for (auto& q : w) q *= 1.0 / nrm;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (!used[c]) project_out(candidates[c], w);
        }
        basis.push_back(std::move(w));
        ++accepted;
    }
    return accepted;
}

std::vector<QVector> standard_basis(std::size_t n) {
    std::vector<QVector> e(n, QVector(n));
    for (std::size_t i = 0; i < n; ++i) e[i][i] = 1.0;
    return e;
}

// Complex column [a; c] (length 2n) -> quaternion column a - conj(c) j.
QVector to_quaternion_column(const CMatrix& z, std::size_t col, std::size_t n) {
    QVector v(n);
    for (std::size_t r = 0; r < n; ++r) {
        const Complex a = z(r, col);
        const Complex c = z(n + r, col);
        v[r] = Quaternion{a.real(), a.imag(), -c.real(), c.imag()};
    }
    return v;
}

QMatrix from_columns(const std::vector<QVector>& cols, std::size_t rows) {
    QMatrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) std::copy(cols[j].begin(), cols[j].end(), m.col(j).begin());
    return m;
}

// SVD of a matrix with rows >= cols, before phase normalization.
SVDResult qsvd_tall(const QMatrix& a, SvdShape shape) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    const JacobiOutput jac = jacobi_svd_right(complex_embedding(a));
    const auto order = descending_order(jac.norms);
    const double smax = jac.norms[order.front()];

    // Right singular vectors: every quaternion singular vector appears in the
    // complex basis twice (v and v*j), so take one representative per pair.
    // Within a cluster of equal singular values the complex basis can mix
    // several quaternion vectors; pivoted Gram-Schmidt untangles them.
    std::vector<QVector> vcols;
    std::size_t start = 0;
    while (start < order.size() && vcols.size() < n) {
        std::size_t end = start + 1;
        while (end < order.size() &&
               jac.norms[order[end - 1]] - jac.norms[order[end]] <= kClusterTol * smax) {
            ++end;
        }
        std::vector<QVector> cand;
        for (std::size_t t = start; t < end; ++t) cand.push_back(to_quaternion_column(jac.z, order[t], n));
        absorb(std::move(cand), vcols, n);
        start = end;
    }
    if (vcols.size() < n) absorb(standard_basis(n), vcols, n);

    QMatrix v = from_columns(vcols, n);
    QMatrix b = matmul(a, v);

    std::vector<double> sigma(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (const auto& q : b.col(k)) s += q.norm2();
        sigma[k] = std::sqrt(s);
    }
    const auto perm = descending_order(sigma);
    {
        QMatrix vs(n, n);
        QMatrix bs(m, n);
        std::vector<double> ss(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::copy(v.col(perm[k]).begin(), v.col(perm[k]).end(), vs.col(k).begin());
            std::copy(b.col(perm[k]).begin(), b.col(perm[k]).end(), bs.col(k).begin());
            ss[k] = sigma[perm[k]];
        }
        v = std::move(vs);
        b = std::move(bs);
        sigma = std::move(ss);
    }

    // Left singular vectors u_k = A v_k / sigma_k, re-orthogonalized; slots
    // whose direction is numerically undefined are completed afterwards.
    std::vector<QVector> ubasis;
    std::vector<std::size_t> slot_of;  // basis index -> U column
    std::vector<std::size_t> empty_slots;
    for (std::size_t k = 0; k < n; ++k) {
        if (sigma[k] > 0.0) {
            QVector u(b.col(k).begin(), b.col(k).end());
            for (auto& q : u) q *= 1.0 / sigma[k];
            orthogonalize(u, ubasis);
            const double nrm = vnorm(u);
            if (nrm > 0.5) {
                for (auto& q : u) q *= 1.0 / nrm;
                ubasis.push_back(std::move(u));
                slot_of.push_back(k);
                continue;
            }
        }
        empty_slots.push_back(k);
    }
    const std::size_t ucols = shape == SvdShape::full ? m : n;
    for (std::size_t k = n; k < ucols; ++k) empty_slots.push_back(k);
    const std::size_t filled = ubasis.size();
    if (filled < ucols) absorb(standard_basis(m), ubasis, ucols);
    for (std::size_t t = filled; t < ubasis.size(); ++t) slot_of.push_back(empty_slots[t - filled]);

    QMatrix u(m, ucols);
    for (std::size_t t = 0; t < ubasis.size(); ++t) {
        std::copy(ubasis[t].begin(), ubasis[t].end(), u.col(slot_of[t]).begin());
    }
    return {std::move(u), std::move(sigma), std::move(v)};
}

std::size_t largest_entry(std::span<const Quaternion> col) {
    std::size_t best = 0;
    double best_mod = -1.0;
    for (std::size_t r = 0; r < col.size(); ++r) {
        const double mod = col[r].norm2();
        if (mod > best_mod) {
            best_mod = mod;
            best = r;
        }
    }
    return best;
}

// Makes the largest-modulus entry of a column real and nonnegative by right
// multiplication with a unit quaternion; returns that unit's conjugate.
Quaternion normalize_phase(std::span<Quaternion> col) {
    const std::size_t r = largest_entry(col);
    const double mod = qmodulus(col[r]);
    if (mod == 0.0) return Quaternion{1.0};
    const Quaternion phase_conj = qconj(col[r] * (1.0 / mod));
    for (auto& q : col) q = qmul(q, phase_conj);
    col[r] = Quaternion{mod};
    return phase_conj;
}

}  // namespace

CMatrix cmatmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols != b.rows) throw ShapeError("cmatmul: inner dimensions differ");
    CMatrix c(a.rows, b.cols);
    for (std::size_t j = 0; j < b.cols; ++j) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const Complex bkj = b(k, j);
            for (std::size_t i = 0; i < a.rows; ++i) c(i, j) += a(i, k) * bkj;
        }
    }
    return c;
}

CMatrix cadjoint(const CMatrix& a) {
    CMatrix t(a.cols, a.rows);
    for (std::size_t j = 0; j < a.cols; ++j) {
        for (std::size_t i = 0; i < a.rows; ++i) t(j, i) = std::conj(a(i, j));
    }
    return t;
}

double cmax_abs_diff(const CMatrix& a, const CMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ShapeError("cmax_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

CMatrix complex_embedding(const QMatrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    CMatrix x(2 * m, 2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            const Quaternion& q = a(i, j);
            const Complex c1{q.w, q.x};
            const Complex c2{q.y, q.z};
            x(i, j) = c1;
            x(i, n + j) = c2;
            x(m + i, j) = -std::conj(c2);
            x(m + i, n + j) = std::conj(c1);
        }
    }
    return x;
}

ComplexSVD complex_svd(const CMatrix& a) {
    const bool wide = a.rows < a.cols;
    const CMatrix x = wide ? cadjoint(a) : a;
    const std::size_t n = x.cols;

    const JacobiOutput jac = jacobi_svd_right(x);
    const auto order = descending_order(jac.norms);

    ComplexSVD out;
    out.sigma.resize(n);
    CMatrix v(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.sigma[k] = jac.norms[order[k]];
        for (std::size_t r = 0; r < n; ++r) v(r, k) = jac.z(r, order[k]);
    }
    CMatrix u = cmatmul(x, v);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = out.sigma[k];
        for (std::size_t r = 0; r < u.rows; ++r) u(r, k) = s > 0.0 ? u(r, k) / s : Complex{};
    }
    if (wide) {
        out.u = std::move(v);
        out.v = std::move(u);
    } else {
        out.u = std::move(u);
        out.v = std::move(v);
    }
    return out;
}

SVDResult qsvd(const QMatrix& a, SvdShape shape) {
    if (a.empty()) throw ShapeError("qsvd: empty matrix");
    for (const auto& q : a.data()) {
        if (!std::isfinite(q.w) || !std::isfinite(q.x) || !std::isfinite(q.y) || !std::isfinite(q.z)) {
            throw DataError("qsvd: matrix contains non-finite entries");
        }
    }

    SVDResult res;
    if (a.rows() >= a.cols()) {
        res = qsvd_tall(a, shape);
    } else {
        // A^H = U' S V'^H  =>  A = V' S U'^H
        SVDResult t = qsvd_tall(hermitian(a), shape);
        res = {std::move(t.v), std::move(t.sigma), std::move(t.u)};
    }

    const std::size_t r = res.sigma.size();
    for (std::size_t k = 0; k < res.u.cols(); ++k) {
        const Quaternion comp = normalize_phase(res.u.col(k));
        if (k < r) {
            for (auto& q : res.v.col(k)) q = qmul(q, comp);
        }
    }
    for (std::size_t k = r; k < res.v.cols(); ++k) normalize_phase(res.v.col(k));
    return res;
}

QMatrix svd_reconstruct(const SVDResult& s) {
    QMatrix us = s.u.leading_cols(s.sigma.size());
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
        for (auto& q : us.col(k)) q *= s.sigma[k];
    }
    return matmul(us, hermitian(s.v.leading_cols(s.sigma.size())));
}

}  // namespace qhosvd
