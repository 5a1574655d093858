#include "qhosvd/qtensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "qhosvd/errors.hpp"

namespace qhosvd {

namespace {

std::size_t product(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string dims_str(const std::vector<std::size_t>& dims) {
    std::ostringstream os;
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "x" : "") << dims[i];
    return os.str();
}

void check_dims(const std::vector<std::size_t>& dims) {
    if (dims.empty()) throw ShapeError("QTensor: order must be at least 1");
    for (auto d : dims) {
        if (d == 0) throw ShapeError("QTensor: dimensions must be positive (" + dims_str(dims) + ")");
    }
}

void check_mode(std::size_t k, std::size_t order, const char* op) {
    if (k < 1 || k > order) {
        std::ostringstream os;
        os << op << ": mode " << k << " out of range 1.." << order;
        throw ModeError(os.str());
    }
}

void require_same_dims(const QTensor& a, const QTensor& b, const char* op) {
    if (a.dims() != b.dims()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + dims_str(a.dims()) + " vs " + dims_str(b.dims()));
    }
}

// Sizes of the index blocks before and after mode k (1-based).
struct Split {
    std::size_t before;
    std::size_t mid;
    std::size_t after;
};

Split split(const std::vector<std::size_t>& dims, std::size_t k) {
    Split s{1, dims[k - 1], 1};
    for (std::size_t l = 0; l < k - 1; ++l) s.before *= dims[l];
    for (std::size_t l = k; l < dims.size(); ++l) s.after *= dims[l];
    return s;
}

}  // namespace

QTensor::QTensor(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.resize(product(dims_));
}

QTensor::QTensor(std::vector<std::size_t> dims, std::vector<Quaternion> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (data_.size() != product(dims_)) throw ShapeError("QTensor: data length does not match dims");
}

QTensor QTensor::from_matrix(const QMatrix& m) {
    return QTensor({m.rows(), m.cols()}, std::vector<Quaternion>(m.data().begin(), m.data().end()));
}

std::size_t QTensor::dim(std::size_t k) const {
    check_mode(k, order(), "QTensor::dim");
    return dims_[k - 1];
}

std::size_t QTensor::linear_index(std::span<const std::size_t> idx) const {
    if (idx.size() != dims_.size()) throw ShapeError("QTensor: index arity does not match order");
    std::size_t lin = 0;
    for (std::size_t l = dims_.size(); l-- > 0;) {
        if (idx[l] >= dims_[l]) throw ModeError("QTensor: index out of range");
        lin = lin * dims_[l] + idx[l];
    }
    return lin;
}

bool QTensor::is_pure() const {
    return std::all_of(data_.begin(), data_.end(), [](const Quaternion& q) { return q.w == 0.0; });
}

QMatrix QTensor::to_matrix() const {
    if (order() != 2) throw ShapeError("QTensor::to_matrix: tensor is not of order 2");
    return QMatrix(dims_[0], dims_[1], data_);
}

QMatrix unfold(const QTensor& t, std::size_t k, Side side) {
    check_mode(k, t.order(), "unfold");
    const auto [before, mid, after] = split(t.dims(), k);
    const auto src = t.data();
    const std::size_t ncols = before * after;
    if (side == Side::left) {
        QMatrix m(mid, ncols);
        for (std::size_t b = 0; b < after; ++b)
            for (std::size_t i = 0; i < mid; ++i)
                for (std::size_t a = 0; a < before; ++a) m(i, a + before * b) = src[a + before * (i + mid * b)];
        return m;
    }
    QMatrix m(ncols, mid);
    for (std::size_t b = 0; b < after; ++b)
        for (std::size_t i = 0; i < mid; ++i)
            for (std::size_t a = 0; a < before; ++a) m(a + before * b, i) = src[a + before * (i + mid * b)];
    return m;
}

QTensor fold(const QMatrix& m, std::size_t k, Side side, const std::vector<std::size_t>& dims) {
    check_dims(dims);
    check_mode(k, dims.size(), "fold");
    const auto [before, mid, after] = split(dims, k);
    const std::size_t ncols = before * after;
    const bool left = side == Side::left;
    if (m.rows() != (left ? mid : ncols) || m.cols() != (left ? ncols : mid)) {
        std::ostringstream os;
        os << "fold: matrix " << m.rows() << 'x' << m.cols() << " does not match mode-" << k << ' '
           << (left ? "left" : "right") << " unfolding of " << dims_str(dims);
        throw ShapeError(os.str());
    }
    QTensor t(dims);
    auto dst = t.data();
    for (std::size_t b = 0; b < after; ++b)
        for (std::size_t i = 0; i < mid; ++i)
            for (std::size_t a = 0; a < before; ++a)
                dst[a + before * (i + mid * b)] = left ? m(i, a + before * b) : m(a + before * b, i);
    return t;
}

QTensor lmode_product(const QMatrix& u, std::size_t k, const QTensor& t) {
    check_mode(k, t.order(), "lmode_product");
    if (u.cols() != t.dims()[k - 1]) {
        std::ostringstream os;
        os << "lmode_product: matrix has " << u.cols() << " columns but mode " << k << " has size "
           << t.dims()[k - 1];
        throw ShapeError(os.str());
    }
    auto dims = t.dims();
    dims[k - 1] = u.rows();
    return fold(matmul(u, unfold(t, k, Side::left)), k, Side::left, dims);
}

QTensor rmode_product(const QTensor& t, std::size_t k, const QMatrix& v) {
    check_mode(k, t.order(), "rmode_product");
    if (v.rows() != t.dims()[k - 1]) {
        std::ostringstream os;
        os << "rmode_product: matrix has " << v.rows() << " rows but mode " << k << " has size "
           << t.dims()[k - 1];
        throw ShapeError(os.str());
    }
    auto dims = t.dims();
    dims[k - 1] = v.cols();
    return fold(matmul(unfold(t, k, Side::right), v), k, Side::right, dims);
}

Quaternion inner(const QTensor& a, const QTensor& b, Side side) {
    require_same_dims(a, b, "inner");
    Quaternion s;
    const auto da = a.data();
    const auto db = b.data();
    if (side == Side::left) {
        for (std::size_t i = 0; i < da.size(); ++i) s += qmul(da[i], qconj(db[i]));
    } else {
        for (std::size_t i = 0; i < da.size(); ++i) s += qmul(qconj(da[i]), db[i]);
    }
    return s;
}

double fro_norm(const QTensor& t) {
    double s = 0.0;
    for (const auto& q : t.data()) s += q.norm2();
    return std::sqrt(s);
}

QTensor subtensor(const QTensor& t, std::size_t k, std::size_t alpha) {
    check_mode(k, t.order(), "subtensor");
    const auto [before, mid, after] = split(t.dims(), k);
    if (alpha < 1 || alpha > mid) {
        std::ostringstream os;
        os << "subtensor: index " << alpha << " out of range 1.." << mid << " at mode " << k;
        throw ModeError(os.str());
    }
    std::vector<std::size_t> dims;
    for (std::size_t l = 0; l < t.order(); ++l) {
        if (l != k - 1) dims.push_back(t.dims()[l]);
    }
    if (dims.empty()) dims.push_back(1);
    QTensor s(dims);
    auto dst = s.data();
    const auto src = t.data();
    const std::size_t i = alpha - 1;
    for (std::size_t b = 0; b < after; ++b)
        for (std::size_t a = 0; a < before; ++a) dst[a + before * b] = src[a + before * (i + mid * b)];
    return s;
}

QTensor operator+(const QTensor& a, const QTensor& b) {
    require_same_dims(a, b, "operator+");
    QTensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

QTensor operator-(const QTensor& a, const QTensor& b) {
    require_same_dims(a, b, "operator-");
    QTensor c = a;
    for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

QTensor operator*(double s, const QTensor& a) {
    QTensor c = a;
    for (auto& q : c.data()) q *= s;
    return c;
}

double max_abs_diff(const QTensor& a, const QTensor& b) {
    require_same_dims(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, qmodulus(a.data()[i] - b.data()[i]));
    return m;
}

QTensor random_qtensor(const std::vector<std::size_t>& dims, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    QTensor t(dims);
    for (auto& q : t.data()) {
        const double w = nd(rng);
        const double x = nd(rng);
        const double y = nd(rng);
        const double z = nd(rng);
        q = Quaternion{w, x, y, z};
    }
    return t;
}

}  // namespace qhosvd
