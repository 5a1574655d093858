#include "qhosvd/quaternion.hpp"

#include "qhosvd/errors.hpp"

namespace qhosvd {

Quaternion qinv(const Quaternion& q) {
    const double n2 = q.norm2();
    if (n2 == 0.0) {
        throw DomainError("qinv: zero quaternion has no inverse");
    }
    return qconj(q) * (1.0 / n2);
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    auto term = [&os](double v, const char* unit) {
        os << (v < 0 ? '-' : '+') << std::abs(v) << unit;
    };
    os << q.w;
    term(q.x, "i");
    term(q.y, "j");
    term(q.z, "k");
    return os;
}

}  // namespace qhosvd
