#include "kstab/poly2.hpp"

namespace kstab {

Poly2 Poly2::monomial(const std::vector<int>& exponents, const Rat& c) {
    const int n = static_cast<int>(exponents.size());
    int total = 0;
    for (int e : exponents) {
        if (e < 0) throw DomainError("DegreeTooHigh", "negative exponent");
        total += e;
    }
    if (total > 2)
        throw DomainError("DegreeTooHigh", "monomial of total degree " + std::to_string(total) +
                                               " (only degree <= 2 is supported)");
    Poly2 p(n);
    if (total == 0) {
        p.constant_ = c;
    } else if (total == 1) {
        for (int i = 0; i < n; ++i)
            if (exponents[i] == 1) p.linear_(i) = c;
    } else {
        int i = -1, j = -1;
        for (int k = 0; k < n; ++k) {
            if (exponents[k] == 2) { i = j = k; }
            if (exponents[k] == 1) { (i < 0 ? i : j) = k; }
        }
        if (i == j) {
            p.quad_(i, i) = c;
        } else {
            p.quad_(i, j) = c / 2;
            p.quad_(j, i) = c / 2;
        }
    }
    return p;
}

int Poly2::degree() const {
    for (int i = 0; i < vars(); ++i)
        for (int j = 0; j < vars(); ++j)
            if (quad_(i, j) != 0) return 2;
    for (int i = 0; i < vars(); ++i)
        if (linear_(i) != 0) return 1;
    return constant_ != 0 ? 0 : 0;
}

Poly2 Poly2::compose_affine(const RatMat& a, const RatVec& b) const {
    Poly2 out(static_cast<int>(a.cols()));
    // q(Ax+b) = c + l.(Ax+b) + (Ax+b)^T Q (Ax+b)
    out.constant_ = constant_ + linear_.dot(b) + b.dot(quad_ * b);
    out.linear_ = a.transpose() * linear_ + 2 * (a.transpose() * (quad_ * b));
    RatMat q = a.transpose() * quad_ * a;
    out.quad_ = (q + q.transpose()) / 2;
    return out;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 out = *this;
    out.constant_ += o.constant_;
    out.linear_ += o.linear_;
    out.quad_ += o.quad_;
    return out;
}

Poly2 Poly2::operator*(const Rat& c) const {
    Poly2 out = *this;
    out.constant_ *= c;
    out.linear_ *= c;
    out.quad_ *= c;
    return out;
}

}  // namespace kstab
