#include "kstab/eps_poly.hpp"

namespace kstab {

Rat EpsPoly::operator()(const Rat& eps) const {
    // Horner over the sparse exponent map.
    Rat v = 0;
    int prev = -1;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (prev >= 0)
            for (int i = 0; i < prev - it->first; ++i) v *= eps;
        v += it->second;
        prev = it->first;
    }
    if (prev > 0)
        for (int i = 0; i < prev; ++i) v *= eps;
    return v;
}

EpsPoly EpsPoly::operator+(const EpsPoly& o) const {
    EpsPoly r = *this;
    for (const auto& [k, c] : o.c_) {
        Rat v = r.coeff(k) + c;
        if (v == 0) r.c_.erase(k);
        else r.c_[k] = v;
    }
    return r;
}

EpsPoly EpsPoly::operator-(const EpsPoly& o) const { return *this + o * Rat(-1); }

EpsPoly EpsPoly::operator*(const EpsPoly& o) const {
    EpsPoly r;
    for (const auto& [k1, c1] : c_)
        for (const auto& [k2, c2] : o.c_) {
            Rat v = r.coeff(k1 + k2) + c1 * c2;
            if (v == 0) r.c_.erase(k1 + k2);
            else r.c_[k1 + k2] = v;
        }
    return r;
}

EpsPoly EpsPoly::operator*(const Rat& s) const {
    EpsPoly r;
    if (s == 0) return r;
    for (const auto& [k, c] : c_) r.c_[k] = c * s;
    return r;
}

EpsExpansion::EpsExpansion(EpsPoly num, EpsPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.coeff(0) == 0)
        throw DomainError("InvalidExpansion", "denominator vanishes at eps = 0");
    if (num_.is_zero()) den_ = EpsPoly(Rat(1));
}

EpsExpansion::Kind EpsExpansion::kind() const {
    return den_ == EpsPoly(Rat(1)) ? Kind::Polynomial : Kind::RationalFunction;
}

Rat EpsExpansion::operator()(const Rat& eps) const {
    Rat d = den_(eps);
    if (d == 0) throw DomainError("EpsTooLarge", "denominator vanishes at eps = " + format_rational(eps));
    return num_(eps) / d;
}

std::vector<Rat> EpsExpansion::series(int order) const {
    // Power series division num/den with den(0) != 0.
    std::vector<Rat> n(order + 1, Rat(0)), d(order + 1, Rat(0)), out(order + 1, Rat(0));
    for (const auto& [k, c] : num_.coefficients())
        if (k <= order) n[k] = c;
    for (const auto& [k, c] : den_.coefficients())
        if (k <= order) d[k] = c;
    for (int i = 0; i <= order; ++i) {
        Rat acc = n[i];
        for (int j = 1; j <= i; ++j) acc -= d[j] * out[i - j];
        out[i] = acc / d[0];
    }
    return out;
}

EpsExpansion EpsExpansion::operator+(const EpsExpansion& o) const {
    return EpsExpansion(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
EpsExpansion EpsExpansion::operator-(const EpsExpansion& o) const {
    return EpsExpansion(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
EpsExpansion EpsExpansion::operator*(const EpsExpansion& o) const {
    return EpsExpansion(num_ * o.num_, den_ * o.den_);
}
EpsExpansion EpsExpansion::operator/(const EpsExpansion& o) const {
    if (o.num_.coeff(0) == 0)
        throw DomainError("InvalidExpansion", "division by an expansion vanishing at eps = 0");
    return EpsExpansion(num_ * o.den_, den_ * o.num_);
}

}  // namespace kstab
