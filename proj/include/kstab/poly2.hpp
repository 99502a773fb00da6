/**
 * Polynomials of total degree at most two with rational coefficients,
 * the integrand class supported by the exact measure layer.
 */

#ifndef KSTAB_POLY2_HPP
#define KSTAB_POLY2_HPP

#include "kstab/error.hpp"
#include "kstab/rational.hpp"

namespace kstab {

class Poly2 {
public:
    /// Zero polynomial in n variables.
    explicit Poly2(int n)
        : constant_(0), linear_(RatVec::Zero(n)), quad_(RatMat::Zero(n, n)) {}

    static Poly2 constant(int n, const Rat& c) {
        Poly2 p(n);
        p.constant_ = c;
        return p;
    }
    /// <u, x>
    static Poly2 linear(const RatVec& u) {
        Poly2 p(static_cast<int>(u.size()));
        p.linear_ = u;
        return p;
    }
    /// <u, x> <v, x>
    static Poly2 bilinear(const RatVec& u, const RatVec& v) {
        Poly2 p(static_cast<int>(u.size()));
        p.quad_ = (u * v.transpose() + v * u.transpose()) / 2;
        return p;
    }
    /// Single monomial c * prod x_i^{e_i}; throws DegreeTooHigh beyond
    /// total degree two.
    static Poly2 monomial(const std::vector<int>& exponents, const Rat& c);

    int vars() const { return static_cast<int>(linear_.size()); }
    int degree() const;

    Rat operator()(const RatVec& x) const {
        return constant_ + linear_.dot(x) + x.dot(quad_ * x);
    }

    /// The composition q(A x + b) as a Poly2 in x.
    Poly2 compose_affine(const RatMat& a, const RatVec& b) const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator*(const Rat& c) const;

    const Rat& constant_term() const { return constant_; }
    const RatVec& linear_part() const { return linear_; }
    const RatMat& quadratic_part() const { return quad_; }

private:
    Rat constant_;
    RatVec linear_;
    RatMat quad_;  // symmetric; value contribution x^T Q x
};

}  // namespace kstab

#endif
