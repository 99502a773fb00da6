/**
 * Exact polynomials and ratios of polynomials in the blowup parameter eps,
 * with rational coefficients.  Evaluation at rational eps is exact; a ratio
 * is only formed when the denominator does not vanish at eps = 0, so every
 * expansion has a well-defined base value and power series.
 */

#ifndef KSTAB_EPS_POLY_HPP
#define KSTAB_EPS_POLY_HPP

#include <map>
#include <vector>

#include "kstab/error.hpp"
#include "kstab/rational.hpp"

namespace kstab {

class EpsPoly {
public:
    EpsPoly() = default;
    explicit EpsPoly(const Rat& c) { if (c != 0) c_[0] = c; }
    static EpsPoly monomial(int k, const Rat& c) {
        EpsPoly p;
        if (c != 0) p.c_[k] = c;
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : c_.rbegin()->first; }
    int order() const { return c_.empty() ? -1 : c_.begin()->first; }  // lowest exponent
    Rat coeff(int k) const {
        auto it = c_.find(k);
        return it == c_.end() ? Rat(0) : it->second;
    }
    const std::map<int, Rat>& coefficients() const { return c_; }

    Rat operator()(const Rat& eps) const;

    EpsPoly operator+(const EpsPoly& o) const;
    EpsPoly operator-(const EpsPoly& o) const;
    EpsPoly operator*(const EpsPoly& o) const;
    EpsPoly operator*(const Rat& s) const;
    EpsPoly operator-() const { return *this * Rat(-1); }

    bool operator==(const EpsPoly& o) const { return c_ == o.c_; }

private:
    std::map<int, Rat> c_;  // exponent -> nonzero coefficient
};

/// A polynomial or ratio of polynomials in eps.  kind() reports which.
class EpsExpansion {
public:
    enum class Kind { Polynomial, RationalFunction };

    EpsExpansion() : num_(Rat(0)), den_(Rat(1)) {}
    explicit EpsExpansion(EpsPoly num) : num_(std::move(num)), den_(Rat(1)) {}
    EpsExpansion(EpsPoly num, EpsPoly den);

    Kind kind() const;
    const EpsPoly& num() const { return num_; }
    const EpsPoly& den() const { return den_; }

    bool identically_zero() const { return num_.is_zero(); }

    /// Lowest exponent of the power series (-1 for the zero function).
    int order() const { return num_.is_zero() ? -1 : num_.order(); }

    Rat operator()(const Rat& eps) const;
    Rat at_zero() const { return num_.coeff(0) / den_.coeff(0); }

    /// Power series coefficients c_0..c_order of num/den.
    std::vector<Rat> series(int order) const;

    EpsExpansion operator+(const EpsExpansion& o) const;
    EpsExpansion operator-(const EpsExpansion& o) const;
    EpsExpansion operator*(const EpsExpansion& o) const;
    EpsExpansion operator/(const EpsExpansion& o) const;
    EpsExpansion operator*(const Rat& s) const { return EpsExpansion(num_ * s, den_); }
    EpsExpansion operator-() const { return *this * Rat(-1); }

    /// Equality as functions (cross-multiplied).
    bool same_function(const EpsExpansion& o) const { return num_ * o.den_ == o.num_ * den_; }

private:
    EpsPoly num_, den_;
};

}  // namespace kstab

#endif
