/**
 * Exact rational scalars and small dense containers used throughout the
 * exact layer of the toolkit.
 */

#ifndef KSTAB_RATIONAL_HPP
#define KSTAB_RATIONAL_HPP

#include <string>
#include <vector>
#include <Eigen/Dense>
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace kstab {

// Expression templates are disabled: Eigen requires plain value semantics
// of its scalar type (deferred references break in-place row operations).
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                          boost::multiprecision::et_off>;
using Int = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                          boost::multiprecision::et_off>;

using RatVec = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;

/// An element u of the torus Lie algebra t ~ Q^n; doubles as the linear
/// Hamiltonian x -> <u, x>.
using TorusVector = RatVec;

inline Int numerator(const Rat& q) { return Int(boost::multiprecision::numerator(q)); }
inline Int denominator(const Rat& q) { return Int(boost::multiprecision::denominator(q)); }

inline bool is_integer(const Rat& q) { return denominator(q) == 1; }

/// Parses "p", "-p" or "p/q" with arbitrary-precision integers.
/// Throws std::invalid_argument on malformed input.
Rat parse_rational(const std::string& text);

/// Formats a rational as "p" or "p/q" (canonical form, q > 0).
std::string format_rational(const Rat& q);

/// Parses a comma-separated rational vector such as "1,-3/2,0".
RatVec parse_rational_vector(const std::string& text);

std::string format_rational_vector(const RatVec& v);

/// gcd of the numerators of an integer vector (entries must be integers).
Int content(const RatVec& v);

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same ray (positive multiple).  Throws on the zero vector.
RatVec primitivize(const RatVec& v);

/// Least common multiple of the denominators of the entries.
Int denominator_lcm(const RatVec& v);

/// Exact binomial coefficient C(n, k); zero when k < 0 or k > n.
Rat binomial(long n, long k);

inline Rat factorial(long n) {
    Rat f = 1;
    for (long i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

}  // namespace kstab

#endif
