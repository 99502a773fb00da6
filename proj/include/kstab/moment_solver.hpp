/**
 * Finite-dimensional perturbation solver for Hamiltonian families with the
 * structure
 *
 *   h_{eps,j}(z) = c_j eps^{p_j} + ... + |z_j|^2 + O(|z_j|^3) + O(eps |z_j|^2),
 *
 * c_j < 0, p_j > 0: order-by-order approximate zeros built by a power-series
 * correction loop, Newton polishing to genuine zeros with nonvanishing
 * solved coordinates, and the shrinking-ball variant used in (real)
 * dimension two.
 *
 * Models are finite monomial lists in (z, zbar, eps) with real coefficients;
 * solutions are sought on the real slice.  This is the one intentionally
 * floating-point module of the toolkit.
 */

#ifndef KSTAB_MOMENT_SOLVER_HPP
#define KSTAB_MOMENT_SOLVER_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kstab/error.hpp"
#include "kstab/rational.hpp"

namespace kstab {

struct Monomial {
    double coeff = 0.0;
    std::vector<int> z_exp, zbar_exp;  // length r each
    int eps_exp = 0;
};

struct HamiltonianFamily {
    int r = 0;  // number of Hamiltonians = number of coordinates
    int w = 0;  // indices 0..w-1 must vanish; the rest stay frozen at 0
    double ball_radius = 1.0;
    std::vector<std::vector<Monomial>> models;  // one list per Hamiltonian
};

struct HypothesisReport {
    std::vector<double> c;  // leading constant coefficients, c_j < 0 (j < w)
    std::vector<int> p;     // leading eps exponents, p_j >= 1 (j < w)
};

/// Symbolic checks of the expansion structure; extracts (c_j, p_j) and
/// confirms c_j < 0 both symbolically and by sampling h_j(0) at small eps.
/// Errors: StructureViolation naming the offending monomial.
HypothesisReport validate_hypotheses(const HamiltonianFamily& f);

/// A finite power series in eps with real coefficients and rational
/// exponents.
struct PowerSeries {
    std::map<Rat, double> terms;
    double eval(double eps) const;
};

struct ApproxSolution {
    int order = 0;
    std::vector<PowerSeries> coordinates;  // size r; frozen coordinates empty
    Eigen::VectorXd at(double eps) const;
};

/// Builds the order-l approximate solution series: the first step
/// b_{1,j} = sqrt(-c_j) eps^{p_j/2}, then corrections
/// b_j += -psi / (2 sqrt(-c_j)) eps^{q - p_j/2} applied to all minimal
/// residual orders simultaneously, until every solved residual is
/// O(eps^{l+1}).  Errors: OrderUnreachable.
ApproxSolution approximate_solution_series(const HamiltonianFamily& f, int l);

/// The series evaluated at eps, with the ball constraint enforced.
/// Errors: OrderUnreachable when the point leaves the model ball.
Eigen::VectorXd approximate_solution(const HamiltonianFamily& f, double eps, int l);

struct SolveTrace {
    double eps = 0.0;
    std::vector<Eigen::VectorXd> points;     // accepted iterates, start included
    std::vector<double> residuals;           // max_j |h_j|, one per point
    Eigen::VectorXd final_point;
    double final_residual = 0.0;
    std::vector<double> coordinate_magnitudes;
};

class SolverError : public std::runtime_error {
public:
    SolverError(std::string code, const std::string& detail, SolveTrace trace)
        : std::runtime_error(code + ": " + detail),
          code_(std::move(code)),
          trace_(std::move(trace)) {}
    const std::string& code() const { return code_; }
    const SolveTrace& trace() const { return trace_; }

private:
    std::string code_;
    SolveTrace trace_;
};

/// Evaluates the j-th Hamiltonian at a real point.
double evaluate_hamiltonian(const HamiltonianFamily& f, int j, const Eigen::VectorXd& b, double eps);

/// Damped Newton on the w solved coordinates from the approximate solution.
/// Errors: NewtonDiverged (budget exhausted or persistent stagnation),
/// CoordinateCollapse (a solved coordinate reached 0 exactly, contradicting
/// the negative slice values guaranteed by the hypotheses).
SolveTrace newton_polish(const HamiltonianFamily& f, double eps, const Eigen::VectorXd& b_start,
                         double tol = 1e-12);

/// Same pipeline under the shrinking-ball constraint |b| <= c eps^kappa,
/// valid when kappa < p_j / 2 for all solved j.
/// Errors: KappaTooLarge, BallViolation, and those of newton_polish.
SolveTrace surface_mode_solve(const HamiltonianFamily& f, double eps, const Rat& kappa, double c,
                              int order = 2, double tol = 1e-12);

// --- model file format -------------------------------------------------------
//
//   # comment
//   family <r> <w> [ball <radius>]
//   h<j> <coeff> <z-exponents...> <zbar-exponents...> <eps-exponent>
//
// with j in 1..r, r z-exponents, r zbar-exponents, and coefficients given as
// decimals or rationals.

HamiltonianFamily parse_family(std::istream& in);
HamiltonianFamily parse_family_file(const std::string& path);

}  // namespace kstab

#endif
