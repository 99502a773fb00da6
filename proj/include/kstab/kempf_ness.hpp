/**
 * Finite-dimensional moment-map zero search: damped descent along orbit
 * directions for the combined map A mu + B lap_mu + k mu_euc, projected
 * orthogonally to the stabiliser of the current point.  This is the
 * numerical demonstrator of the moment-map side of the stability criteria;
 * the exact decision procedure lives in stability.hpp.
 */

#ifndef KSTAB_KEMPF_NESS_HPP
#define KSTAB_KEMPF_NESS_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kstab/polytope.hpp"

namespace kstab {

struct MomentModel {
    int dim = 0;         // r, ball dimension
    int torus_rank = 0;  // m = dim t
    // Weight vector of the torus action on the j-th coordinate (stabiliser
    // bookkeeping and the Euclidean term).
    std::vector<Eigen::VectorXd> weights;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> mu;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> lap_mu;
    double euclidean_scale = 0.0;  // k; contributes k * sum_j b_j^2 w_j
    double ball_radius = 1.0;
    // True when the coordinates are the real slice of complex ball
    // coordinates (so the residual torus action flips signs and mu must be
    // even per coordinate).  Models in invariant image coordinates, such as
    // the affine and polytope-derived ones, leave this false.
    bool complex_slice_coordinates = false;
};

/// Spot checks: the maps are finite at 0, the weight table is well-formed,
/// and equivariance under the declared action holds where it is checkable
/// (sign-flip invariance in the complex-slice picture).
/// Throws std::invalid_argument on failure.
void validate_model(const MomentModel& m);

struct KempfNessResult {
    bool converged = false;
    Eigen::VectorXd point;
    double residual = 0.0;
    long iterations = 0;
    std::vector<double> residual_trace;  // residuals at accepted steps
};

/// Damped descent x <- x - eta rho(x), rho = projection of
/// A mu + B lap_mu + k mu_euc orthogonal to the stabiliser of x, with
/// Armijo backtracking (constant 1e-4, initial step 1).  Non-convergence
/// after the iteration budget is reported in the result, with the trace.
KempfNessResult kempf_ness_search(const MomentModel& m, double a, double b,
                                  const Eigen::VectorXd& start, double tol,
                                  long max_iterations = 100000);

/// Ball model derived from a polytope: coordinates are moment-image
/// displacements from the barycenter, mu(b) = b, lap_mu = lambda * b with
/// the first-eigenvalue scale lambda = 2 (n + 1) of the projective model.
MomentModel polytope_moment_model(const DelzantPolytope& p);

}  // namespace kstab

#endif
