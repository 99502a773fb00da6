#include "kstab/kempf_ness.hpp"

#include <cmath>

namespace kstab {

void validate_model(const MomentModel& m) {
    if (m.dim <= 0 || m.torus_rank <= 0)
        throw std::invalid_argument("moment model: dimensions must be positive");
    if (static_cast<int>(m.weights.size()) != m.dim)
        throw std::invalid_argument("moment model: one weight vector per coordinate required");
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(m.dim);
    if (!m.mu(zero).allFinite() || !m.lap_mu(zero).allFinite())
        throw std::invalid_argument("moment model: the maps are not finite at 0");
    if (m.complex_slice_coordinates) {
        // In the complex-ball picture the residual real torus action flips
        // coordinate signs; mu must be invariant.
        Eigen::VectorXd probe = Eigen::VectorXd::Constant(m.dim, 0.3 * m.ball_radius);
        for (int j = 0; j < m.dim; ++j) {
            Eigen::VectorXd flipped = probe;
            flipped(j) = -flipped(j);
            if ((m.mu(probe) - m.mu(flipped)).norm() > 1e-9 * (1.0 + m.mu(probe).norm()))
                throw std::invalid_argument(
                    "moment model: mu is not invariant under the sign flip of coordinate " +
                    std::to_string(j));
        }
    }
}

namespace {

Eigen::VectorXd project_off_stabilizer(const MomentModel& m, const Eigen::VectorXd& x,
                                       const Eigen::VectorXd& v) {
    // Stabiliser of x: {u : <w_j, u> = 0 for all j with x_j != 0}.  The
    // component of v orthogonal to it is its projection onto the span of the
    // active weight vectors.
    std::vector<int> active;
    for (int j = 0; j < m.dim; ++j)
        if (x(j) != 0.0) active.push_back(j);
    if (active.empty()) return Eigen::VectorXd::Zero(m.torus_rank);
    Eigen::MatrixXd w(m.torus_rank, static_cast<int>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i) w.col(static_cast<int>(i)) = m.weights[active[i]];
    Eigen::VectorXd coeff = w.completeOrthogonalDecomposition().solve(v);
    return w * coeff;
}

Eigen::VectorXd combined_map(const MomentModel& m, double a, double b, const Eigen::VectorXd& x) {
    Eigen::VectorXd v = a * m.mu(x) + b * m.lap_mu(x);
    if (m.euclidean_scale != 0.0) {
        for (int j = 0; j < m.dim; ++j) v += m.euclidean_scale * x(j) * x(j) * m.weights[j];
    }
    return v;
}

}  // namespace

KempfNessResult kempf_ness_search(const MomentModel& m, double a, double b,
                                  const Eigen::VectorXd& start, double tol, long max_iterations) {
    if (tol <= 0) throw std::invalid_argument("kempf_ness_search: tol must be positive");
    if (start.size() != m.dim) throw std::invalid_argument("kempf_ness_search: bad start dimension");
    if (start.norm() > m.ball_radius)
        throw std::invalid_argument("kempf_ness_search: start outside the model ball");
    if (m.torus_rank != m.dim)
        throw std::invalid_argument(
            "kempf_ness_search: the descent requires the diagonal picture (torus rank = ball dimension)");

    // The descent moves in the model coordinates; for the diagonal models
    // used here the torus rank equals the ball dimension and rho is read as
    // a coordinate displacement.
    auto rho = [&](const Eigen::VectorXd& x) {
        Eigen::VectorXd v = combined_map(m, a, b, x);
        return project_off_stabilizer(m, x, v);
    };

    KempfNessResult res;
    Eigen::VectorXd x = start;
    Eigen::VectorXd r = rho(x);
    double rn = r.norm();
    res.residual_trace.push_back(rn);
    const double armijo = 1e-4;
    double eta = 1.0;
    for (long it = 0; it < max_iterations; ++it) {
        if (rn < tol) {
            res.converged = true;
            break;
        }
        bool accepted = false;
        while (eta > 1e-14) {
            Eigen::VectorXd cand = x - eta * r;
            Eigen::VectorXd rc = rho(cand);
            double rcn = rc.norm();
            if (rcn * rcn <= rn * rn * (1.0 - armijo * eta)) {
                x = cand;
                r = rc;
                rn = rcn;
                res.residual_trace.push_back(rn);
                eta = std::min(1.0, 2.0 * eta);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        ++res.iterations;
        if (!accepted) break;  // line search exhausted
    }
    if (rn < tol) res.converged = true;
    res.point = x;
    res.residual = rn;
    return res;
}

MomentModel polytope_moment_model(const DelzantPolytope& p) {
    const int n = p.dim();
    MomentModel m;
    m.dim = n;
    m.torus_rank = n;
    for (int i = 0; i < n; ++i) m.weights.push_back(Eigen::VectorXd::Unit(n, i));
    // Largest displacement from the barycenter that stays inside: half the
    // minimal facet slack, a safe inner ball.
    Rat a0 = integrate(p, Poly2::constant(n, 1));
    RatVec bary(n);
    for (int i = 0; i < n; ++i) {
        RatVec e = RatVec::Zero(n);
        e(i) = 1;
        bary(i) = integrate(p, Poly2::linear(e)) / a0;
    }
    double radius = 1e300;
    for (const auto& f : p.facets()) {
        double slack = to_double(Rat(f.normal.dot(bary) - f.offset));
        double nn = 0;
        for (int i = 0; i < n; ++i) nn += to_double(f.normal(i)) * to_double(f.normal(i));
        radius = std::min(radius, slack / std::sqrt(nn));
    }
    m.ball_radius = 0.9 * radius;
    const double lambda = 2.0 * (n + 1);
    m.mu = [](const Eigen::VectorXd& x) { return x; };
    m.lap_mu = [lambda](const Eigen::VectorXd& x) { return Eigen::VectorXd(lambda * x); };
    return m;
}

}  // namespace kstab
