#include "kstab/stability.hpp"

#include <algorithm>

namespace kstab {

std::string status_name(Status s) {
    switch (s) {
        case Status::Stable: return "Stable";
        case Status::Unstable: return "Unstable";
        case Status::Borderline: return "Borderline";
    }
    return "?";
}

Rat hamiltonian_at(const DelzantPolytope& p, const TorusVector& u, const RatVec& x) {
    Rat a0 = integrate(p, Poly2::constant(p.dim(), 1));
    Rat b0 = integrate(p, Poly2::linear(u));
    return -(u.dot(x) - b0 / a0);
}

Rat laplacian_at(const DelzantPolytope& p, const TorusVector& u, int vertex) {
    return fixed_point_data(p.vertices()[vertex], u).lap_h;
}

Face specialization(const DelzantPolytope& p, const PointSpec& ps, const TorusVector& u) {
    bool zero = true;
    for (int i = 0; i < u.size(); ++i)
        if (u(i) != 0) zero = false;
    if (zero) throw DomainError("ZeroVector", "specialisation of the zero vector is undefined");
    std::optional<Rat> best;
    std::vector<int> argmin;
    for (int vi : ps.face.vertex_indices) {
        Rat val = u.dot(p.vertices()[vi].coords);
        if (!best || val < *best) {
            best = val;
            argmin = {vi};
        } else if (val == *best) {
            argmin.push_back(vi);
        }
    }
    std::set<int> canon(p.vertices()[argmin[0]].active.begin(), p.vertices()[argmin[0]].active.end());
    for (int vi : argmin) {
        std::set<int> next;
        const auto& act = p.vertices()[vi].active;
        std::set_intersection(canon.begin(), canon.end(), act.begin(), act.end(),
                              std::inserter(next, next.begin()));
        canon = std::move(next);
    }
    return p.face_by_active_set(canon);
}

std::vector<TorusVector> stabilizer_basis(const DelzantPolytope& p, const PointSpec& ps) {
    std::vector<TorusVector> basis;
    for (int fi : ps.face.active) basis.push_back(p.facets()[fi].normal);
    return basis;
}

StabilityVerdict check_point_stability(const DelzantPolytope& p, const PointSpec& ps, const Rat& eps,
                                       const std::optional<std::pair<Rat, Rat>>& ab_override) {
    const int n = p.dim();
    StabilityVerdict verdict;
    verdict.eps = eps;

    Rat a_val, b_val;
    if (ab_override) {
        a_val = ab_override->first;
        b_val = ab_override->second;
    } else {
        auto [a, b] = ab_from_base(n, integrate(p, Poly2::constant(n, 1)),
                                   boundary_integrate(p, Poly2::constant(n, 1)) / 2);
        try {
            a_val = a(eps);
            b_val = b(eps);
        } catch (const DomainError&) {
            throw DomainError("EpsTooLarge", "the functional coefficients degenerate at eps = " +
                                                 format_rational(eps));
        }
    }

    std::vector<TorusVector> stab = stabilizer_basis(p, ps);

    for (int qi : ps.face.vertex_indices) {
        const RatVec& q = p.vertices()[qi].coords;
        std::vector<TorusVector> perp;
        try {
            EpsGram g = eps_gram(p, qi, standard_basis(n));
            perp = perp_basis(g, stab, eps);
        } catch (const DomainError& e) {
            if (e.code() == "NotPositiveDefinite")
                throw DomainError("EpsTooLarge", std::string("at vertex cone: ") + e.what());
            throw;
        }
        if (perp.empty()) continue;
        const int d = static_cast<int>(perp.size());
        RatMat bmat(n, d);
        for (int i = 0; i < d; ++i) bmat.col(i) = perp[i];
        // Normal cone of q within ps.face, expressed in perp coordinates.
        std::vector<RatVec> rows;
        for (int vi : ps.face.vertex_indices) {
            if (vi == qi) continue;
            RatVec row = bmat.transpose() * (p.vertices()[vi].coords - q);
            rows.push_back(row);
        }
        RatMat m(rows.size(), d);
        for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<int>(i)) = rows[i];
        std::vector<RatVec> rays;
        try {
            rays = extreme_rays(m);
        } catch (const std::invalid_argument& e) {
            throw DomainError("DegenerateCone", std::string("cone at vertex (") +
                                                    format_rational_vector(q) + "): " + e.what());
        }
        for (const RatVec& y : rays) {
            RayCertificate cert;
            cert.direction = primitivize(bmat * y);
            cert.vertex = q;
            cert.value = a_val * hamiltonian_at(p, cert.direction, q) +
                         b_val * laplacian_at(p, cert.direction, qi);
            verdict.rays.push_back(std::move(cert));
        }
    }

    if (verdict.rays.empty()) {
        verdict.status = Status::Stable;
        verdict.vacuous = true;
        return verdict;
    }
    const RayCertificate* worst = &verdict.rays[0];
    for (const auto& r : verdict.rays)
        if (r.value < worst->value) worst = &r;
    verdict.certificate = worst->value;
    verdict.witness = *worst;
    verdict.status = worst->value > 0   ? Status::Stable
                     : worst->value < 0 ? Status::Unstable
                                        : Status::Borderline;
    return verdict;
}

Rat relative_df_eps(const DelzantPolytope& p, int vertex, const TorusVector& u,
                    const std::vector<TorusVector>& stab_basis, const Rat& eps) {
    const int n = p.dim();
    EpsGram g = eps_gram(p, vertex, standard_basis(n));
    RatMat gm;
    try {
        gm = eps_gram_at(g, eps);
    } catch (const DomainError& e) {
        if (e.code() == "NotPositiveDefinite")
            throw DomainError("EpsTooLarge", e.what());
        throw;
    }
    auto pair = [&](const TorusVector& x, const TorusVector& y) { return Rat(x.dot(gm * y)); };

    std::vector<TorusVector> ortho;
    for (const auto& v : stab_basis) {
        TorusVector w = v;
        for (const auto& o : ortho) w -= (pair(w, o) / pair(o, o)) * o;
        if (pair(w, w) == 0)
            throw DomainError("DependentBasis", "stabiliser basis is linearly dependent");
        ortho.push_back(w);
    }
    Rat df = futaki_eps(p, vertex, u)(eps);
    for (const auto& o : ortho)
        df -= (pair(u, o) / pair(o, o)) * futaki_eps(p, vertex, o)(eps);
    return df;
}

FindPointResult find_stable_point(const DelzantPolytope& p, const std::vector<Rat>& grid) {
    FindPointResult result;
    for (const Face& f : p.faces()) {
        FaceGridReport report;
        report.face = f;
        bool any_unstable = false, any_borderline = false;
        for (const Rat& eps : grid)
            report.verdicts.push_back(check_point_stability(p, PointSpec{f}, eps));
        for (const auto& v : report.verdicts) {
            if (v.status == Status::Unstable) any_unstable = true;
            if (v.status == Status::Borderline) any_borderline = true;
        }
        // Monotonicity: once Stable at some eps, remaining smaller eps must
        // stay Stable; a violation is flagged Borderline, never silent.
        std::vector<std::pair<Rat, Status>> ordered;
        for (std::size_t i = 0; i < grid.size(); ++i)
            ordered.emplace_back(grid[i], report.verdicts[i].status);
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        bool seen_stable = false;
        for (const auto& [eps, st] : ordered) {
            if (st == Status::Stable) seen_stable = true;
            else if (seen_stable) report.monotonicity_violation = true;
        }
        if (report.monotonicity_violation || any_borderline)
            report.combined = Status::Borderline;
        else if (any_unstable)
            report.combined = Status::Unstable;
        else
            report.combined = Status::Stable;
        if (report.combined == Status::Stable && !result.found)
            result.found = PointSpec{f};
        result.candidates.push_back(std::move(report));
    }
    return result;
}

}  // namespace kstab
