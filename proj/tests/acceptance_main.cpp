// Acceptance suite: end-to-end checks of the exactly decidable layer.  Each
// criterion prints one PASS/FAIL line; the process exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

#include "kstab/blowup.hpp"
#include "kstab/counts.hpp"
#include "kstab/invariants.hpp"
#include "kstab/kempf_ness.hpp"
#include "kstab/moment_solver.hpp"
#include "kstab/polytope.hpp"
#include "kstab/stability.hpp"

using namespace kstab;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << name;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!pass) ++failures;
}

std::string dp(const std::string& name) { return std::string(KSTAB_DATA_DIR) + "/" + name; }

std::vector<TorusVector> direction_set(int n) {
    RatVec e1 = RatVec::Zero(n), e2 = RatVec::Zero(n), ones = RatVec::Zero(n);
    e1(0) = 1;
    e2(1) = 1;
    for (int i = 0; i < n; ++i) ones(i) = 1;
    return {e1, e2, ones};
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int sign_of(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

// --- criterion 1 -------------------------------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> files{"polytopes/simplex2.poly", "polytopes/square.poly",
                                   "polytopes/rect_1x2.poly", "polytopes/simplex2_chopped_t13.poly",
                                   "polytopes/simplex3.poly"};
    for (const auto& file : files) {
        DelzantPolytope p = parse_polytope_file(dp(file));
        auto dirs = direction_set(p.dim());
        for (std::size_t i = 0; i < dirs.size() && pass; ++i) {
            const auto& u = dirs[i];
            const auto& v = dirs[(i + 1) % dirs.size()];
            EhrhartData fit = ehrhart_fit(p, u, v);
            EhrhartData ints = ehrhart_from_integrals(p, u, v);
            if (fit.a0 != ints.a0 || fit.a1 != ints.a1 || fit.b0 != ints.b0 || fit.b1 != ints.b1 ||
                fit.c0 != ints.c0 || fit.d0 != ints.d0) {
                pass = false;
                detail << file << " direction " << i << " disagrees";
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 30.0) {
        pass = false;
        detail << " runtime " << dt << "s exceeds 30s";
    }
    std::ostringstream d;
    d << "5 polytopes x 3 direction pairs, exact; " << dt << "s";
    report(1, "Ehrhart coefficients equal polytope integrals", pass,
           pass ? d.str() : detail.str());
}

// --- criterion 2 -------------------------------------------------------------

void criterion_2() {
    bool pass = true;
    std::ostringstream detail;
    std::vector<Rat> sizes{Rat(1, 3), Rat(1, 4), Rat(1, 5)};
    DelzantPolytope simplex = parse_polytope_file(dp("polytopes/simplex2.poly"));
    DelzantPolytope square = parse_polytope_file(dp("polytopes/square.poly"));
    auto dirs = direction_set(2);
    try {
        for (const auto& vtx : {parse_rational_vector("0,0"), parse_rational_vector("1,0")})
            for (std::size_t i = 0; i < dirs.size(); ++i)
                verify_expansion_oracle(simplex, simplex.vertex_index(vtx), dirs[i],
                                        dirs[(i + 1) % 3], sizes);
        for (std::size_t vi = 0; vi < square.vertices().size(); ++vi)
            for (std::size_t i = 0; i < dirs.size(); ++i)
                verify_expansion_oracle(square, static_cast<int>(vi), dirs[i], dirs[(i + 1) % 3],
                                        sizes);
    } catch (const DomainError& e) {
        pass = false;
        detail << e.what();
    }
    // The pinned jet-sum coefficient: c0(eps) = 1/12 - eps^8/12 at the origin
    // corner with u = e1.
    auto e = expand_counts(simplex, simplex.vertex_index(parse_rational_vector("0,0")), dirs[0]);
    EpsPoly expected = EpsPoly(Rat(1, 12)) - EpsPoly::monomial(8, Rat(1, 12));
    if (!(e.c0 == expected)) {
        pass = false;
        detail << " c0 expansion differs from 1/12 - eps^8/12";
    }
    report(2, "blowup expansions equal chopped-polytope fits at t in {1/3,1/4,1/5}", pass,
           pass ? "2-simplex (both corners) and unit square, exact" : detail.str());
}

// --- criterion 3 -------------------------------------------------------------

void criterion_3() {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::pair<std::string, TorusVector>> cases{
        {"polytopes/simplex2.poly", parse_rational_vector("2,-1")},
        {"polytopes/simplex3.poly", parse_rational_vector("1,2,-1")}};
    for (const auto& [file, u] : cases) {
        DelzantPolytope p = parse_polytope_file(dp(file));
        const int n = p.dim();
        for (std::size_t vi = 0; vi < p.vertices().size() && pass; ++vi) {
            const auto& vd = p.vertices()[vi];
            Rat wtv = 0, sqv = 0;
            for (const auto& eg : vd.edge_generators) {
                wtv -= u.dot(eg);
                sqv += u.dot(eg) * u.dot(eg);
            }
            std::vector<Rat> ls, sqs;
            for (long l = 1; l <= 12; ++l) {
                auto jw = jet_weights(vd, u, l);
                if (Rat(jw.dim) != binomial(n + l - 1, n) ||
                    jw.wt != binomial(n + l - 1, n + 1) * wtv) {
                    pass = false;
                    detail << file << " vertex " << vi << " l=" << l << " closed form fails";
                    break;
                }
                ls.push_back(Rat(l));
                sqs.push_back(jw.sq);
            }
            if (!pass) break;
            auto poly = fit_polynomial(ls, sqs, n + 2);
            if (poly[n + 2] != (sqv + wtv * wtv) / factorial(n + 2)) {
                pass = false;
                detail << file << " vertex " << vi << " sq leading coefficient fails";
            }
        }
    }
    report(3, "jet dimension/weight closed forms and the squared-weight leading term", pass,
           pass ? "l <= 12, n in {2,3}, exact" : detail.str());
}

// --- criterion 4 -------------------------------------------------------------

void criterion_4() {
    bool pass = true;
    std::ostringstream detail;
    // Futaki vanishes on the simplex and all rectangles, on both paths.
    std::vector<DelzantPolytope> flats;
    flats.push_back(parse_polytope_file(dp("polytopes/simplex2.poly")));
    flats.push_back(parse_polytope_file(dp("polytopes/square.poly")));
    flats.push_back(parse_polytope_file(dp("polytopes/rect_1x2.poly")));
    flats.push_back(validate_delzant(
        2, {{parse_rational_vector("1,0"), Rat(0)},
            {parse_rational_vector("0,1"), Rat(0)},
            {parse_rational_vector("-1,0"), Rat(-5, 2)},
            {parse_rational_vector("0,-1"), Rat(-7, 3)}}));
    for (const auto& p : flats)
        for (const auto& u : direction_set(2)) {
            if (futaki(p, u) != 0) {
                pass = false;
                detail << "integral-path Futaki nonzero";
            }
            auto fit = ehrhart_fit(p, u, u);
            if (4 * (fit.b0 * fit.a1 - fit.b1 * fit.a0) / fit.a0 != 0) {
                pass = false;
                detail << "fit-path Futaki nonzero";
            }
        }
    // F_eps vanishes identically in the normalised symmetric case.
    DelzantPolytope square = parse_polytope_file(dp("polytopes/square.poly"));
    int v00 = square.vertex_index(parse_rational_vector("0,0"));
    if (!futaki_eps(square, v00, parse_rational_vector("1,-1")).identically_zero()) {
        pass = false;
        detail << " F_eps not identically zero";
    }
    // Product degenerations: a basis vector relative to its own basis.
    DelzantPolytope chopped = parse_polytope_file(dp("polytopes/simplex2_chopped_t13.poly"));
    auto basis = standard_basis(2);
    for (const auto& p : {flats[0], flats[1], chopped})
        for (const auto& v : basis)
            if (relative_df(p, v, basis) != 0) {
                pass = false;
                detail << " relative invariant of a basis vector nonzero";
            }
    report(4, "vanishing identities (Futaki, F_eps, product configurations)", pass,
           pass ? "exact on both computation paths" : detail.str());
}

// --- criterion 5 -------------------------------------------------------------

void criterion_5() {
    int tuples = 0, agreements = 0;
    std::vector<std::string> files{"polytopes/simplex2.poly", "polytopes/square.poly",
                                   "polytopes/rect_1x2.poly", "polytopes/simplex3.poly"};
    for (const auto& file : files) {
        DelzantPolytope p = parse_polytope_file(dp(file));
        const int n = p.dim();
        std::vector<TorusVector> seeds = direction_set(n);
        {
            RatVec extra = RatVec::Zero(n);
            extra(0) = 2;
            extra(1) = -3;
            seeds.push_back(extra);
            seeds.push_back(RatVec(-extra));
        }
        std::vector<std::vector<TorusVector>> stabs{{}, {p.facets()[0].normal}};
        for (const auto& stab : stabs)
            for (const auto& eps : {Rat(1, 8), Rat(1, 16)})
                for (const auto& seed : seeds) {
                    PointSpec generic{p.whole_polytope_face()};
                    Face f = specialization(p, generic, seed);
                    if (f.dimension != 0) continue;
                    int qi = f.vertex_indices[0];
                    EpsGram g = eps_gram(p, qi, standard_basis(n));
                    RatMat gm = eps_gram_at(g, eps);
                    TorusVector u = seed;
                    for (const auto& s : stab) u -= RatVec((u.dot(gm * s) / s.dot(gm * s)) * s);
                    bool zero = true;
                    for (int i = 0; i < n; ++i)
                        if (u(i) != 0) zero = false;
                    if (zero) continue;
                    Face fu = specialization(p, generic, u);
                    if (fu.dimension != 0 || fu.vertex_indices[0] != qi) continue;
                    Rat df = relative_df_eps(p, qi, u, stab, eps);
                    auto [a, b] = ab_coefficients(p, qi);
                    Rat functional = a(eps) * hamiltonian_at(p, u, p.vertices()[qi].coords) +
                                     b(eps) * laplacian_at(p, u, qi);
                    ++tuples;
                    if (sign_of(-df) == sign_of(functional)) ++agreements;
                }
    }
    std::ostringstream d;
    d << agreements << "/" << tuples << " sign agreements, exact comparison";
    report(5, "relative invariant sign matches the vertex functional at the specialisation",
           tuples >= 20 && agreements == tuples, d.str());
}

// --- criterion 6 -------------------------------------------------------------

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::ostringstream detail;
    std::vector<Rat> grid{Rat(1, 8), Rat(1, 16), Rat(1, 32)};
    for (const auto& file : {"polytopes/simplex2.poly", "polytopes/square.poly"}) {
        DelzantPolytope p = parse_polytope_file(dp(file));
        for (const Rat& eps : grid) {
            auto v = check_point_stability(p, PointSpec{p.whole_polytope_face()}, eps);
            if (v.status != Status::Stable || v.vacuous || v.certificate <= 0) {
                pass = false;
                detail << file << " generic point not strictly stable at eps=" << format_rational(eps);
            }
        }
        // Every vertex stratum is vacuously stable.
        for (const auto& f : p.faces()) {
            if (f.dimension != 0) continue;
            auto v = check_point_stability(p, PointSpec{f}, grid[0]);
            if (v.status != Status::Stable || !v.vacuous) {
                pass = false;
                detail << file << " vertex stratum not vacuously stable";
            }
        }
    }
    double dt = seconds_since(t0);
    if (dt >= 10.0) {
        pass = false;
        detail << " runtime " << dt << "s exceeds 10s";
    }
    std::ostringstream d;
    d << "grid {1/8,1/16,1/32}; " << dt << "s";
    report(6, "generic strata stable, vertex strata vacuously stable", pass,
           pass ? d.str() : detail.str());
}

// --- criterion 7 -------------------------------------------------------------

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void criterion_7() {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> files{"models/exact.model", "models/perturbed.model",
                                   "models/coupled.model"};
    const std::vector<double> grid{1e-2, 1e-3, 1e-4, 1e-5};
    for (const auto& file : files) {
        HamiltonianFamily f = parse_family_file(dp(file));
        for (int l : {1, 2}) {
            std::vector<double> xs, ys;
            for (double eps : grid) {
                Eigen::VectorXd b = approximate_solution(f, eps, l);
                double r = 0;
                for (int j = 0; j < f.w; ++j)
                    r = std::max(r, std::abs(evaluate_hamiltonian(f, j, b, eps)));
                if (r == 0.0) continue;  // exact zero: better than any order
                xs.push_back(std::log(eps));
                ys.push_back(std::log(r));
            }
            if (xs.size() >= 2) {
                double slope = fit_slope(xs, ys);
                if (slope < l + 1 - 0.1) {
                    pass = false;
                    detail << file << " order " << l << " slope " << slope << " below " << (l + 0.9);
                }
            }
        }
        for (double eps : grid) {
            try {
                SolveTrace t = newton_polish(f, eps, approximate_solution(f, eps, 2), 1e-12);
                if (t.final_residual >= 1e-12) {
                    pass = false;
                    detail << file << " residual above 1e-12";
                }
                for (double c : t.coordinate_magnitudes)
                    if (c == 0.0) {
                        pass = false;
                        detail << file << " collapsed coordinate";
                    }
            } catch (const std::exception& e) {
                pass = false;
                detail << file << ": " << e.what();
            }
        }
        // Shrinking-ball run with kappa = 1/4 < min p_j / 2, c = 1.
        for (double eps : {1e-2, 1e-4}) {
            try {
                SolveTrace t = surface_mode_solve(f, eps, Rat(1, 4), 1.0);
                double bound = std::pow(eps, 0.25);
                for (const auto& pt : t.points)
                    if (pt.norm() > bound) {
                        pass = false;
                        detail << file << " iterate outside the shrinking ball";
                    }
            } catch (const std::exception& e) {
                pass = false;
                detail << file << " surface mode: " << e.what();
            }
        }
    }
    report(7, "solver residual orders, Newton zeros and shrinking-ball runs", pass,
           pass ? "3 models, slopes >= l+0.9, residuals < 1e-12" : detail.str());
}

// --- criterion 8 -------------------------------------------------------------

void criterion_8() {
    bool pass = true;
    std::ostringstream detail;
    // Affine model mu = x - c, lap mu = lambda mu.
    {
        Eigen::VectorXd c(2);
        c << 0.3, -0.2;
        const double lambda = 2.0;
        MomentModel m;
        m.dim = m.torus_rank = 2;
        for (int i = 0; i < 2; ++i) m.weights.push_back(Eigen::VectorXd::Unit(2, i));
        m.ball_radius = 10.0;
        m.mu = [c](const Eigen::VectorXd& x) { return Eigen::VectorXd(x - c); };
        m.lap_mu = [c, lambda](const Eigen::VectorXd& x) { return Eigen::VectorXd(lambda * (x - c)); };
        auto res = kempf_ness_search(m, 1.0, 1.0, Eigen::VectorXd::Zero(2), 1e-10, 1000);
        if (!res.converged || res.iterations >= 1000 || (res.point - c).norm() > 1e-8) {
            pass = false;
            detail << "affine model: residual " << res.residual << " after " << res.iterations
                   << " iterations";
        }
    }
    // Simplex-derived model at eps = 1/10 agrees with the exact verdict.
    {
        DelzantPolytope p = parse_polytope_file(dp("polytopes/simplex2.poly"));
        auto verdict = check_point_stability(p, PointSpec{p.whole_polytope_face()}, Rat(1, 10));
        MomentModel m = polytope_moment_model(p);
        auto [a, b] = ab_coefficients(p, 0);
        Eigen::VectorXd start(2);
        start << 0.4 * m.ball_radius, -0.3 * m.ball_radius;
        auto res = kempf_ness_search(m, to_double(a(Rat(1, 10))), to_double(b(Rat(1, 10))), start,
                                     1e-10);
        bool agreement = res.converged == (verdict.status == Status::Stable);
        if (!agreement) {
            pass = false;
            detail << "simplex model disagreement: search " << (res.converged ? "succeeded" : "failed")
                   << ", verdict " << status_name(verdict.status);
        }
    }
    report(8, "moment-map search: affine model and verdict agreement at eps = 1/10", pass,
           pass ? "residual < 1e-10 within budget" : detail.str());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
