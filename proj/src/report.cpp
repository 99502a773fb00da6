#include "kstab/report.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

namespace kstab::cli {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

json base_report(const std::string& command) {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["command"] = command;
    r["inputs"] = json::object();
    r["results"] = json::object();
    return r;
}

void finish(json& r, const Stopwatch& sw) { r["timing"] = {{"seconds", sw.seconds()}}; }

json error_json(const std::string& code, const std::string& detail) {
    return {{"code", code}, {"detail", detail}};
}

// Runs the body with uniform error mapping into the report.
Outcome guarded(const std::string& command, const std::function<void(json&, Outcome&)>& body) {
    Stopwatch sw;
    Outcome out;
    out.report = base_report(command);
    try {
        body(out.report, out);
    } catch (const ParseError& e) {
        out.report["error"] = error_json("ParseError", e.what());
        out.exit_code = kExitInput;
    } catch (const SolverError& e) {
        out.report["error"] = error_json(e.code(), e.what());
        out.exit_code = kExitDomain;
    } catch (const DomainError& e) {
        out.report["error"] = error_json(e.code(), e.what());
        out.exit_code = kExitDomain;
    } catch (const std::invalid_argument& e) {
        out.report["error"] = error_json("InvalidArgument", e.what());
        out.exit_code = kExitInput;
    }
    finish(out.report, sw);
    return out;
}

std::vector<Rat> parse_grid(const std::string& text) {
    std::vector<Rat> grid;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) grid.push_back(parse_rational(tok));
    if (grid.empty()) throw std::invalid_argument("empty grid");
    return grid;
}

json face_json(const Face& f) {
    json j;
    j["active_facets"] = std::vector<int>(f.active.begin(), f.active.end());
    j["dimension"] = f.dimension;
    return j;
}

const Face& face_from_text(const DelzantPolytope& p, const std::string& text) {
    if (text == "all") return p.whole_polytope_face();
    std::set<int> active;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            active.insert(std::stoi(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed face spec '" + text + "'");
        }
    }
    return p.face_by_active_set(active);
}

}  // namespace

json rat_json(const Rat& q) { return format_rational(q); }

json vec_json(const RatVec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(format_rational(v(i)));
    return a;
}

json poly_json(const EpsPoly& p) {
    json m = json::object();
    for (const auto& [k, c] : p.coefficients()) m[std::to_string(k)] = format_rational(c);
    return m;
}

json expansion_json(const EpsExpansion& e) {
    json j;
    j["kind"] = e.kind() == EpsExpansion::Kind::Polynomial ? "polynomial" : "rational_function";
    j["num"] = poly_json(e.num());
    if (e.kind() == EpsExpansion::Kind::RationalFunction) j["den"] = poly_json(e.den());
    return j;
}

json verdict_json(const StabilityVerdict& v) {
    json j;
    j["status"] = status_name(v.status);
    j["eps"] = rat_json(v.eps);
    j["vacuous"] = v.vacuous;
    if (!v.vacuous) {
        j["certificate"] = rat_json(v.certificate);
        if (v.witness) {
            j["witness"] = {{"direction", vec_json(v.witness->direction)},
                            {"vertex", vec_json(v.witness->vertex)},
                            {"value", rat_json(v.witness->value)}};
        }
        json rays = json::array();
        for (const auto& r : v.rays)
            rays.push_back({{"direction", vec_json(r.direction)},
                            {"vertex", vec_json(r.vertex)},
                            {"value", rat_json(r.value)}});
        j["rays"] = rays;
    }
    return j;
}

Outcome cmd_validate(const std::string& path) {
    return guarded("validate", [&](json& r, Outcome&) {
        DelzantPolytope p = parse_polytope_file(path);
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        json verts = json::array();
        for (const auto& v : p.vertices()) {
            json jv;
            jv["coords"] = vec_json(v.coords);
            jv["active_facets"] = v.active;
            json edges = json::array();
            for (const auto& e : v.edge_generators) edges.push_back(vec_json(e));
            jv["edge_generators"] = edges;
            verts.push_back(jv);
        }
        r["results"]["dim"] = p.dim();
        r["results"]["vertices"] = verts;
        json faces = json::array();
        for (const auto& f : p.faces()) faces.push_back(face_json(f));
        r["results"]["faces"] = faces;
        r["results"]["volume"] = rat_json(integrate(p, Poly2::constant(p.dim(), 1)));
    });
}

Outcome cmd_invariants(const std::string& path, const std::string& u_text,
                       const std::optional<std::string>& v_text) {
    return guarded("invariants", [&](json& r, Outcome&) {
        DelzantPolytope p = parse_polytope_file(path);
        TorusVector u = parse_rational_vector(u_text);
        if (u.size() != p.dim()) throw std::invalid_argument("--u has wrong length");
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        r["inputs"]["u"] = vec_json(u);
        EhrhartData e = ehrhart_from_integrals(p, u, u);
        r["results"]["ehrhart"] = {{"a0", rat_json(e.a0)}, {"a1", rat_json(e.a1)},
                                   {"b0", rat_json(e.b0)}, {"b1", rat_json(e.b1)},
                                   {"c0", rat_json(e.c0)}, {"d0", rat_json(e.d0)}};
        r["results"]["futaki_u"] = rat_json(futaki(p, u));
        r["results"]["norm_sq_u"] = rat_json(inner_product(p, u, u));
        if (v_text) {
            TorusVector v = parse_rational_vector(*v_text);
            if (v.size() != p.dim()) throw std::invalid_argument("--v has wrong length");
            r["inputs"]["v"] = vec_json(v);
            r["results"]["futaki_v"] = rat_json(futaki(p, v));
            r["results"]["inner_product_uv"] = rat_json(inner_product(p, u, v));
        }
        r["results"]["extremal_field"] = vec_json(extremal_field(p));
    });
}

Outcome cmd_blowup(const std::string& path, const std::string& vertex_text,
                   const std::string& u_text, const std::optional<std::string>& eps_text,
                   const std::optional<std::string>& eps2_text) {
    return guarded("blowup", [&](json& r, Outcome&) {
        DelzantPolytope p = parse_polytope_file(path);
        RatVec vcoords = parse_rational_vector(vertex_text);
        TorusVector u = parse_rational_vector(u_text);
        if (eps_text && eps2_text) throw std::invalid_argument("--eps and --eps2 are mutually exclusive");
        if (!eps_text && !eps2_text) throw std::invalid_argument("one of --eps / --eps2 is required");
        // t = eps^2 is the chop size; expansions are even in eps, so both
        // parameterisations evaluate exactly.
        Rat t = eps2_text ? parse_rational(*eps2_text)
                          : parse_rational(*eps_text) * parse_rational(*eps_text);
        int vi = p.vertex_index(vcoords);
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        r["inputs"]["vertex"] = vec_json(vcoords);
        r["inputs"]["u"] = vec_json(u);
        r["inputs"]["eps2"] = rat_json(t);
        if (eps_text) r["inputs"]["eps"] = rat_json(parse_rational(*eps_text));

        CountExpansions e = expand_counts(p, vi, u);
        r["results"]["expansions"] = {{"a0", poly_json(e.a0)}, {"a1", poly_json(e.a1)},
                                      {"b0", poly_json(e.b0)}, {"b1", poly_json(e.b1)},
                                      {"c0", poly_json(e.c0)}, {"d0", poly_json(e.d0)}};
        EpsExpansion F = futaki_eps(p, vi, u);
        r["results"]["futaki_eps"] = expansion_json(F);
        auto [A, B] = ab_coefficients(p, vi);
        r["results"]["A"] = expansion_json(A);
        r["results"]["B"] = expansion_json(B);

        auto eval_even_poly = [&](const EpsPoly& poly) {
            Rat v = 0;
            for (const auto& [k, c] : poly.coefficients()) {
                Rat tp = 1;
                for (int i = 0; i < k / 2; ++i) tp *= t;
                v += c * tp;
            }
            return v;
        };
        auto eval_even_exp = [&](const EpsExpansion& ex) {
            return eval_even_poly(ex.num()) / eval_even_poly(ex.den());
        };
        r["results"]["values_at_eps"] = {
            {"a0", rat_json(eval_even_poly(e.a0))}, {"a1", rat_json(eval_even_poly(e.a1))},
            {"b0", rat_json(eval_even_poly(e.b0))}, {"b1", rat_json(eval_even_poly(e.b1))},
            {"c0", rat_json(eval_even_poly(e.c0))}, {"d0", rat_json(eval_even_poly(e.d0))},
            {"futaki_eps", rat_json(eval_even_exp(F))},
            {"A", rat_json(eval_even_exp(A))},
            {"B", rat_json(eval_even_exp(B))}};

        // Oracle section: the chopped polytope must reproduce the values.
        DelzantPolytope chopped = chop_corner(p, vi, t);
        EhrhartData fit = ehrhart_fit(chopped, u, u);
        json oracle;
        oracle["chop_fit_matches"] =
            fit.a0 == eval_even_poly(e.a0) && fit.a1 == eval_even_poly(e.a1) &&
            fit.b0 == eval_even_poly(e.b0) && fit.b1 == eval_even_poly(e.b1) &&
            fit.c0 == eval_even_poly(e.c0) && fit.d0 == eval_even_poly(e.d0);
        r["oracle"] = oracle;
    });
}

Outcome cmd_check(const std::string& path, const std::string& face_text,
                  const std::string& grid_text) {
    return guarded("check", [&](json& r, Outcome& out) {
        DelzantPolytope p = parse_polytope_file(path);
        const Face& face = face_from_text(p, face_text);
        std::vector<Rat> grid = parse_grid(grid_text);
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        r["inputs"]["face"] = face_json(face);
        json grid_j = json::array();
        for (const auto& g : grid) grid_j.push_back(rat_json(g));
        r["inputs"]["grid"] = grid_j;
        json verdicts = json::array();
        std::ostringstream csv;
        csv << "eps,quantity,value\n";
        for (const Rat& eps : grid) {
            StabilityVerdict v = check_point_stability(p, PointSpec{face}, eps);
            verdicts.push_back(verdict_json(v));
            csv << format_rational(eps) << ",status," << status_name(v.status) << "\n";
            if (!v.vacuous)
                csv << format_rational(eps) << ",certificate," << format_rational(v.certificate)
                    << "\n";
        }
        r["results"]["verdicts"] = verdicts;
        out.csv = csv.str();
    });
}

Outcome cmd_find_point(const std::string& path, const std::string& grid_text) {
    return guarded("find_point", [&](json& r, Outcome& out) {
        DelzantPolytope p = parse_polytope_file(path);
        std::vector<Rat> grid = parse_grid(grid_text);
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        json grid_j = json::array();
        for (const auto& g : grid) grid_j.push_back(rat_json(g));
        r["inputs"]["grid"] = grid_j;
        FindPointResult res = find_stable_point(p, grid);
        json cands = json::array();
        std::ostringstream csv;
        csv << "eps,quantity,value\n";
        for (const auto& c : res.candidates) {
            json jc;
            jc["face"] = face_json(c.face);
            jc["combined"] = status_name(c.combined);
            jc["monotonicity_violation"] = c.monotonicity_violation;
            json vs = json::array();
            for (const auto& v : c.verdicts) vs.push_back(verdict_json(v));
            jc["verdicts"] = vs;
            cands.push_back(jc);
        }
        r["results"]["candidates"] = cands;
        if (res.found) {
            r["results"]["found"] = face_json(res.found->face);
            for (const auto& c : res.candidates)
                if (c.face.active == res.found->face.active)
                    for (const auto& v : c.verdicts)
                        csv << format_rational(v.eps) << ",found_face_status,"
                            << status_name(v.status) << "\n";
        } else {
            r["results"]["found"] = nullptr;
        }
        out.csv = csv.str();
    });
}

Outcome cmd_oracle(const std::string& path, long kmax) {
    return guarded("oracle", [&](json& r, Outcome&) {
        DelzantPolytope p = parse_polytope_file(path);
        const int n = p.dim();
        r["inputs"]["path"] = path;
        r["inputs"]["polytope"] = format_polytope(p);
        r["inputs"]["kmax"] = kmax;
        Int dlcm = 1;
        for (const auto& f : p.facets())
            dlcm = boost::multiprecision::lcm(dlcm, denominator(f.offset));
        long need = dlcm.convert_to<long>() * (n + 5);
        if (kmax < need)
            throw std::invalid_argument("kmax must be at least " + std::to_string(need) +
                                        " for the fit windows of this polytope");
        std::vector<TorusVector> dirs;
        {
            RatVec e1 = RatVec::Zero(n), e2 = RatVec::Zero(n), ones = RatVec::Zero(n);
            e1(0) = 1;
            e2(n > 1 ? 1 : 0) = 1;
            for (int i = 0; i < n; ++i) ones(i) = 1;
            dirs = {e1, e2, ones};
        }
        json checks = json::array();
        bool all_pass = true;
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            const TorusVector& u = dirs[i];
            const TorusVector& v = dirs[(i + 1) % dirs.size()];
            EhrhartData fit = ehrhart_fit(p, u, v);
            EhrhartData ints = ehrhart_from_integrals(p, u, v);
            auto add = [&](const char* name, const Rat& lhs, const Rat& rhs) {
                bool ok = lhs == rhs;
                all_pass = all_pass && ok;
                checks.push_back({{"identity", name},
                                  {"u", vec_json(u)},
                                  {"v", vec_json(v)},
                                  {"fit", rat_json(lhs)},
                                  {"integral", rat_json(rhs)},
                                  {"pass", ok}});
            };
            add("a0", fit.a0, ints.a0);
            add("a1", fit.a1, ints.a1);
            add("b0", fit.b0, ints.b0);
            add("b1", fit.b1, ints.b1);
            add("c0", fit.c0, ints.c0);
            add("d0", fit.d0, ints.d0);
        }
        r["oracle"] = {{"checks", checks}, {"all_pass", all_pass}};
        r["results"]["all_pass"] = all_pass;
    });
}

Outcome cmd_solve_moment(const std::string& path, const std::string& grid_text, double tol,
                         int order) {
    return guarded("solve_moment", [&](json& r, Outcome& out) {
        HamiltonianFamily f = parse_family_file(path);
        std::vector<double> grid;
        {
            std::istringstream is(grid_text);
            std::string tok;
            while (std::getline(is, tok, ',')) {
                try {
                    grid.push_back(std::stod(tok));
                } catch (const std::exception&) {
                    throw std::invalid_argument("malformed eps value '" + tok + "'");
                }
            }
            if (grid.empty()) throw std::invalid_argument("empty grid");
        }
        r["inputs"]["path"] = path;
        r["inputs"]["grid"] = grid;
        r["inputs"]["tol"] = tol;
        r["inputs"]["order"] = order;
        HypothesisReport rep = validate_hypotheses(f);
        r["results"]["hypotheses"] = {{"c", rep.c}, {"p", rep.p}};
        json runs = json::array();
        std::ostringstream csv;
        csv << "eps,quantity,value\n";
        for (double eps : grid) {
            Eigen::VectorXd b = approximate_solution(f, eps, order);
            double approx_res = 0;
            for (int j = 0; j < f.w; ++j)
                approx_res = std::max(approx_res, std::abs(evaluate_hamiltonian(f, j, b, eps)));
            SolveTrace trace = newton_polish(f, eps, b, tol);
            json jr;
            jr["eps"] = eps;
            jr["approx_residual"] = approx_res;
            jr["final_residual"] = trace.final_residual;
            jr["newton_steps"] = trace.points.size() - 1;
            std::vector<double> coords(trace.final_point.data(),
                                       trace.final_point.data() + trace.final_point.size());
            jr["point"] = coords;
            runs.push_back(jr);
            csv << eps << ",approx_residual," << approx_res << "\n";
            csv << eps << ",final_residual," << trace.final_residual << "\n";
        }
        r["results"]["runs"] = runs;
        out.csv = csv.str();
    });
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Exact relative K-stability toolkit for blowups of toric manifolds"};
    app.require_subcommand(1);

    std::string path, u_text, v_text, vertex_text, eps_text, eps2_text, face_text = "all";
    std::string grid_text = "1/8,1/16,1/32", out_path, format = "json";
    long kmax = 0;
    double tol = 1e-12;
    int order = 2;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write the report to this path instead of stdout");
        sub->add_option("--format", format, "json or csv (csv for sweep tables only)")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* validate = app.add_subcommand("validate", "validate a polytope file");
    validate->add_option("path", path)->required();
    add_common(validate);

    auto* invariants = app.add_subcommand("invariants", "Futaki invariant and inner products");
    invariants->add_option("path", path)->required();
    invariants->add_option("--u", u_text, "comma-separated rational vector")->required();
    invariants->add_option("--v", v_text, "optional second vector");
    add_common(invariants);

    auto* blowup = app.add_subcommand("blowup", "eps-expansions at a vertex");
    blowup->add_option("path", path)->required();
    blowup->add_option("--vertex", vertex_text, "vertex coordinates")->required();
    blowup->add_option("--u", u_text)->required();
    auto* eps_opt = blowup->add_option("--eps", eps_text, "blowup parameter eps");
    auto* eps2_opt = blowup->add_option("--eps2", eps2_text, "chop size t = eps^2");
    eps_opt->excludes(eps2_opt);
    add_common(blowup);

    auto* check = app.add_subcommand("check", "stability of a point stratum over an eps grid");
    check->add_option("path", path)->required();
    check->add_option("--face", face_text, "'all' or comma-separated active facet indices");
    check->add_option("--grid", grid_text, "comma-separated rational eps values");
    add_common(check);

    auto* find = app.add_subcommand("find-point", "search all strata for a stable point");
    find->add_option("path", path)->required();
    find->add_option("--grid", grid_text);
    add_common(find);

    auto* oracle = app.add_subcommand("oracle", "Ehrhart identity cross-checks");
    oracle->add_option("path", path)->required();
    oracle->add_option("--kmax", kmax, "largest dilate the harness may enumerate")->required();
    add_common(oracle);

    auto* solve = app.add_subcommand("solve-moment", "perturbation solver on a model file");
    solve->add_option("path", path)->required();
    solve->add_option("--grid", grid_text, "comma-separated real eps values")->required();
    solve->add_option("--tol", tol);
    solve->add_option("--order", order);
    add_common(solve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    Outcome out;
    if (validate->parsed()) out = cmd_validate(path);
    else if (invariants->parsed())
        out = cmd_invariants(path, u_text,
                             v_text.empty() ? std::nullopt : std::make_optional(v_text));
    else if (blowup->parsed())
        out = cmd_blowup(path, vertex_text, u_text,
                         eps_text.empty() ? std::nullopt : std::make_optional(eps_text),
                         eps2_text.empty() ? std::nullopt : std::make_optional(eps2_text));
    else if (check->parsed()) out = cmd_check(path, face_text, grid_text);
    else if (find->parsed()) out = cmd_find_point(path, grid_text);
    else if (oracle->parsed()) out = cmd_oracle(path, kmax);
    else if (solve->parsed()) out = cmd_solve_moment(path, grid_text, tol, order);

    std::string payload;
    if (format == "csv") {
        if (!out.csv) {
            std::cerr << "csv output is only available for sweep commands\n";
            return kExitInput;
        }
        payload = *out.csv;
    } else {
        payload = out.report.dump(2) + "\n";
    }
    if (!out_path.empty()) {
        std::ofstream of(out_path);
        if (!of) {
            std::cerr << "cannot open --out path " << out_path << "\n";
            return kExitInput;
        }
        of << payload;
    } else {
        std::cout << payload;
    }
    return out.exit_code;
}

}  // namespace kstab::cli
