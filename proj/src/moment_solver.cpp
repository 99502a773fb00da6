#include "kstab/moment_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kstab {

namespace {

// Coefficients smaller than this are treated as exact cancellations when
// scanning residual series; they are float dust from corrections that cancel
// exactly in real arithmetic.
constexpr double kSeriesDust = 1e-12;

std::string monomial_str(const Monomial& m, int j) {
    std::ostringstream os;
    os << "h" << (j + 1) << ": " << m.coeff;
    for (std::size_t i = 0; i < m.z_exp.size(); ++i)
        if (m.z_exp[i]) os << " z" << (i + 1) << "^" << m.z_exp[i];
    for (std::size_t i = 0; i < m.zbar_exp.size(); ++i)
        if (m.zbar_exp[i]) os << " zbar" << (i + 1) << "^" << m.zbar_exp[i];
    if (m.eps_exp) os << " eps^" << m.eps_exp;
    return os.str();
}

int coord_degree(const Monomial& m, int k) { return m.z_exp[k] + m.zbar_exp[k]; }

int total_degree(const Monomial& m) {
    int t = 0;
    for (std::size_t k = 0; k < m.z_exp.size(); ++k) t += m.z_exp[k] + m.zbar_exp[k];
    return t;
}

bool is_pure_zzbar(const Monomial& m, int j) {
    if (m.z_exp[j] != 1 || m.zbar_exp[j] != 1 || m.eps_exp != 0) return false;
    for (std::size_t k = 0; k < m.z_exp.size(); ++k) {
        if (static_cast<int>(k) == j) continue;
        if (m.z_exp[k] || m.zbar_exp[k]) return false;
    }
    return true;
}

using Series = std::map<Rat, double>;

Series series_mul(const Series& a, const Series& b) {
    Series out;
    for (const auto& [qa, ca] : a)
        for (const auto& [qb, cb] : b) out[qa + qb] += ca * cb;
    return out;
}

Series series_pow(const Series& a, int k) {
    Series out{{Rat(0), 1.0}};
    for (int i = 0; i < k; ++i) out = series_mul(out, a);
    return out;
}

void series_add_scaled(Series& a, const Series& b, double s) {
    for (const auto& [q, c] : b) a[q] += s * c;
}

// Residual series of h_j along the solution series b (real slice).
Series residual_series(const HamiltonianFamily& f, int j, const std::vector<Series>& b) {
    Series out;
    for (const Monomial& m : f.models[j]) {
        Series term{{Rat(m.eps_exp), m.coeff}};
        bool zero = false;
        for (int k = 0; k < f.r && !zero; ++k) {
            int d = coord_degree(m, k);
            if (d == 0) continue;
            if (b[k].empty()) zero = true;
            else term = series_mul(term, series_pow(b[k], d));
        }
        if (!zero) series_add_scaled(out, term, 1.0);
    }
    return out;
}

// Lowest exponent whose coefficient survives the dust threshold.
std::optional<std::pair<Rat, double>> leading_term(const Series& s) {
    for (const auto& [q, c] : s)
        if (std::abs(c) > kSeriesDust) return std::make_pair(q, c);
    return std::nullopt;
}

}  // namespace

double PowerSeries::eval(double eps) const {
    double v = 0;
    for (const auto& [q, c] : terms) v += c * std::pow(eps, to_double(q));
    return v;
}

Eigen::VectorXd ApproxSolution::at(double eps) const {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(coordinates.size());
    for (std::size_t j = 0; j < coordinates.size(); ++j) b(static_cast<int>(j)) = coordinates[j].eval(eps);
    return b;
}

HypothesisReport validate_hypotheses(const HamiltonianFamily& f) {
    if (f.r < 1 || f.w < 1 || f.w > f.r)
        throw std::invalid_argument("family: need 1 <= w <= r");
    if (static_cast<int>(f.models.size()) != f.r)
        throw std::invalid_argument("family: one model per Hamiltonian required");
    HypothesisReport rep;
    rep.c.assign(f.w, 0.0);
    rep.p.assign(f.w, 0);
    for (int j = 0; j < f.r; ++j) {
        double pure_coeff = 0.0;
        std::map<int, double> constant_terms;  // eps exponent -> coefficient
        for (const Monomial& m : f.models[j]) {
            if (static_cast<int>(m.z_exp.size()) != f.r || static_cast<int>(m.zbar_exp.size()) != f.r)
                throw std::invalid_argument("family: exponent lists must have length r");
            if (m.eps_exp < 0)
                throw DomainError("StructureViolation",
                                  "negative eps exponent in " + monomial_str(m, j));
            const int t = total_degree(m);
            const int tj = coord_degree(m, j);
            if (t == 0) {
                if (m.eps_exp == 0 && j < f.w)
                    throw DomainError("StructureViolation",
                                      "constant term without eps factor in " + monomial_str(m, j));
                constant_terms[m.eps_exp] += m.coeff;
                continue;
            }
            if (tj == 0)
                throw DomainError("StructureViolation",
                                  "non-constant term missing z_" + std::to_string(j + 1) + ": " +
                                      monomial_str(m, j));
            if (tj == 1)
                throw DomainError("StructureViolation",
                                  "term linear in z_" + std::to_string(j + 1) +
                                      " (the differential must vanish on the zero slice): " +
                                      monomial_str(m, j));
            if (tj == 2) {
                if (is_pure_zzbar(m, j)) {
                    pure_coeff += m.coeff;
                    continue;
                }
                if (m.eps_exp == 0)
                    throw DomainError("StructureViolation",
                                      "eps-free quadratic term other than |z_" + std::to_string(j + 1) +
                                          "|^2: " + monomial_str(m, j));
            }
            // t_j >= 3 or eps-suppressed quadratic: admissible.
        }
        if (std::abs(pure_coeff - 1.0) > 1e-14)
            throw DomainError("StructureViolation",
                              "|z_" + std::to_string(j + 1) + "|^2 must enter h" + std::to_string(j + 1) +
                                  " with unit coefficient (got " + std::to_string(pure_coeff) + ")");
        if (j < f.w) {
            std::optional<int> pj;
            for (const auto& [e, c] : constant_terms) {
                if (c == 0.0) continue;
                pj = e;
                break;
            }
            if (!pj)
                throw DomainError("StructureViolation", "h" + std::to_string(j + 1) +
                                                            "(0) has no leading constant term");
            double cj = constant_terms[*pj];
            if (cj >= 0)
                throw DomainError("StructureViolation",
                                  "leading constant of h" + std::to_string(j + 1) +
                                      " must be negative, got " + std::to_string(cj));
            // Sampled confirmation that h_j(0) < 0 for small eps.
            for (double eps : {1e-3, 1e-4}) {
                double v = 0;
                for (const auto& [e, c] : constant_terms) v += c * std::pow(eps, e);
                if (v >= 0)
                    throw DomainError("StructureViolation",
                                      "h" + std::to_string(j + 1) + "(0) is nonnegative at eps = " +
                                          std::to_string(eps));
            }
            rep.c[j] = cj;
            rep.p[j] = *pj;
        }
    }
    return rep;
}

ApproxSolution approximate_solution_series(const HamiltonianFamily& f, int l) {
    if (l < 1) throw std::invalid_argument("approximate_solution: order must be >= 1");
    HypothesisReport rep = validate_hypotheses(f);
    std::vector<Series> b(f.r);
    std::vector<double> lambda1(f.w);
    for (int j = 0; j < f.w; ++j) {
        lambda1[j] = std::sqrt(-rep.c[j]);
        b[j][Rat(rep.p[j], 2)] = lambda1[j];
    }
    const Rat target(l + 1);
    const int max_rounds = 400;
    for (int round = 0;; ++round) {
        // Leading residual order over the solved indices.
        std::optional<Rat> min_q;
        std::vector<std::optional<std::pair<Rat, double>>> lead(f.w);
        for (int j = 0; j < f.w; ++j) {
            lead[j] = leading_term(residual_series(f, j, b));
            if (lead[j] && lead[j]->first < target)
                if (!min_q || lead[j]->first < *min_q) min_q = lead[j]->first;
        }
        if (!min_q) break;  // every residual is O(eps^{l+1})
        if (round >= max_rounds)
            throw DomainError("OrderUnreachable",
                              "correction loop stalled before reaching order " + std::to_string(l + 1));
        for (int j = 0; j < f.w; ++j) {
            if (!lead[j] || lead[j]->first != *min_q) continue;
            const Rat q = lead[j]->first;
            const double psi = lead[j]->second;
            b[j][q - Rat(rep.p[j], 2)] += -psi / (2.0 * lambda1[j]);
        }
    }
    ApproxSolution sol;
    sol.order = l;
    sol.coordinates.resize(f.r);
    for (int j = 0; j < f.r; ++j) sol.coordinates[j].terms = b[j];
    return sol;
}

Eigen::VectorXd approximate_solution(const HamiltonianFamily& f, double eps, int l) {
    if (!(eps > 0) || eps >= 1) throw std::invalid_argument("approximate_solution: need 0 < eps < 1");
    Eigen::VectorXd b = approximate_solution_series(f, l).at(eps);
    if (b.norm() > f.ball_radius)
        throw DomainError("OrderUnreachable", "the order-" + std::to_string(l) +
                                                  " approximate solution leaves the model ball at eps = " +
                                                  std::to_string(eps));
    return b;
}

double evaluate_hamiltonian(const HamiltonianFamily& f, int j, const Eigen::VectorXd& b, double eps) {
    double v = 0;
    for (const Monomial& m : f.models[j]) {
        double term = m.coeff * std::pow(eps, m.eps_exp);
        for (int k = 0; k < f.r; ++k) {
            int d = coord_degree(m, k);
            if (d) term *= std::pow(b(k), d);
        }
        v += term;
    }
    return v;
}

namespace {

double max_residual(const HamiltonianFamily& f, const Eigen::VectorXd& b, double eps) {
    double r = 0;
    for (int j = 0; j < f.w; ++j) r = std::max(r, std::abs(evaluate_hamiltonian(f, j, b, eps)));
    return r;
}

// d h_j / d x_k on the real slice.
double hamiltonian_derivative(const HamiltonianFamily& f, int j, int k, const Eigen::VectorXd& b,
                              double eps) {
    double v = 0;
    for (const Monomial& m : f.models[j]) {
        int dk = coord_degree(m, k);
        if (dk == 0) continue;
        double term = m.coeff * dk * std::pow(eps, m.eps_exp) * std::pow(b(k), dk - 1);
        for (int i = 0; i < f.r; ++i) {
            if (i == k) continue;
            int d = coord_degree(m, i);
            if (d) term *= std::pow(b(i), d);
        }
        v += term;
    }
    return v;
}

}  // namespace

SolveTrace newton_polish(const HamiltonianFamily& f, double eps, const Eigen::VectorXd& b_start,
                         double tol) {
    if (tol <= 0) throw std::invalid_argument("newton_polish: tol must be positive");
    validate_hypotheses(f);
    SolveTrace trace;
    trace.eps = eps;
    Eigen::VectorXd b = b_start;
    double res = max_residual(f, b, eps);
    trace.points.push_back(b);
    trace.residuals.push_back(res);

    const int w = f.w;
    const long budget = 200;
    int stagnant_damped = 0;
    for (long it = 0; it < budget && res >= tol; ++it) {
        Eigen::VectorXd g(w);
        Eigen::MatrixXd jac(w, w);
        for (int j = 0; j < w; ++j) {
            g(j) = evaluate_hamiltonian(f, j, b, eps);
            for (int k = 0; k < w; ++k) jac(j, k) = hamiltonian_derivative(f, j, k, b, eps);
        }
        Eigen::VectorXd step;
        bool damped = false;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(jac);
        if (lu.isInvertible()) {
            step = lu.solve(-g);
        } else {
            damped = true;
            Eigen::MatrixXd reg = jac.transpose() * jac +
                                  1e-10 * Eigen::MatrixXd::Identity(w, w);
            step = reg.ldlt().solve(-jac.transpose() * g);
        }
        double eta = 1.0;
        bool accepted = false;
        for (int halve = 0; halve < 60; ++halve) {
            Eigen::VectorXd cand = b;
            for (int j = 0; j < w; ++j) cand(j) += eta * step(j);
            double rc = max_residual(f, cand, eps);
            if (rc < res * (1.0 - 1e-4 * eta) || rc < tol) {
                b = cand;
                res = rc;
                trace.points.push_back(b);
                trace.residuals.push_back(res);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted) {
            if (damped && ++stagnant_damped >= 3)
                break;
            if (!damped) break;
        } else {
            stagnant_damped = 0;
        }
    }
    trace.final_point = b;
    trace.final_residual = res;
    for (int j = 0; j < w; ++j) trace.coordinate_magnitudes.push_back(std::abs(b(j)));
    if (res >= tol)
        throw SolverError("NewtonDiverged",
                          "residual " + std::to_string(res) + " above tol after the iteration budget",
                          trace);
    for (int j = 0; j < w; ++j) {
        if (b(j) == 0.0) {
            double slice_value = evaluate_hamiltonian(f, j, b, eps);
            throw SolverError("CoordinateCollapse",
                              "solved coordinate z_" + std::to_string(j + 1) +
                                  " vanished; h there evaluates to " + std::to_string(slice_value) +
                                  ", which the hypotheses force to be negative, contradicting the zero",
                              trace);
        }
    }
    return trace;
}

SolveTrace surface_mode_solve(const HamiltonianFamily& f, double eps, const Rat& kappa, double c,
                              int order, double tol) {
    HypothesisReport rep = validate_hypotheses(f);
    Rat min_half_p = Rat(rep.p[0], 2);
    for (int j = 1; j < f.w; ++j) min_half_p = std::min(min_half_p, Rat(rep.p[j], 2));
    if (kappa >= min_half_p)
        throw DomainError("KappaTooLarge", "kappa = " + format_rational(kappa) +
                                               " is not below min_j p_j / 2 = " +
                                               format_rational(min_half_p));
    const double bound = c * std::pow(eps, to_double(kappa));
    Eigen::VectorXd b0 = approximate_solution(f, eps, order);
    if (b0.norm() > bound)
        throw DomainError("BallViolation",
                          "approximate solution leaves the shrinking ball: |b| = " +
                              std::to_string(b0.norm()) + " > " + std::to_string(bound));
    SolveTrace trace = newton_polish(f, eps, b0, tol);
    for (const auto& pt : trace.points)
        if (pt.norm() > bound)
            throw DomainError("BallViolation",
                              "an iterate leaves the shrinking ball: |b| = " +
                                  std::to_string(pt.norm()) + " > " + std::to_string(bound));
    return trace;
}

// --- model file format -------------------------------------------------------

namespace {

double parse_coeff(const std::string& tok, int lineno) {
    try {
        if (tok.find('/') != std::string::npos) return to_double(parse_rational(tok));
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(lineno, "malformed coefficient '" + tok + "'");
    }
}

}  // namespace

HamiltonianFamily parse_family(std::istream& in) {
    HamiltonianFamily f;
    bool have_header = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream is(line);
        std::string word;
        if (!(is >> word)) continue;
        if (word == "family") {
            if (have_header) throw ParseError(lineno, "duplicate family line");
            if (!(is >> f.r >> f.w) || f.r < 1 || f.w < 1 || f.w > f.r)
                throw ParseError(lineno, "expected 'family <r> <w>' with 1 <= w <= r");
            std::string opt;
            if (is >> opt) {
                if (opt != "ball") throw ParseError(lineno, "unknown family option '" + opt + "'");
                if (!(is >> f.ball_radius) || f.ball_radius <= 0)
                    throw ParseError(lineno, "expected a positive ball radius");
            }
            f.models.assign(f.r, {});
            have_header = true;
        } else if (word.size() >= 2 && word[0] == 'h') {
            if (!have_header) throw ParseError(lineno, "monomial before the family line");
            int j;
            try {
                j = std::stoi(word.substr(1));
            } catch (const std::exception&) {
                throw ParseError(lineno, "malformed Hamiltonian index '" + word + "'");
            }
            if (j < 1 || j > f.r)
                throw ParseError(lineno, "Hamiltonian index out of range: " + word);
            std::vector<std::string> toks;
            std::string t;
            while (is >> t) toks.push_back(t);
            if (static_cast<int>(toks.size()) != 2 * f.r + 2)
                throw ParseError(lineno, "expected coeff, " + std::to_string(f.r) +
                                             " z-exponents, " + std::to_string(f.r) +
                                             " zbar-exponents and an eps-exponent");
            Monomial m;
            m.coeff = parse_coeff(toks[0], lineno);
            auto parse_exp = [&](const std::string& s) {
                try {
                    std::size_t pos = 0;
                    int v = std::stoi(s, &pos);
                    if (pos != s.size() || v < 0) throw std::invalid_argument("bad");
                    return v;
                } catch (const std::exception&) {
                    throw ParseError(lineno, "malformed exponent '" + s + "'");
                }
            };
            for (int i = 0; i < f.r; ++i) m.z_exp.push_back(parse_exp(toks[1 + i]));
            for (int i = 0; i < f.r; ++i) m.zbar_exp.push_back(parse_exp(toks[1 + f.r + i]));
            m.eps_exp = parse_exp(toks[1 + 2 * f.r]);
            f.models[j - 1].push_back(std::move(m));
        } else {
            throw ParseError(lineno, "unknown directive '" + word + "'");
        }
    }
    if (!have_header) throw ParseError("missing family line");
    return f;
}

HamiltonianFamily parse_family_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return parse_family(in);
}

}  // namespace kstab
