#include "kstab/counts.hpp"

#include <algorithm>
#include <functional>

namespace kstab {

namespace {

Rat floor_rat(const Rat& q) {
    Int n = numerator(q), d = denominator(q);
    Int f = n / d;
    if (n % d != 0 && n < 0) f -= 1;
    return Rat(f);
}

Rat ceil_rat(const Rat& q) { return -floor_rat(-q); }

}  // namespace

std::vector<RatVec> lattice_points(const DelzantPolytope& p, long k) {
    if (k < 1) throw std::invalid_argument("lattice_points: k must be positive");
    for (std::size_t i = 0; i < p.facets().size(); ++i) {
        if (!is_integer(p.facets()[i].offset * k))
            throw DomainError("NonIntegralDilate",
                              "k = " + std::to_string(k) + " does not clear the denominator of facet " +
                                  std::to_string(i) + " (offset " + format_rational(p.facets()[i].offset) +
                                  ")");
    }
    const int n = p.dim();
    // Bounding box of kP from the vertex cache.
    RatVec lo = p.vertices()[0].coords, hi = lo;
    for (const auto& v : p.vertices())
        for (int i = 0; i < n; ++i) {
            lo(i) = std::min(lo(i), v.coords(i), [](const Rat& a, const Rat& b) { return a < b; });
            hi(i) = std::max(hi(i), v.coords(i), [](const Rat& a, const Rat& b) { return a < b; });
        }
    std::vector<long> lo_i(n), hi_i(n);
    for (int i = 0; i < n; ++i) {
        lo_i[i] = ceil_rat(lo(i) * k).convert_to<long>();
        hi_i[i] = floor_rat(hi(i) * k).convert_to<long>();
    }
    std::vector<RatVec> out;
    RatVec m = RatVec::Zero(n);
    std::vector<long> cur(lo_i);
    if (n == 0) return out;
    while (true) {
        for (int i = 0; i < n; ++i) m(i) = cur[i];
        bool inside = true;
        for (const auto& f : p.facets())
            if (f.normal.dot(m) < f.offset * k) { inside = false; break; }
        if (inside) out.push_back(m);
        int i = n - 1;
        while (i >= 0) {
            if (++cur[i] <= hi_i[i]) break;
            cur[i] = lo_i[i];
            --i;
        }
        if (i < 0) break;
    }
    // Row-major scan is already lexicographic.
    return out;
}

WeightSums weight_sums(const DelzantPolytope& p, long k, const TorusVector& u,
                       const std::optional<TorusVector>& v) {
    WeightSums ws;
    ws.k = k;
    for (const RatVec& m : lattice_points(p, k)) {
        ++ws.dim;
        Rat wu = u.dot(m);
        ws.wt_u += wu;
        ws.sq_u += wu * wu;
        if (v) ws.cross_uv += wu * v->dot(m);
    }
    return ws;
}

std::vector<Rat> fit_polynomial(const std::vector<Rat>& xs, const std::vector<Rat>& ys, int deg) {
    if (static_cast<int>(xs.size()) < deg + 1 || xs.size() != ys.size())
        throw std::invalid_argument("fit_polynomial: not enough samples");
    // Newton's divided differences on the first deg+1 samples.
    std::vector<Rat> coef(ys.begin(), ys.begin() + deg + 1);
    for (int j = 1; j <= deg; ++j)
        for (int i = deg; i >= j; --i)
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
    // Expand to monomial coefficients.
    std::vector<Rat> poly(deg + 1, Rat(0));
    std::vector<Rat> basis{Rat(1)};  // product (x - x_0)...(x - x_{j-1})
    for (int j = 0; j <= deg; ++j) {
        for (std::size_t i = 0; i < basis.size(); ++i) poly[i] += coef[j] * basis[i];
        if (j < deg) {
            basis.push_back(0);
            for (int i = static_cast<int>(basis.size()) - 1; i > 0; --i)
                basis[i] = basis[i - 1] - xs[j] * basis[i];
            basis[0] = -xs[j] * basis[0];
            // The loop above computed basis * (x - x_j) in place.
        }
    }
    auto eval = [&](const Rat& x) {
        Rat y = 0, xp = 1;
        for (int i = 0; i <= deg; ++i) {
            y += poly[i] * xp;
            xp *= x;
        }
        return y;
    };
    for (std::size_t i = deg + 1; i < xs.size(); ++i)
        if (eval(xs[i]) != ys[i])
            throw DomainError("FitInconsistent",
                              "interpolant of degree " + std::to_string(deg) +
                                  " fails to reproduce the sample at k = " + format_rational(xs[i]));
    return poly;
}

EhrhartData ehrhart_fit(const DelzantPolytope& p, const TorusVector& u,
                        const std::optional<TorusVector>& v) {
    const int n = p.dim();
    Int dlcm = 1;
    for (const auto& f : p.facets())
        dlcm = boost::multiprecision::lcm(dlcm, denominator(f.offset));
    const long d = dlcm.convert_to<long>();

    auto fit_window = [&](long start) {
        std::vector<Rat> ks;
        std::vector<Rat> as, bs, cs, ds;
        for (long i = start; i < start + n + 4; ++i) {
            long k = d * i;
            WeightSums ws = weight_sums(p, k, u, v);
            ks.push_back(Rat(k));
            as.push_back(Rat(ws.dim));
            bs.push_back(ws.wt_u);
            cs.push_back(ws.sq_u);
            ds.push_back(ws.cross_uv);
        }
        EhrhartData e;
        auto pa = fit_polynomial(ks, as, n);
        auto pb = fit_polynomial(ks, bs, n + 1);
        auto pc = fit_polynomial(ks, cs, n + 2);
        auto pd = fit_polynomial(ks, ds, n + 2);
        e.a0 = pa[n];
        e.a1 = n >= 1 ? pa[n - 1] : Rat(0);
        e.b0 = pb[n + 1];
        e.b1 = pb[n];
        e.c0 = pc[n + 2];
        e.d0 = pd[n + 2];
        return e;
    };

    EhrhartData e1 = fit_window(1);
    EhrhartData e2 = fit_window(2);
    if (e1.a0 != e2.a0 || e1.a1 != e2.a1 || e1.b0 != e2.b0 || e1.b1 != e2.b1 || e1.c0 != e2.c0 ||
        e1.d0 != e2.d0)
        throw DomainError("FitInconsistent", "Ehrhart fits over shifted k-windows disagree");
    return e1;
}

JetWeights jet_weights(const VertexData& vd, const TorusVector& u, long l) {
    if (l < 1) throw std::invalid_argument("jet_weights: l must be positive");
    const int n = static_cast<int>(vd.coords.size());
    std::vector<Rat> ew(n);
    for (int i = 0; i < n; ++i) ew[i] = u.dot(vd.edge_generators[i]);
    JetWeights jw;
    jw.l = l;
    std::vector<long> s(n, 0);
    // Enumerate exponent vectors with |s| <= l-1.
    std::function<void(int, long)> rec = [&](int i, long remaining) {
        if (i == n) {
            ++jw.dim;
            Rat w = 0;
            for (int j = 0; j < n; ++j) w -= Rat(s[j]) * ew[j];
            jw.wt += w;
            jw.sq += w * w;
            return;
        }
        for (long e = 0; e <= remaining; ++e) {
            s[i] = e;
            rec(i + 1, remaining - e);
        }
        s[i] = 0;
    };
    rec(0, l - 1);
    return jw;
}

FixedPointData fixed_point_data(const VertexData& vd, const TorusVector& u) {
    FixedPointData fp;
    fp.h = -u.dot(vd.coords);
    fp.lap_h = 0;
    fp.hess_uu = 0;
    for (const auto& e : vd.edge_generators) {
        Rat w = u.dot(e);
        fp.lap_h -= w;
        fp.hess_uu += w * w;
    }
    return fp;
}

Rat hessian_pairing(const VertexData& vd, const TorusVector& u, const TorusVector& v) {
    Rat s = 0;
    for (const auto& e : vd.edge_generators) s += u.dot(e) * v.dot(e);
    return s;
}

}  // namespace kstab
