#include "kstab/linalg.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace kstab {

namespace {

// Row-reduces m in place; returns the pivot columns.  If rhs is non-null it
// receives the same row operations.
std::vector<int> row_reduce(RatMat& m, RatMat* rhs) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (m(i, c) != 0) { p = i; break; }
        if (p < 0) continue;
        m.row(r).swap(m.row(p));
        if (rhs) rhs->row(r).swap(rhs->row(p));
        Rat inv = Rat(1) / m(r, c);
        m.row(r) *= inv;
        if (rhs) rhs->row(r) *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m(i, c) == 0) continue;
            Rat f = m(i, c);
            m.row(i) -= f * m.row(r);
            if (rhs) rhs->row(i) -= f * rhs->row(r);
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

bool lex_less(const RatVec& a, const RatVec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
}

}  // namespace

Rat det(const RatMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det of a non-square matrix");
    RatMat a = m;
    const int n = static_cast<int>(a.rows());
    Rat d = 1;
    for (int c = 0; c < n; ++c) {
        int p = -1;
        for (int i = c; i < n; ++i)
            if (a(i, c) != 0) { p = i; break; }
        if (p < 0) return 0;
        if (p != c) {
            a.row(c).swap(a.row(p));
            d = -d;
        }
        d *= a(c, c);
        Rat inv = Rat(1) / a(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (a(i, c) == 0) continue;
            a.row(i) -= a(i, c) * inv * a.row(c);
        }
    }
    return d;
}

int rank(const RatMat& m) {
    RatMat a = m;
    return static_cast<int>(row_reduce(a, nullptr).size());
}

std::optional<RatVec> solve(const RatMat& a, const RatVec& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw std::invalid_argument("solve: bad dimensions");
    RatMat m = a;
    RatMat rhs = b;
    auto pivots = row_reduce(m, &rhs);
    if (static_cast<int>(pivots.size()) != a.cols()) return std::nullopt;
    return RatVec(rhs.col(0));
}

std::optional<RatMat> inverse(const RatMat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    RatMat m = a;
    RatMat rhs = RatMat::Identity(a.rows(), a.cols());
    auto pivots = row_reduce(m, &rhs);
    if (static_cast<int>(pivots.size()) != a.cols()) return std::nullopt;
    return rhs;
}

RatMat kernel(const RatMat& a) {
    RatMat m = a;
    auto pivots = row_reduce(m, nullptr);
    const int cols = static_cast<int>(a.cols());
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivots) is_pivot[c] = true;
    const int k = cols - static_cast<int>(pivots.size());
    RatMat basis = RatMat::Zero(cols, k);
    int out = 0;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        basis(free, out) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) basis(pivots[r], out) = -m(static_cast<int>(r), free);
        ++out;
    }
    return basis;
}

RatMat integer_kernel_basis(const RatVec& a) {
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n; ++i)
        if (!is_integer(a(i))) throw std::invalid_argument("integer_kernel_basis: non-integer input");
    // Column-reduce the 1 x n matrix a^T by unimodular operations: track U
    // with a^T U = (g, 0, ..., 0).  Columns 2..n of U then span the kernel
    // lattice.
    RatVec w = a;
    RatMat u = RatMat::Identity(n, n);
    while (true) {
        int nz = -1, cnt = 0;
        for (int i = 0; i < n; ++i)
            if (w(i) != 0) { ++cnt; if (nz < 0 || boost::multiprecision::abs(numerator(w(i))) < boost::multiprecision::abs(numerator(w(nz)))) nz = i; }
        if (cnt <= 1) {
            if (nz > 0) { w.row(0).swap(w.row(nz)); u.col(0).swap(u.col(nz)); }
            break;
        }
        // Reduce every other entry modulo the minimal one.
        for (int i = 0; i < n; ++i) {
            if (i == nz || w(i) == 0) continue;
            Int q = numerator(w(i)) / numerator(w(nz));  // truncated division
            if (q != 0) {
                w(i) -= Rat(q) * w(nz);
                u.col(i) -= Rat(q) * u.col(nz);
            }
        }
    }
    RatMat basis(n, n - 1);
    for (int c = 1; c < n; ++c) basis.col(c - 1) = u.col(c);
    return basis;
}

std::vector<RatVec> extreme_rays(const RatMat& m) {
    const int dim = static_cast<int>(m.cols());
    const int k = static_cast<int>(m.rows());
    std::vector<RatVec> rays;
    if (dim == 0) return rays;
    if (rank(m) != dim) throw std::invalid_argument("extreme_rays: cone is not pointed");
    auto feasible = [&](const RatVec& d) {
        for (int i = 0; i < k; ++i)
            if (m.row(i).dot(d) < 0) return false;
        return true;
    };
    if (dim == 1) {
        for (int s : {+1, -1}) {
            RatVec d(1);
            d(0) = s;
            if (feasible(d)) rays.push_back(d);
        }
    } else {
        // A candidate ray is determined by dim-1 active constraints of rank
        // dim-1; enumerate constraint subsets (sizes here are tiny).
        std::vector<int> idx(dim - 1);
        std::vector<RatVec> found;
        auto consider = [&](const std::vector<int>& sel) {
            RatMat sub(dim - 1, dim);
            for (int i = 0; i < dim - 1; ++i) sub.row(i) = m.row(sel[i]);
            RatMat kern = kernel(sub);
            if (kern.cols() != 1) return;
            RatVec d = kern.col(0);
            if (feasible(d)) found.push_back(primitivize(d));
            RatVec nd = -d;
            if (feasible(nd)) found.push_back(primitivize(nd));
        };
        std::vector<int> sel;
        // Iterative subset enumeration.
        std::vector<int> stack;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(stack.size()) == dim - 1) {
                consider(stack);
                return;
            }
            for (int i = start; i < k; ++i) {
                stack.push_back(i);
                rec(i + 1);
                stack.pop_back();
            }
        };
        rec(0);
        rays = std::move(found);
    }
    std::sort(rays.begin(), rays.end(), lex_less);
    rays.erase(std::unique(rays.begin(), rays.end(),
                           [](const RatVec& a, const RatVec& b) { return a == b; }),
               rays.end());
    return rays;
}

}  // namespace kstab
