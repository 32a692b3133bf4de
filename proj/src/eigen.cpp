#include "fano/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fano {

namespace {

void to_hessenberg(Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        Eigen::VectorXcd x = h.block(k + 1, k, n - k - 1, 1);
        double alpha = x.norm();
        if (alpha == 0.0) continue;
        cplx phase = std::abs(x(0)) == 0.0 ? cplx(1.0) : x(0) / std::abs(x(0));
        Eigen::VectorXcd v = x;
        v(0) += phase * alpha;
        double vn = v.norm();
        if (vn == 0.0) continue;
        v /= vn;
        // H <- P H P with P = I - 2 v v^*
        h.block(k + 1, 0, n - k - 1, n) -= 2.0 * v * (v.adjoint() * h.block(k + 1, 0, n - k - 1, n));
        h.block(0, k + 1, n, n - k - 1) -= 2.0 * (h.block(0, k + 1, n, n - k - 1) * v) * v.adjoint();
        for (Eigen::Index i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Parlett-Reinsch balancing by powers of two; eigenvalues are unchanged.
void balance(Eigen::MatrixXcd& a) {
    const Eigen::Index n = a.rows();
    bool changed = true;
    for (int sweep = 0; sweep < 100 && changed; ++sweep) {
        changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) {
                    c += std::abs(a(j, i));
                    r += std::abs(a(i, j));
                }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0;
            const double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c >= r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                changed = true;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

struct Givens {
    cplx c, s;  // [c s; -conj(s) c] with c real
};

Givens make_givens(cplx a, cplx b) {
    double r = std::hypot(std::abs(a), std::abs(b));
    if (r == 0.0) return {1.0, 0.0};
    if (std::abs(a) == 0.0) return {0.0, std::conj(b) / std::abs(b)};
    cplx phase = a / std::abs(a);
    return {std::abs(a) / r, phase * std::conj(b) / r};
}

std::string dump(const Eigen::MatrixXcd& a) {
    std::ostringstream os;
    os.precision(17);
    os << a;
    return os.str();
}

}  // namespace

std::vector<cplx> eigenvalues_qr(const Eigen::MatrixXcd& a, int max_sweeps_per_value) {
    if (a.rows() != a.cols()) throw Error("eigenvalues_qr: matrix must be square");
    const Eigen::Index n = a.rows();
    std::vector<cplx> out;
    if (n == 0) return out;
    Eigen::MatrixXcd h = a;
    balance(h);
    to_hessenberg(h);
    const double eps = std::numeric_limits<double>::epsilon();
    Eigen::Index hi = n - 1;
    int iter = 0, total = 0;
    while (hi >= 0) {
        if (hi == 0) {
            out.push_back(h(0, 0));
            break;
        }
        // find the active block [lo, hi]
        Eigen::Index lo = hi;
        while (lo > 0) {
            double s = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (s == 0.0) s = h.norm();
            if (std::abs(h(lo, lo - 1)) <= eps * s) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            out.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > max_sweeps_per_value || ++total > max_sweeps_per_value * n)
            throw Error("eigenvalues_qr: QR iteration did not converge for matrix\n" + dump(a));
        // Wilkinson shift from the trailing 2x2 block; exceptional shift now and then
        cplx a11 = h(hi - 1, hi - 1), a12 = h(hi - 1, hi), a21 = h(hi, hi - 1), a22 = h(hi, hi);
        cplx tr = a11 + a22, det = a11 * a22 - a12 * a21;
        cplx disc = std::sqrt(tr * tr / 4.0 - det);
        cplx m1 = tr / 2.0 + disc, m2 = tr / 2.0 - disc;
        cplx shift = std::abs(m1 - a22) < std::abs(m2 - a22) ? m1 : m2;
        if (iter % 11 == 10) shift = a22 + cplx(std::abs(h(hi, hi - 1)), 0.75 * std::abs(h(hi, hi - 1)));
        // one implicit QR step on the block via explicit shifted Givens factorization
        std::vector<Givens> rots;
        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) -= shift;
        for (Eigen::Index k = lo; k < hi; ++k) {
            Givens g = make_givens(h(k, k), h(k + 1, k));
            rots.push_back(g);
            for (Eigen::Index j = k; j < n; ++j) {
                cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (Eigen::Index k = lo; k < hi; ++k) {
            const Givens& g = rots[k - lo];
            for (Eigen::Index i = 0; i <= std::min(k + 2, hi); ++i) {
                cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = x * g.c + y * std::conj(g.s);
                h(i, k + 1) = -x * g.s + y * g.c;
            }
        }
        for (Eigen::Index k = lo; k <= hi; ++k) h(k, k) += shift;
    }
    return out;
}

double Cluster::spread() const {
    double s = 0.0;
    for (const auto& m : members) s = std::max(s, std::abs(m - value));
    return s;
}

namespace {

std::vector<Cluster> build(const std::vector<cplx>& values, std::vector<std::size_t> parent) {
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    std::vector<Cluster> out;
    std::vector<long> slot(values.size(), -1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(out.size());
            out.emplace_back();
        }
        out[slot[r]].members.push_back(values[i]);
    }
    for (auto& c : out) {
        cplx sum = 0.0;
        for (const auto& m : c.members) sum += m;
        c.value = sum / static_cast<double>(c.members.size());
    }
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return out;
}

struct Edge {
    double len;
    std::size_t a, b;
};

std::vector<Edge> spanning_tree(const std::vector<cplx>& v) {
    const std::size_t n = v.size();
    std::vector<Edge> tree;
    if (n < 2) return tree;
    std::vector<bool> in(n, false);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(n, 0);
    best[0] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t i = 0; i < n; ++i)
            if (!in[i] && (u == n || best[i] < best[u])) u = i;
        in[u] = true;
        if (step > 0) tree.push_back({best[u], from[u], u});
        for (std::size_t i = 0; i < n; ++i)
            if (!in[i] && std::abs(v[i] - v[u]) < best[i]) {
                best[i] = std::abs(v[i] - v[u]);
                from[i] = u;
            }
    }
    return tree;
}

}  // namespace

std::vector<Cluster> cluster_by_radius(const std::vector<cplx>& values, double rel_radius) {
    double scale = 1.0;
    for (const auto& v : values) scale = std::max(scale, std::abs(v));
    const double radius = rel_radius * scale;
    std::vector<std::size_t> parent(values.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& e : spanning_tree(values))
        if (e.len <= radius) parent[find(e.a)] = find(e.b);
    return build(values, parent);
}

std::vector<Cluster> cluster_into(const std::vector<cplx>& values, std::size_t k) {
    if (k == 0 || k > values.size()) throw Error("cluster_into: bad cluster count");
    auto tree = spanning_tree(values);
    std::sort(tree.begin(), tree.end(), [](const Edge& a, const Edge& b) { return a.len < b.len; });
    std::vector<std::size_t> parent(values.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t e = 0; e + (k - 1) < tree.size(); ++e) parent[find(tree[e].a)] = find(tree[e].b);
    return build(values, parent);
}

}  // namespace fano
