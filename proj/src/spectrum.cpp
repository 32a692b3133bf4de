#include "fano/spectrum.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace fano {

namespace {

using Mono = std::pair<int, int>;  // (deg x1, deg y2)

// Normal form modulo y^2 -> q2 - n x y and x^{n+1} -> q1 y^n. Terminates for
// the weighted order deg x = 2n, deg y = 2n+1.
std::map<Mono, cplx> normal_form(std::map<Mono, cplx> p, int n, cplx q1, cplx q2) {
    std::map<Mono, cplx> out;
    int guard = 0;
    while (!p.empty()) {
        if (++guard > 100000) throw Error("batyrev normal form did not terminate");
        auto it = p.begin();
        auto [m, c] = *it;
        p.erase(it);
        if (c == cplx(0.0)) continue;
        auto [a, b] = m;
        if (b >= 2) {
            p[{a, b - 2}] += c * q2;
            p[{a + 1, b - 1}] += -static_cast<double>(n) * c;
        } else if (a >= n + 1) {
            p[{a - n - 1, b + n}] += c * q1;
        } else {
            out[m] += c;
        }
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

Eigen::MatrixXcd batyrev_matrix_xn(int n, cplx q1, cplx q2) {
    if (n < 1) throw Error("batyrev_matrix_xn requires n >= 1");
    const int dim = 2 * n + 2;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int j = 0; j <= 1; ++j)
        for (int i = 0; i <= n; ++i) {
            std::map<Mono, cplx> prod;
            prod[{i + 1, j}] += static_cast<double>(2 * n + 1);
            prod[{i, j + 1}] += 2.0;
            for (const auto& [mono, c] : normal_form(prod, n, q1, q2))
                m(mono.first + (n + 1) * mono.second, i + (n + 1) * j) += c;
        }
    return m;
}

Tri strictly_positive(double gap, double scale, const Tolerances& tol) {
    if (gap > tol.equal * scale) return Tri::True;
    if (gap <= tol.strict * scale) return Tri::False;
    return Tri::Indeterminate;
}

Tri approx_equal(double dist, double scale, const Tolerances& tol) {
    if (dist <= tol.strict * scale) return Tri::True;
    if (dist > tol.equal * scale) return Tri::False;
    return Tri::Indeterminate;
}

namespace {

double pair_scale(cplx a, cplx b) { return std::max({1.0, std::abs(a), std::abs(b)}); }

// Simplicity of a cluster: True if a singleton well separated from the rest,
// False if several members sit on top of each other.
Tri simple_cluster(const std::vector<Cluster>& eigs, std::size_t k, const Tolerances& tol) {
    const Cluster& c = eigs[k];
    const double scale = std::max(1.0, std::abs(c.value));
    if (c.multiplicity() > 1) {
        double spread = 0.0;
        for (std::size_t a = 0; a < c.members.size(); ++a)
            for (std::size_t b = a + 1; b < c.members.size(); ++b)
                spread = std::max(spread, std::abs(c.members[a] - c.members[b]));
        return approx_equal(spread, scale, tol) == Tri::True ? Tri::False : Tri::Indeterminate;
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < eigs.size(); ++j)
        if (j != k)
            for (const auto& m : eigs[j].members) nearest = std::min(nearest, std::abs(m - c.value));
    return strictly_positive(nearest, scale, tol);
}

}  // namespace

Flags check_flags(const std::vector<Cluster>& eigs, long long fano_index, double T_con, double T_Acon,
                  const CriticalPoint* conifold, const std::vector<CriticalPoint>& crits,
                  const Tolerances& tol) {
    Flags flags;
    if (eigs.empty()) throw Error("check_flags: empty spectrum");
    double rho = 0.0, rho_prime = -std::numeric_limits<double>::infinity();
    std::size_t kmod = 0, kre = 0;
    for (std::size_t k = 0; k < eigs.size(); ++k) {
        if (std::abs(eigs[k].value) > rho) {
            rho = std::abs(eigs[k].value);
            kmod = k;
        }
        if (eigs[k].value.real() > rho_prime) {
            rho_prime = eigs[k].value.real();
            kre = k;
        }
    }
    const double scale = std::max(1.0, rho);

    // Property O (1): rho itself is an eigenvalue, simple as a root of the
    // characteristic polynomial. Other values on |u| = rho are O (2)'s business.
    {
        std::size_t kr = 0;
        double dist = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < eigs.size(); ++k)
            if (std::abs(eigs[k].value - rho) < dist) {
                dist = std::abs(eigs[k].value - rho);
                kr = k;
            }
        Tri present = approx_equal(dist, scale, tol);
        Tri simple = present == Tri::False ? Tri::False : simple_cluster(eigs, kr, tol);
        flags.property_O1.value = tri_and(present, simple);
        flags.property_O1.margin = dist;
        const cplx top = eigs[kmod].value;
        flags.property_O1.detail = "rho=" + fmt(rho) + ", distance from rho to the spectrum=" + fmt(dist) +
                                   ", a max-modulus eigenvalue=" + fmt(top.real()) + (top.imag() < 0 ? "" : "+") +
                                   fmt(top.imag()) + "i";
    }
    // Property O (2): every u with |u| = rho satisfies u^{i_X} = rho^{i_X}.
    {
        Tri all = Tri::True;
        double worst = 0.0;
        for (const auto& c : eigs) {
            Tri on_circle = approx_equal(rho - std::abs(c.value), scale, tol);
            if (on_circle == Tri::False) continue;
            const cplx ratio = std::pow(c.value / rho, static_cast<double>(fano_index));
            double d = std::abs(ratio - 1.0);
            worst = std::max(worst, d);
            Tri ok = approx_equal(d, 1.0, tol);
            if (on_circle == Tri::Indeterminate && ok != Tri::True) ok = Tri::Indeterminate;
            all = tri_and(all, ok);
        }
        flags.property_O2.value = all;
        flags.property_O2.margin = worst;
        flags.property_O2.detail = std::string("max |(u/rho)^iX - 1| on the max-modulus set = ") + fmt(worst) +
                                   (flags.property_O1.value == Tri::True ? "" : " (evaluated although O1 fails)");
    }
    // Condition (*): simple eigenvalue with strictly maximal real part.
    {
        Tri simple = simple_cluster(eigs, kre, tol);
        Tri others = Tri::True;
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < eigs.size(); ++k) {
            if (k == kre) continue;
            double g = rho_prime - eigs[k].value.real();
            gap = std::min(gap, g);
            others = tri_and(others, strictly_positive(g, pair_scale(eigs[kre].value, eigs[k].value), tol));
        }
        flags.condition_star.value = tri_and(simple, others);
        flags.condition_star.margin = gap;
        flags.condition_star.detail = "rightmost=" + fmt(eigs[kre].value.real()) + ", real-part gap=" + fmt(gap);
    }
    // Property O_A: the rightmost eigenvalue is T_{A,con}.
    {
        double d = std::abs(eigs[kre].value - T_Acon);
        Tri eq = approx_equal(d, pair_scale(eigs[kre].value, T_Acon), tol);
        flags.property_OA.value = tri_and(flags.condition_star.value, eq);
        flags.property_OA.margin = d;
        flags.property_OA.detail = "|rightmost - T_Acon|=" + fmt(d) + ", T_Acon=" + fmt(T_Acon);
    }
    // B-analogue (a): all |u| <= T_con.
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& c : eigs) worst = std::max(worst, std::abs(c.value) - T_con);
        Tri exceed = strictly_positive(worst, scale, tol);
        flags.B_analogue_a.value = exceed == Tri::True ? Tri::False
                                   : exceed == Tri::False ? Tri::True
                                                          : Tri::Indeterminate;
        flags.B_analogue_a.margin = worst;
        flags.B_analogue_a.detail = "max |u| - T_con = " + fmt(worst);
    }
    // B-analogue (b): the conifold point is alone on the level f = T_con.
    {
        if (!conifold || crits.empty()) {
            flags.B_analogue_b.value = Tri::Indeterminate;
            flags.B_analogue_b.detail = "no critical point data";
        } else {
            Tri alone = Tri::True;
            double nearest = std::numeric_limits<double>::infinity();
            for (const auto& p : crits) {
                if (p.is_conifold) continue;
                double d = std::abs(p.value - T_con);
                nearest = std::min(nearest, d);
                alone = tri_and(alone, strictly_positive(d, pair_scale(p.value, T_con), tol));
            }
            flags.B_analogue_b.value = alone;
            flags.B_analogue_b.margin = nearest;
            flags.B_analogue_b.detail = "nearest other critical value to T_con at distance " + fmt(nearest);
        }
    }
    return flags;
}

SpectrumReport make_report(const std::vector<cplx>& eigenvalues, long long fano_index, double T_con,
                           double T_Acon, const CriticalPoint* conifold,
                           const std::vector<CriticalPoint>& crits, const std::string& source,
                           const Tolerances& tol) {
    SpectrumReport r;
    r.eigenvalues = cluster_by_radius(eigenvalues, tol.equal);
    r.rho = 0.0;
    r.rho_prime = -std::numeric_limits<double>::infinity();
    for (const auto& u : eigenvalues) {
        r.rho = std::max(r.rho, std::abs(u));
        r.rho_prime = std::max(r.rho_prime, u.real());
    }
    r.T_con = T_con;
    r.T_Acon = T_Acon;
    r.fano_index = fano_index;
    r.tol = tol;
    r.source = source;
    r.flags = check_flags(r.eigenvalues, fano_index, T_con, T_Acon, conifold, crits, tol);
    return r;
}

}  // namespace fano
