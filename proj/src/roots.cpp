#include "fano/roots.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace fano {

cplx poly_eval(const Poly& p, cplx t) {
    cplx acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
    return acc;
}

cplx poly_deriv_eval(const Poly& p, cplx t) {
    cplx acc = 0.0;
    for (std::size_t k = p.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * p[k];
    return acc;
}

double backward_error(const Poly& p, cplx t) {
    double scale = 0.0, r = std::abs(t), rk = 1.0;
    for (const auto& c : p) {
        scale += std::abs(c) * rk;
        rk *= r;
    }
    return scale == 0.0 ? 0.0 : std::abs(poly_eval(p, t)) / scale;
}

std::vector<cplx> aberth_roots(const Poly& input, const RootOptions& opt) {
    Poly p = input;
    while (!p.empty() && p.back() == cplx(0.0)) p.pop_back();
    if (p.size() < 2) throw Error("aberth_roots: degree must be at least 1");
    std::size_t zeros = 0;
    while (p[zeros] == cplx(0.0)) ++zeros;
    p.erase(p.begin(), p.begin() + static_cast<long>(zeros));
    const std::size_t deg = p.size() - 1;
    std::vector<cplx> z(deg);
    if (deg > 0) {
        // radius from the geometric mean of the roots, angles perturbed
        double radius = std::pow(std::abs(p[0] / p[deg]), 1.0 / static_cast<double>(deg));
        double cauchy = 0.0;
        for (std::size_t k = 0; k < deg; ++k) cauchy = std::max(cauchy, std::abs(p[k] / p[deg]));
        radius = std::min(std::max(radius, 1e-3), 1.0 + cauchy);
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> jitter(-0.25, 0.25);
        for (std::size_t k = 0; k < deg; ++k) {
            double ang = 2.0 * M_PI * (static_cast<double>(k) + 0.5 + jitter(rng)) / static_cast<double>(deg) + 0.4;
            z[k] = std::polar(radius * (1.0 + 0.1 * jitter(rng)), ang);
        }
        std::vector<bool> done(deg, false);
        int iter = 0;
        for (; iter < opt.max_iter; ++iter) {
            bool all = true;
            for (std::size_t k = 0; k < deg; ++k) {
                if (done[k]) continue;
                cplx v = poly_eval(p, z[k]), d = poly_deriv_eval(p, z[k]);
                if (v == cplx(0.0)) {
                    done[k] = true;
                    continue;
                }
                cplx ratio = v / d, sum = 0.0;
                for (std::size_t j = 0; j < deg; ++j)
                    if (j != k) sum += 1.0 / (z[k] - z[j]);
                cplx step = ratio / (1.0 - ratio * sum);
                if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) step = ratio;
                z[k] -= step;
                if (std::abs(step) <= opt.tol * std::max(1.0, std::abs(z[k])) ||
                    backward_error(p, z[k]) < 1e-17)
                    done[k] = true;
                else
                    all = false;
            }
            if (all) break;
        }
        if (iter == opt.max_iter) {
            double worst = 0.0;
            for (const auto& r : z) worst = std::max(worst, backward_error(p, r));
            if (worst > 1e-10) throw Error("aberth_roots: no convergence within iteration cap");
        }
        for (auto& r : z) {
            for (int k = 0; k < 3; ++k) {
                cplx d = poly_deriv_eval(p, r);
                if (d == cplx(0.0)) break;
                cplx next = r - poly_eval(p, r) / d;
                if (backward_error(p, next) < backward_error(p, r))
                    r = next;
                else
                    break;
            }
        }
    }
    z.insert(z.end(), zeros, cplx(0.0));
    return z;
}

}  // namespace fano
