#include "aptk/quadrature.hpp"

#include <cmath>

namespace aptk::quad {

namespace {

// Legendre P_n and derivative by recurrence.
void legendre_16(double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= 16; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = 16.0 * (x * p1 - p0) / (x * x - 1.0);
}

Gauss16 make_gauss16() {
    Gauss16 g;
    constexpr int n = 16;
    for (int i = 0; i < n / 2; ++i) {
        // Chebyshev initial guess, Newton refinement
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 60; ++it) {
            legendre_16(x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        legendre_16(x, p, dp);
        g.node[i] = -x;
        g.node[n - 1 - i] = x;
        g.weight[i] = g.weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

}  // namespace

const Gauss16& gauss16() {
    static const Gauss16 g = make_gauss16();
    return g;
}

CumulativeCache::CumulativeCache(std::function<double(double)> h, double lo, double hi,
                                 double panel_width)
    : h_(std::move(h)), lo_(lo), hi_(hi), w_(panel_width) {
    if (!(hi > lo)) throw std::invalid_argument("CumulativeCache: empty span");
    if (!(panel_width > 0)) throw std::invalid_argument("CumulativeCache: bad panel width");
    const std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / w_));
    panel_.assign(n, 0.0);
    have_.assign(n, 0);
}

double CumulativeCache::partial(double a, double b) const {
    if (!(b > a)) return 0.0;
    const Gauss16& g = gauss16();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) acc += g.weight[i] * h_(mid + half * g.node[i]);
    return acc * half;
}

double CumulativeCache::panel_sum(std::size_t k) const {
    if (!have_[k]) {
        const double a = lo_ + w_ * static_cast<double>(k);
        const double b = (k + 1 == panel_.size()) ? hi_ : a + w_;
        panel_[k] = partial(a, b);
        have_[k] = 1;
    }
    return panel_[k];
}

double CumulativeCache::window(double a, double b) const {
    a = std::max(a, lo_);
    b = std::min(b, hi_);
    if (!(b > a)) return 0.0;
    std::size_t ka = static_cast<std::size_t>((a - lo_) / w_);
    std::size_t kb = static_cast<std::size_t>((b - lo_) / w_);
    const std::size_t last = panel_.size() - 1;
    if (ka > last) ka = last;
    if (kb > last) kb = last;
    if (ka == kb) return partial(a, b);
    const double a_edge = lo_ + w_ * static_cast<double>(ka + 1);
    const double b_edge = lo_ + w_ * static_cast<double>(kb);
    double acc = partial(a, a_edge) + partial(b_edge, b);
    for (std::size_t k = ka + 1; k < kb; ++k) acc += panel_sum(k);
    return acc;
}

}  // namespace aptk::quad
