#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace aptk::quad {

/// Nodes and weights of the 16-point Gauss-Legendre rule on [-1,1].
/// Computed once by Newton iteration on P_16; accurate to ~1e-15.
struct Gauss16 {
    double node[16];
    double weight[16];
};

const Gauss16& gauss16();

/// Composite Gauss-Legendre over [a,b] with panel width <= max_panel.
template <class F>
double integrate(F&& f, double a, double b, double max_panel) {
    if (!(b > a)) return 0.0;
    if (!(max_panel > 0)) throw std::invalid_argument("integrate: max_panel must be positive");
    const Gauss16& g = gauss16();
    const std::size_t n = static_cast<std::size_t>(std::ceil((b - a) / max_panel));
    const double w = (b - a) / static_cast<double>(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = a + w * static_cast<double>(k);
        const double mid = lo + 0.5 * w;
        const double half = 0.5 * w;
        double acc = 0.0;
        for (int i = 0; i < 16; ++i) acc += g.weight[i] * f(mid + half * g.node[i]);
        total += acc * half;
    }
    return total;
}

/// Integral over [a,b] of f with an integrable power singularity f ~ (x-a)^(alpha-1)
/// at the left endpoint, 0 < alpha <= 1.  Geometric panels shrink toward a; the
/// panel count is chosen so the uncovered sliver carries mass below ~1e-12 relative.
/// The innermost offsets are ~2^-90, far below the float spacing at any a != 0:
/// callers with a shifted singular endpoint must substitute so that a = 0.
template <class F>
double integrate_graded_left(F&& f, double a, double b, double alpha, double max_panel = 0.25) {
    if (!(b > a)) return 0.0;
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("integrate_graded_left: alpha must lie in (0,1]");
    if (alpha > 0.999) return integrate(f, a, b, max_panel);
    const double len = b - a;
    // smallest panel edge: (1/2)^K with K * alpha * log10(2) >= 13
    const int K = static_cast<int>(std::ceil(13.0 / (alpha * 0.30103))) + 1;
    double total = 0.0;
    double hi = len;
    for (int k = 0; k < K && hi > 0.0; ++k) {
        double lo = hi * 0.5;
        if (k == K - 1) lo = 0.0;
        const double width = hi - lo;
        if (width > max_panel) {
            total += integrate(f, a + lo, a + hi, max_panel);
        } else {
            const Gauss16& g = gauss16();
            const double mid = a + 0.5 * (lo + hi);
            const double half = 0.5 * width;
            double acc = 0.0;
            for (int i = 0; i < 16; ++i) acc += g.weight[i] * f(mid + half * g.node[i]);
            total += acc * half;
        }
        hi = lo;
    }
    return total;
}

/// Cumulative integral cache for H(x) = int_lo^x h(s) ds over a fixed span.
/// Panel sums use the 16-point rule and are computed on first touch, so a span
/// sized for the worst-case query costs nothing until a query actually reaches
/// into it.  Queries at arbitrary endpoints add partial panels directly.
/// Not safe for concurrent queries (the memo mutates).
class CumulativeCache {
  public:
    CumulativeCache(std::function<double(double)> h, double lo, double hi, double panel_width);

    double lo() const { return lo_; }
    double hi() const { return hi_; }

    /// H(x); x is clamped to [lo, hi].
    double value(double x) const { return window(lo_, x); }

    /// int_a^b h; endpoints are clamped to [lo, hi].
    double window(double a, double b) const;

  private:
    std::function<double(double)> h_;
    double lo_, hi_, w_;
    mutable std::vector<double> panel_;  // integral over [lo+k w, lo+(k+1) w]
    mutable std::vector<char> have_;

    double panel_sum(std::size_t k) const;
    double partial(double a, double b) const;
};

}  // namespace aptk::quad
