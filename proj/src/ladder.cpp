#include "aptk/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aptk {

std::string to_string(ExtrapolationMethod m) {
    switch (m) {
        case ExtrapolationMethod::richardson: return "richardson";
        case ExtrapolationMethod::tail_max: return "tail-max";
        case ExtrapolationMethod::tail_mean: return "tail-mean";
    }
    return "?";
}

bool LimitEstimate::vanishes(double tol) const {
    if (ladder.empty()) return false;
    if (std::fabs(last_value()) > tol) return false;
    // rungs three orders below the tolerance are numerical zeros; a fitted
    // slope through such noise carries no information about the limit
    double mx = 0.0;
    for (const auto& [p, v] : ladder) mx = std::max(mx, std::fabs(v));
    if (mx <= 1e-3 * tol) return true;
    return decay_exponent <= -0.5 + 1e-9;
}

std::vector<double> LadderSchedule::values() const {
    if (count < 1 || !(base > 0) || !(factor > 1))
        throw std::invalid_argument("LadderSchedule: need base>0, factor>1, count>=1");
    std::vector<double> out;
    double v = base;
    for (int k = 0; k < count; ++k, v *= factor) out.push_back(v);
    return out;
}

LadderSchedule LadderSchedule::capped(double cap) const {
    LadderSchedule s = *this;
    int n = 0;
    double v = base;
    while (n < count && v <= cap * (1 + 1e-12)) {
        ++n;
        v *= factor;
    }
    s.count = std::max(1, n);
    return s;
}

bool loglog_fit(const std::vector<std::pair<double, double>>& ladder, double& slope,
                double& rms_residual) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& [p, v] : ladder)
        if (v > 0 && p > 0) pts.emplace_back(std::log(p), std::log(v));
    if (pts.size() < 2) return false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double den = n * sxx - sx * sx;
    if (den <= 0) return false;
    slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    double ss = 0;
    for (auto& [x, y] : pts) {
        const double r = y - (slope * x + icpt);
        ss += r * r;
    }
    rms_residual = std::sqrt(ss / n);
    return true;
}

namespace {

void fill_fit(LimitEstimate& e) {
    double s = 0, r = 0;
    if (loglog_fit(e.ladder, s, r)) {
        e.decay_exponent = s;
        e.fit_residual = r;
    } else {
        // no usable positive rungs: treat as identically-zero ladder
        bool all_small = true;
        for (auto& [p, v] : e.ladder)
            if (std::fabs(v) > 1e-12) all_small = false;
        e.decay_exponent = all_small ? -99.0 : 0.0;
        e.fit_residual = 0.0;
    }
}

double tail_mean(const std::vector<std::pair<double, double>>& ladder, int k) {
    const int n = static_cast<int>(ladder.size());
    const int m = std::min(k, n);
    double acc = 0;
    for (int i = n - m; i < n; ++i) acc += ladder[i].second;
    return acc / m;
}

double tail_spread(const std::vector<std::pair<double, double>>& ladder, int k) {
    const int n = static_cast<int>(ladder.size());
    const int m = std::min(k, n);
    double lo = ladder[n - m].second, hi = lo;
    for (int i = n - m; i < n; ++i) {
        lo = std::min(lo, ladder[i].second);
        hi = std::max(hi, ladder[i].second);
    }
    return hi - lo;
}

}  // namespace

LimitEstimate estimate_limit(std::vector<std::pair<double, double>> ladder, double tol) {
    LimitEstimate e;
    e.ladder = std::move(ladder);
    if (e.ladder.empty()) return e;
    fill_fit(e);
    const int n = static_cast<int>(e.ladder.size());
    const double last = e.ladder.back().second;
    const double scale = std::fabs(e.ladder.front().second) + std::fabs(last);

    if (e.decay_exponent == -99.0) {  // identically ~0
        e.extrapolated = 0.0;
        e.converged = true;
        e.residual = std::fabs(last);
        e.method = ExtrapolationMethod::tail_mean;
        return e;
    }
    // clean power decay to zero
    bool positive = true;
    for (auto& [p, v] : e.ladder)
        if (v <= 0) positive = false;
    if (positive && n >= 3 && e.fit_residual <= 0.05 && e.decay_exponent <= -0.1) {
        e.extrapolated = 0.0;
        e.converged = true;
        e.residual = last;
        e.method = ExtrapolationMethod::richardson;
        return e;
    }
    // Algebraic tail behind an uninformative head: early rungs can sit on a
    // plateau (window shorter than the distance to the support, say) and spoil
    // the full fit, while the last rungs already decay as a clean power.  Fit
    // the tail alone before Richardson gets a chance to mistake a slowly
    // thinning increment sequence for geometric convergence.
    for (int m = std::min(6, n); m >= 4; --m) {
        bool tail_ok = true;
        for (int i = n - m; i < n; ++i) {
            const double v = e.ladder[i].second;
            tail_ok = tail_ok && v > 0 && (i == n - m || v < e.ladder[i - 1].second);
        }
        if (!tail_ok) continue;
        std::vector<std::pair<double, double>> tail(e.ladder.end() - m, e.ladder.end());
        double s = 0, r = 0;
        if (loglog_fit(tail, s, r) && r <= 0.05 && s <= -0.3) {
            e.extrapolated = 0.0;
            e.converged = true;
            e.residual = last;
            e.decay_exponent = s;
            e.fit_residual = r;
            e.method = ExtrapolationMethod::richardson;
            return e;
        }
    }
    // Richardson on a geometrically shrinking increment sequence
    if (n >= 3) {
        const double d1 = e.ladder[n - 1].second - e.ladder[n - 2].second;
        const double d0 = e.ladder[n - 2].second - e.ladder[n - 3].second;
        if (std::fabs(d0) > 0 && std::fabs(d1) < 0.75 * std::fabs(d0)) {
            const double q = d1 / d0;  // |q| < 0.75
            const double lim = e.ladder[n - 1].second + d1 * q / (1.0 - q);
            e.extrapolated = lim;
            e.residual = std::fabs(d1 * q / (1.0 - q)) + std::fabs(d1) * 0.25;
            e.converged = e.residual <= std::max(tol, 1e-9 * std::max(1.0, scale));
            e.method = ExtrapolationMethod::richardson;
            return e;
        }
        if (d0 == 0.0 && d1 == 0.0) {  // exactly flat
            e.extrapolated = last;
            e.residual = tail_spread(e.ladder, 3);
            e.converged = true;
            e.method = ExtrapolationMethod::tail_mean;
            return e;
        }
    }
    e.extrapolated = tail_mean(e.ladder, 3);
    e.residual = tail_spread(e.ladder, 3) + (n >= 2 ? std::fabs(e.ladder[n - 1].second - e.ladder[n - 2].second) : 0.0);
    e.converged = e.residual <= std::max(tol, 1e-9 * std::max(1.0, scale));
    e.method = ExtrapolationMethod::tail_mean;
    return e;
}

LimitEstimate estimate_limsup(std::vector<std::pair<double, double>> ladder, double tol) {
    LimitEstimate e;
    e.ladder = std::move(ladder);
    if (e.ladder.empty()) return e;
    fill_fit(e);
    const int n = static_cast<int>(e.ladder.size());
    const int m = std::min(4, n);
    double mx = e.ladder[n - m].second;
    for (int i = n - m; i < n; ++i) mx = std::max(mx, e.ladder[i].second);
    e.extrapolated = mx;
    e.method = ExtrapolationMethod::tail_max;
    e.residual = tail_spread(e.ladder, m);
    e.converged = n >= 4 && (e.residual <= std::max(tol, 0.25 * std::fabs(mx)) || mx <= tol);
    return e;
}

}  // namespace aptk
