#include "aptk/convolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aptk/quadrature.hpp"

namespace aptk {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    std::size_t n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                 std::size_t hi) {
    LineFit f;
    f.n = hi - lo;
    if (f.n < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double n = static_cast<double>(f.n);
    const double det = n * sxx - sx * sx;
    if (det <= 0) return f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace

double KernelCertificate::truncation_for(double tol) const {
    if (!(tol > 0)) throw std::invalid_argument("truncation_for: tolerance must be positive");
    if (!certified || tail_rate <= 0 || tail_coeff <= 0) return probe_span;
    // (C/a) e^{-a L} = tol
    const double L = std::log(tail_coeff / (tail_rate * tol)) / tail_rate;
    return std::clamp(L, 1.0, 1e6);
}

double KernelCertificate::tail_mass(double L) const {
    if (!certified) return std::numeric_limits<double>::infinity();
    if (tail_coeff <= 0 || tail_rate <= 0) return 0.0;
    return tail_coeff / tail_rate * std::exp(-tail_rate * L);
}

KernelCertificate certify_kernel(const AnalyticSignal& R, double probe_span) {
    if (R.dimension() != 1)
        throw std::invalid_argument("certify_kernel: kernel must be scalar");
    if (!(probe_span >= 8.0))
        throw std::invalid_argument("certify_kernel: probe span must be at least 8");

    KernelCertificate c;
    c.probe_span = probe_span;
    auto absR = [&](double t) { return std::fabs(R.eval_scalar(t)); };
    c.l1_norm = quad::integrate(absR, 0.0, probe_span, 0.25);
    c.weighted_l1 = quad::integrate([&](double t) { return (1.0 + t) * absR(t); }, 0.0,
                                    probe_span, 0.25);

    // log-linear tail fit over the second half of the probe.  A single fit with a
    // small residual is not enough: slow algebraic tails also sit close to a line
    // over one octave, but their local rate keeps falling, so the two half-window
    // rates disagree.  Requiring the rates to match within 20% rejects them.
    std::vector<double> xs, ys;
    for (double t = 0.5 * probe_span; t <= probe_span + 1e-9; t += 0.25) {
        const double v = absR(t);
        if (v < 1e-300) continue;
        xs.push_back(t);
        ys.push_back(std::log(v));
    }
    if (xs.empty()) {
        // no mass anywhere in the tail window: numerically compact support
        c.certified = true;
        return c;
    }
    const LineFit full = fit_line(xs, ys, 0, xs.size());
    const LineFit lo = fit_line(xs, ys, 0, xs.size() / 2);
    const LineFit hi = fit_line(xs, ys, xs.size() / 2, xs.size());
    c.fit_residual = full.rms;
    c.tail_rate = -full.slope;
    c.tail_coeff = std::exp(full.intercept);
    const bool rates_agree = lo.slope < 0 && hi.slope < 0 &&
                             std::fabs(hi.slope / lo.slope - 1.0) <= 0.2;
    c.certified = xs.size() >= 16 && full.rms <= 0.25 && c.tail_rate > 0 && rates_agree;
    if (c.certified) {
        c.l1_norm += c.tail_mass(probe_span);
        // int_L^inf (1+t) C e^{-a t} = C e^{-a L} ((1+L)/a + 1/a^2)
        const double a = c.tail_rate, L = probe_span;
        c.weighted_l1 += c.tail_coeff * std::exp(-a * L) * ((1.0 + L) / a + 1.0 / (a * a));
    }
    return c;
}

double lq_unit_partition_sum(const AnalyticSignal& R, double q, const KernelCertificate& cert) {
    if (!(q >= 1.0)) throw std::invalid_argument("lq_unit_partition_sum: q must be >= 1");
    const bool sup_cell = q >= 1e6;  // the L^infinity reading of the cell norm
    const int K = static_cast<int>(cert.probe_span);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
        if (sup_cell) {
            double m = 0.0;
            for (int j = 0; j <= 64; ++j)
                m = std::max(m, std::fabs(R.eval_scalar(k + j / 64.0)));
            sum += m;
        } else {
            const double cell = quad::integrate(
                [&](double t) { return std::pow(std::fabs(R.eval_scalar(t)), q); },
                static_cast<double>(k), static_cast<double>(k + 1), 0.25);
            sum += std::pow(cell, 1.0 / q);
        }
    }
    if (!cert.certified) return std::numeric_limits<double>::infinity();
    if (cert.tail_coeff <= 0 || cert.tail_rate <= 0) return sum;  // compact support
    // under |R| <= C e^{-a t} the cell norms beyond the probe are geometric with
    // ratio e^{-a}; sum the envelope series exactly
    const double a = cert.tail_rate;
    double cell0 = cert.tail_coeff * std::exp(-a * K);
    if (!sup_cell) cell0 *= std::pow((1.0 - std::exp(-a * q)) / (a * q), 1.0 / q);
    return sum + cell0 / (1.0 - std::exp(-a));
}

AnalyticSignal infinite_convolution(const AnalyticSignal& R, const AnalyticSignal& f,
                                    const KernelCertificate& cert, double tail_tol,
                                    double panel) {
    if (R.dimension() != 1)
        throw std::invalid_argument("infinite_convolution: kernel must be scalar");
    if (!(panel > 0)) throw std::invalid_argument("infinite_convolution: panel must be positive");
    if (!cert.certified)
        throw std::invalid_argument(
            "infinite_convolution: kernel tail is not certified; extend the probe span or use "
            "finite_convolution");
    ConvolvedPart p;
    p.kernel = std::make_shared<AnalyticSignal>(R);
    p.f = std::make_shared<AnalyticSignal>(f);
    p.truncation = cert.truncation_for(tail_tol);
    p.panel = panel;
    p.finite_upper = false;
    return AnalyticSignal(f.dimension(), {p});
}

AnalyticSignal finite_convolution(const AnalyticSignal& R, const AnalyticSignal& f,
                                  double horizon, double panel) {
    if (R.dimension() != 1)
        throw std::invalid_argument("finite_convolution: kernel must be scalar");
    if (!(horizon > 0) || !(panel > 0))
        throw std::invalid_argument("finite_convolution: horizon and panel must be positive");
    ConvolvedPart p;
    p.kernel = std::make_shared<AnalyticSignal>(R);
    p.f = std::make_shared<AnalyticSignal>(f);
    p.truncation = horizon;
    p.panel = panel;
    p.finite_upper = true;
    return AnalyticSignal(f.dimension(), {p});
}

}  // namespace aptk
