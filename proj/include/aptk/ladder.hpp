#pragma once

#include <string>
#include <utility>
#include <vector>

namespace aptk {

/// Extrapolation used to produce the reported limit from a ladder.
enum class ExtrapolationMethod { richardson, tail_max, tail_mean };

std::string to_string(ExtrapolationMethod m);

/// Result of a limit (or limsup) estimate along a parameter ladder.
/// decay_exponent is the least-squares slope of log(value) against
/// log(parameter); -99 marks an all-zero ladder.
struct LimitEstimate {
    std::vector<std::pair<double, double>> ladder;  // (parameter, value)
    double extrapolated = 0.0;
    ExtrapolationMethod method = ExtrapolationMethod::tail_mean;
    bool converged = false;
    double residual = 0.0;
    double decay_exponent = 0.0;
    double fit_residual = 0.0;  // rms residual of the log-log fit

    double last_value() const { return ladder.empty() ? 0.0 : ladder.back().second; }

    /// Vanishing-limit rule: fitted exponent <= -0.5 and last value <= tol.
    bool vanishes(double tol) const;
};

/// Parameter ladder base*factor^k, k = 0..count-1.  Defaults: 4*2^k, k = 0..10.
struct LadderSchedule {
    double base = 4.0;
    int count = 11;
    double factor = 2.0;

    std::vector<double> values() const;
    /// Schedule truncated so no parameter exceeds cap (at least one rung kept).
    LadderSchedule capped(double cap) const;
};

/// Least-squares slope of log(v) vs log(p) over rungs with v > floor.
/// Returns false when fewer than two usable rungs exist.
bool loglog_fit(const std::vector<std::pair<double, double>>& ladder, double& slope,
                double& rms_residual);

/// Limit estimate for ladders expected to converge (possibly to zero).
/// Clean power decay (good log-log fit, slope <= -0.1) extrapolates to 0;
/// geometrically shrinking increments are Richardson-extrapolated; otherwise
/// the tail mean is reported and convergence judged from the tail spread.
LimitEstimate estimate_limit(std::vector<std::pair<double, double>> ladder, double tol);

/// Limsup surrogate: max over the last (up to) 4 rungs.
LimitEstimate estimate_limsup(std::vector<std::pair<double, double>> ladder, double tol);

}  // namespace aptk
