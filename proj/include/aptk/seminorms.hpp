#pragma once

#include "aptk/ladder.hpp"
#include "aptk/signal.hpp"
#include "aptk/weight.hpp"

namespace aptk {

/// Shared knobs for the seminorm and ergodic-average estimators.
struct SeminormSpec {
    double p = 2.0;
    double scan_halfwidth = 64.0;   // sup-type seminorms scan x in [-H, H]
    double scan_step_divisor = 8.0; // scan step = window length / divisor
    LadderSchedule ladder;          // window/horizon ladder (default 4*2^k, k=0..10)
    double tolerance = 1e-3;
    bool one_sided = false;         // restrict to [0, inf)

    void validate() const;
};

/// Diagnostics of nested estimates (inner ladder behaviour per outer node).
struct InnerDiagnostics {
    bool all_converged = true;
    double worst_residual = 0.0;
    double worst_t = 0.0;
    long nodes = 0;
};

/// sup_x [ (1/l) int_x^{x+l} |f-g|^p ]^{1/p} over the scan grid.
double stepanov_metric(const AnalyticSignal& f, const AnalyticSignal& g, double window,
                       const SeminormSpec& spec = {});

/// Stepanov norm: sup_t [ int_t^{t+1} |f|^p ]^{1/p} over the scan grid.
double stepanov_norm(const AnalyticSignal& f, const SeminormSpec& spec = {});

/// Weyl distance: limit of the Stepanov-window metric as the window grows.
LimitEstimate weyl_distance(const AnalyticSignal& f, const AnalyticSignal& g,
                            const SeminormSpec& spec = {});

/// Upper Besicovitch seminorm around center: limsup_l [ (1/2l) int_{c-l}^{c+l} |f-g|^p ]^{1/p}.
LimitEstimate besicovitch_upper(const AnalyticSignal& f, const AnalyticSignal& g,
                                const SeminormSpec& spec = {}, double center = 0.0);

/// Weighted average (1 / (2 int_{-T}^{T} rho1)) int_{-T}^{T} |f| rho2.
double weighted_ergodic(const AnalyticSignal& f, const Weight& rho1, const Weight& rho2, double T);

/// Horizon ladder of weighted_ergodic with decay-exponent fit.
LimitEstimate weighted_ergodic_limit(const AnalyticSignal& f, const Weight& rho1,
                                     const Weight& rho2, const SeminormSpec& spec = {});

/// One-sided variants on [0, T]: (1 / int_0^T rho1) int_0^T |f| rho2.
double one_sided_ergodic(const AnalyticSignal& f, const Weight& rho1, const Weight& rho2, double T);
LimitEstimate one_sided_ergodic_limit(const AnalyticSignal& f, const Weight& rho1,
                                      const Weight& rho2, const SeminormSpec& spec = {});

/// Weighted average of the unit-window Stepanov amplitude
/// [ int_t^{t+1} |q|^p ]^{1/p} over growing horizons.
LimitEstimate stepanov_ergodic(const AnalyticSignal& q, const Weight& rho1, const Weight& rho2,
                               const SeminormSpec& spec = {});

/// Weighted average of the per-point Weyl amplitude
/// [ lim_l (1/2l) int_{t-l}^{t+l} |q|^p ]^{1/p}; the inner limit is
/// extrapolated from its own ladder and must converge at every node.
LimitEstimate weyl_ergodic(const AnalyticSignal& q, const Weight& rho1, const Weight& rho2,
                           const SeminormSpec& spec = {}, InnerDiagnostics* diag = nullptr);

/// Same shape with the inner limit replaced by the limsup surrogate
/// (max over the last rungs of the inner ladder).
LimitEstimate besicovitch_ergodic(const AnalyticSignal& q, const Weight& rho1, const Weight& rho2,
                                  const SeminormSpec& spec = {}, InnerDiagnostics* diag = nullptr);

}  // namespace aptk
