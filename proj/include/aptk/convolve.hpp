#pragma once

#include "aptk/signal.hpp"

namespace aptk {

/// Decay certificate for a causal scalar kernel R on [0,inf), obtained from a
/// probe integral plus a log-linear tail fit.  All tail quantities are upper
/// estimates under the fitted exponential envelope; `certified` is false when
/// the tail does not look exponential (fit residual too large), in which case
/// truncation lengths fall back to the probe span and should not be trusted
/// beyond it.
struct KernelCertificate {
    double l1_norm = 0.0;            // int_0^inf |R|
    double weighted_l1 = 0.0;        // int_0^inf (1+t)|R|
    double tail_rate = 0.0;          // fitted a in |R| <~ C e^{-a t}
    double tail_coeff = 0.0;         // fitted C
    double probe_span = 0.0;
    double fit_residual = 0.0;       // rms of the log-linear fit
    bool certified = false;

    /// Truncation length L with int_L^inf |R| <= tol under the fitted envelope.
    double truncation_for(double tol) const;
    /// int_L^inf |R| under the fitted envelope.
    double tail_mass(double L) const;
};

KernelCertificate certify_kernel(const AnalyticSignal& R, double probe_span = 64.0);

/// Sum_{k>=0} ( int_k^{k+1} |R|^q )^{1/q}; the summability constant of the
/// infinite-convolution hypothesis.  Terms beyond the probe span use the
/// fitted envelope; returns +inf when the sum does not converge numerically.
double lq_unit_partition_sum(const AnalyticSignal& R, double q,
                             const KernelCertificate& cert);

/// F(t) = int_0^L R(v) f(t-v) dv with L chosen so the neglected tail is below
/// tail_tol * sup-norm-scale of f.  Throws when the certificate cannot
/// guarantee the requested tail.
AnalyticSignal infinite_convolution(const AnalyticSignal& R, const AnalyticSignal& f,
                                    const KernelCertificate& cert, double tail_tol = 1e-9,
                                    double panel = 1.0);

/// F(t) = int_0^t R(v) f(t-v) dv for t >= 0, zero for t < 0.
AnalyticSignal finite_convolution(const AnalyticSignal& R, const AnalyticSignal& f,
                                  double horizon = 64.0, double panel = 1.0);

}  // namespace aptk
