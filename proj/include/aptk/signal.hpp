#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "aptk/grid.hpp"

namespace aptk {

class AnalyticSignal;

/// amplitude * sin(frequency * t + phase); frequency 0 gives a constant.
struct TrigPart {
    Eigen::VectorXd amplitude;
    double frequency = 1.0;
    double phase = 0.0;
};

/// amplitude * exp(-rate*|t|) when two_sided, else amplitude * exp(-rate*t) * 1_{t>=0}.
struct ExpDecayPart {
    Eigen::VectorXd amplitude;
    double rate = 1.0;
    bool two_sided = true;
};

/// amplitude * sign(cos(2*pi*theta*t)).  theta is stored as a 64-bit float, so
/// phase arguments are exact only up to ~|t|*eps; fine for |t| up to ~1e10.
struct SignCosPart {
    Eigen::VectorXd amplitude;
    double theta = 1.0;
};

/// Smooth compactly supported bump: amplitude * cos^2(pi*(t-center)/(2*radius))
/// on |t-center| < radius, zero outside.
struct BumpPart {
    Eigen::VectorXd amplitude;
    double center = 0.0;
    double radius = 1.0;
};

/// amplitude * (offset + |t|)^(-exponent); symmetric algebraic decay.
struct PowerDecayPart {
    Eigen::VectorXd amplitude;
    double exponent = 1.0;
    double offset = 1.0;
};

/// Linear interpolation of a sample table; constant extrapolation outside the
/// span (extrapolation is reported through tabulated_span()).
struct TabulatedPart {
    std::shared_ptr<const GridFunction> table;
};

/// A whole signal embedded as a part (used by plus()).
struct SubSignalPart {
    std::shared_ptr<const AnalyticSignal> inner;
};

/// One-sided convolution against a scalar causal kernel:
///   (R*f)(t) = int_0^U R(v) f(t-v) dv,  U = min(t, truncation) if finite_upper
///                                           else truncation.
/// Evaluated by composite quadrature on every call; cost is
/// ~(truncation/panel)*16 kernel and signal evaluations per point.  The
/// truncation and panel come from a kernel certificate (see convolve.hpp).
struct ConvolvedPart {
    std::shared_ptr<const AnalyticSignal> kernel;  // dimension 1
    std::shared_ptr<const AnalyticSignal> f;
    double truncation = 32.0;
    double panel = 1.0;
    bool finite_upper = false;
};

using SignalPart = std::variant<TrigPart, ExpDecayPart, SignCosPart, BumpPart, PowerDecayPart,
                                TabulatedPart, SubSignalPart, ConvolvedPart>;

/// Closed-term vector-valued signal: scaled, translated, optionally zeroed on
/// (-inf, cut) in intrinsic coordinates, sum of parts.  Immutable by idiom:
/// all operations return copies.
class AnalyticSignal {
  public:
    AnalyticSignal() = default;
    AnalyticSignal(int dim, std::vector<SignalPart> parts);

    int dimension() const { return dim_; }
    const std::vector<SignalPart>& parts() const { return parts_; }

    /// Write the value at t into out[0..dim).
    void eval(double t, double* out) const;
    Eigen::VectorXd eval(double t) const;
    double eval_scalar(double t) const;  // dimension 1 only
    double norm_at(double t) const;      // Euclidean norm of the value

    /// translated(s)(t) = (*this)(t + s)
    AnalyticSignal translated(double s) const;
    AnalyticSignal scaled(double a) const;
    /// Zero on (-inf,0), unchanged on [0,inf) (in current coordinates).
    AnalyticSignal extended_by_zero() const;
    AnalyticSignal plus(const AnalyticSignal& other) const;

    /// Intersection of the spans of all tabulated parts (in current
    /// coordinates); nullopt when no tabulated part is present.  Outside this
    /// span tabulated parts extrapolate and estimates become unreliable.
    std::optional<std::pair<double, double>> tabulated_span() const;

    // -- factories (dimension 1 unless an amplitude is given) --
    static AnalyticSignal sine(double frequency = 1.0, double amplitude = 1.0);
    static AnalyticSignal cosine(double frequency = 1.0, double amplitude = 1.0);
    static AnalyticSignal constant(double value);
    static AnalyticSignal exp_decay(double rate = 1.0, bool two_sided = true,
                                    double amplitude = 1.0);
    static AnalyticSignal sign_cos(double theta);
    static AnalyticSignal bump(double center, double radius, double amplitude = 1.0);
    static AnalyticSignal power_decay(double exponent, double offset = 1.0,
                                      double amplitude = 1.0);
    static AnalyticSignal tabulated(GridFunction table);
    /// forcing * mode: vector signal (s(t) * mode_j).
    static AnalyticSignal modulated(const AnalyticSignal& scalar, const Eigen::VectorXd& mode);

  private:
    void add_into(double t, double* out, double gain) const;
    friend struct SignalAccess;

    int dim_ = 1;
    double scale_ = 1.0;
    double shift_ = 0.0;
    bool zero_before_ = false;
    double cut_ = 0.0;
    std::vector<SignalPart> parts_;
};

/// Uniform samples of f on [t0, t1] with the given step.
GridFunction sample(const AnalyticSignal& f, double t0, double t1, double step);

/// Window view s in [0,1] -> f(t + s), sampled with the given step.
GridFunction stepanov_lift(const AnalyticSignal& f, double t, double step = 1.0 / 64.0);

AnalyticSignal translate(const AnalyticSignal& f, double s);
AnalyticSignal extend_by_zero(const AnalyticSignal& f);

}  // namespace aptk
