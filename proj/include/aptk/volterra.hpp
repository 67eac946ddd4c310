#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aptk/classify.hpp"
#include "aptk/opfam.hpp"
#include "aptk/signal.hpp"
#include "aptk/weight.hpp"

namespace aptk {

/// Matrix-valued causal kernel R on (0, inf) together with the decay data the
/// convolution routines truncate against.  Near zero ||R(t)|| grows like
/// t^{head-1}; for t >= 1 the envelope is exp_coeff e^{-exp_rate t} when
/// exp_rate > 0 and alg_coeff t^{-alg_power} otherwise.  Factories fill the
/// envelope; hand-built kernels must set it themselves or tail_mass throws.
struct OperatorKernel {
    std::function<Eigen::MatrixXd(double)> eval;
    int dim = 1;
    double head = 1.0;       // ||R(t)|| ~ t^{head-1} as t -> 0+, head in (0,1]
    double exp_rate = 0.0;   // exponential envelope rate (0 -> algebraic tail)
    double exp_coeff = 0.0;
    double alg_power = 0.0;  // algebraic envelope ||R(t)|| <= alg_coeff t^{-alg_power}, t >= 1
    double alg_coeff = 0.0;

    double norm_at(double t) const;  // spectral norm of eval(t)

    /// Envelope mass int_L^inf of the tail bound, L >= 1.  +inf when the
    /// algebraic power does not integrate.
    double tail_mass(double L) const;

    /// Smallest L >= 1 with tail_mass(L) <= tol; +inf when no length works.
    double tail_length_for(double tol) const;

    /// int_0^inf ||R||: graded quadrature over the head, envelope beyond the
    /// probe span.
    double l1_norm() const;

    /// R(t) = e^{tA} for the model generator; exact exponential envelope.
    /// Requires a negative definite generator.
    static OperatorKernel semigroup(const OperatorModel& model);

    /// R(t) = t^{gamma-1} P_gamma(t), the mild-solution kernel of the
    /// order-gamma problem.  Head exponent gamma; the long-time envelope is
    /// algebraic of power gamma+1 with a probed coefficient.
    static OperatorKernel subordinated(const OperatorModel& model, double gamma);

    /// Scalar e^{-rate t}.
    static OperatorKernel scalar_exponential(double rate);
};

enum class ConvolutionSide { infinite, finite };

/// A convolution F(t) = int R(v) f(t-v) dv over v in (0, tail_length]
/// (infinite side, truncation certified against the kernel envelope) or
/// v in (0, t] (finite side).
struct ConvolutionTask {
    OperatorKernel kernel;
    AnalyticSignal forcing = AnalyticSignal::constant(0.0);
    ConvolutionSide side = ConvolutionSide::infinite;
    double tail_length = 64.0;
    double tolerance = 1e-8;

    void validate() const;  // dimension match, positive lengths
};

/// Point evaluation of the task.  On the infinite side throws
/// std::runtime_error when the envelope tail mass at tail_length exceeds the
/// tolerance; the message carries a length that would suffice.
Eigen::VectorXd infinite_convolution(const ConvolutionTask& task, double t);
Eigen::VectorXd finite_convolution(const ConvolutionTask& task, double t);

/// Product-integration weights of a causal kernel on a uniform offset grid:
/// panel j covers offsets [j h, (j+1) h] and contributes
///   on_node[j] g(t - j h) + off_node[j] g(t - (j+1) h)
/// for a signal interpolated linearly between samples.  Kernel panel moments
/// are integrated by quadrature (graded over the singular head), so the
/// weights reproduce int R(v) g(t-v) dv to O(h^2) in g.
struct ConvolutionWeights {
    std::vector<Eigen::MatrixXd> on_node;
    std::vector<Eigen::MatrixXd> off_node;
    double step = 0.0;

    /// Discrete convolution with zero history before the first column:
    /// column i of the result is sum over the covered panels j < min(i, m) of
    /// on_node[j] g_{i-j} + off_node[j] g_{i-j-1}.  Scalar weights broadcast
    /// over vector samples.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& samples) const;
};

ConvolutionWeights product_weights(const OperatorKernel& kernel, double step, int panels);

/// One hypothesis of a proposition check: what was measured and whether it
/// admits the conclusion.
struct HypothesisCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    std::string detail;
};

/// Closure of recurrence under infinite-memory convolution: for a kernel with
/// finite unit-block sum sum_k ||R||_{L^q[k,k+1]} (q conjugate to p) and
/// translation-invariant weights, the convolution of the recurrent part stays
/// Stepanov-p recurrent and the convolution of the ergodic part keeps a
/// vanishing weighted Stepanov mean.
struct InfiniteConvReport {
    KernelCertificate kernel;
    double block_sum = 0.0;
    TranslationInvarianceReport invariance;
    std::vector<HypothesisCheck> hypotheses;
    bool hypotheses_pass = false;
    MembershipVerdict recurrent;  // sp_aa verdict of kernel * g
    LimitEstimate ergodic;        // stepanov ergodic functional of kernel * q
    bool conclusion_pass = false;
    bool pass = false;
    std::string detail;
};

InfiniteConvReport verify_prop_infinite(const SplitSignal& f, const AnalyticSignal& kernel,
                                        const Weight& rho1, const Weight& rho2, double p,
                                        const std::vector<double>& sequence,
                                        const SeminormSpec& spec = {});

/// Mean-class variant: a first-moment kernel (int (1+t)||R|| < inf) and a
/// vanishing weight-mass ratio int rho2 / int rho1 push the ergodic part's
/// weighted mean to zero, dominated rung by rung on the horizon ladder by
/// ess-sup(q) * int ||R|| * mass ratio.  With only int ||R|| < inf the same
/// ergodic conclusion holds; that weaker route is recorded as a fallback
/// hypothesis when the first moment diverges.
struct BesicovitchConvReport {
    KernelCertificate kernel;
    LimitEstimate mass_ratio;  // int_{-T}^T rho2 / int_{-T}^T rho1 ladder
    double ess_bound = 0.0;    // probed sup of the ergodic part
    std::vector<HypothesisCheck> hypotheses;
    bool hypotheses_pass = false;
    LimitEstimate ergodic;  // weighted mean of kernel * q
    std::vector<std::pair<double, double>> rung_bounds;  // (functional, dominating bound) per rung
    bool bound_holds = false;
    bool conclusion_pass = false;
    bool pass = false;
    std::string detail;
};

BesicovitchConvReport verify_prop_besicovitch(const SplitSignal& f, const AnalyticSignal& kernel,
                                              const Weight& rho1, const Weight& rho2,
                                              const SeminormSpec& spec = {});

/// Half-line variant: a dominator g with rho2(t) <= g(s) rho2(t-s) and
/// int (1+g)||R|| < inf factorize the one-sided weighted mean of
/// F(t) = int_0^t R(t-s) f(s) ds through the mean of f, so F inherits a
/// vanishing one-sided mean.  The dominator condition is verified on nested
/// t-scans; an alternative block-sum route (finite sum_k ||R||_{L^q} times the
/// Stepanov norm of g) is recorded for when the direct integral diverges.
struct FiniteConvReport {
    KernelCertificate kernel;
    std::vector<double> dominator_s;      // probe shifts
    std::vector<double> dominator_need;   // scanned sup of rho2(t)/rho2(t-s)
    std::vector<double> dominator_given;  // g at the probe shifts
    bool dominator_ok = false;
    double dominated_integral = 0.0;  // int (1+g)||R||
    double bound_factor = 0.0;        // int g||R||, the proof's factor
    std::vector<HypothesisCheck> hypotheses;
    bool hypotheses_pass = false;
    LimitEstimate ergodic;  // one-sided weighted mean of F
    std::vector<std::pair<double, double>> rung_bounds;  // (functional of F, factorized bound)
    bool bound_holds = false;
    bool conclusion_pass = false;
    bool pass = false;
    std::string detail;
};

FiniteConvReport verify_prop_finite(const AnalyticSignal& f, const AnalyticSignal& kernel,
                                    const Weight& rho1, const Weight& rho2,
                                    const std::function<double(double)>& dominator,
                                    const SeminormSpec& spec = {});

/// Semilinear history-value problem u = Lambda u,
///   Lambda u(t) = int R(t-s) f(s, u(s)) ds
/// with R the semigroup kernel (classic problem) or the order-gamma kernel
/// (gamma set).  Solved by Picard iteration on [-window, window] with zero
/// history before -window; for the semigroup kernel the truncation is
/// invisible beyond the exponential transient, for the fractional kernel the
/// computed fixed point is the mild solution started at -window.
struct SemilinearProblem {
    OperatorModel model;
    std::optional<double> gamma;  // unset -> semigroup kernel
    std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> nonlinearity;
    LipschitzSpec lipschitz = LipschitzSpec::constant(0.0);
    int contraction_order = 1;               // n of the iteration constant checked
    std::optional<GridFunction> initial;     // starting iterate; zero when unset
};

struct FixedPointOptions {
    double window = 32.0;
    double step = 0.015625;  // 2^-6
    double tolerance = 1e-6;
    int max_iterations = 60;
    int divergence_run = 5;  // consecutive non-contracting steps that abort
};

struct FixedPointRun {
    std::vector<GridFunction> iterates;  // starts with the initial iterate
    std::vector<double> distances;       // sup distance of successive iterates
    double contraction = 0.0;            // max ratio of successive distances
    double constant = 0.0;               // iteration constant of the precondition
    std::string constant_name;           // which constant (kernel family and order)
    bool precondition_pass = false;      // constant < 1
    double residual = 0.0;               // sup norm of u - Lambda u for the returned iterate
    double posterior_bound = 0.0;        // contraction/(1-contraction) * last step
    bool converged = false;
    bool diverged = false;
    std::string detail;
};

FixedPointRun semilinear_fixed_point(const SemilinearProblem& problem,
                                     const FixedPointOptions& opt = {});

/// sup over the interior grid of || D^gamma u - A u - f(t, u) ||, with the
/// order-gamma derivative of the zero-extended samples computed by
/// product-integrated fractional integration (graded over the t^{-gamma}
/// head) and a central difference.  The interior margin defaults to a quarter
/// of the span on each side; truncated history shows up as an O((t-t0)^-gamma)
/// floor unless the samples decay into the past or start at a zero crossing.
double weyl_liouville_residual(const GridFunction& u, double gamma, const Eigen::MatrixXd& a,
                               const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& f,
                               double interior_margin = -1.0);

/// Discretized absorbing heat problem on (0,1): A is the Dirichlet grid
/// Laplacian minus the absorption constant, forced along one Laplacian
/// eigenmode by a scalar time profile.  Runs the (linear) fixed point with the
/// requested kernel order, fits the forced sinusoidal amplitude of the mode
/// coefficient against the frequency-response prediction and classifies the
/// trajectory of the probe node (with the recurrent/ergodic split carried
/// through by linearity when the profile comes split).
struct PoissonHeatOptions {
    int n_grid = 9;
    double absorption = 1.0;
    double gamma = 1.0;  // 1 -> semigroup kernel, else order-gamma kernel
    int mode = 1;
    double window = 32.0;
    double step = 0.015625;
    double amplitude_tolerance = 1e-4;
    std::string space = "aa";  // membership space for the probe trajectory
};

struct PoissonHeatReport {
    double spectral_gap = 0.0;  // first eigenvalue of -A (grid Laplacian + absorption)
    double amplitude = 0.0;     // fitted sin/cos amplitude of the mode trace on [0, window]
    double amplitude_predicted = 0.0;
    Eigen::VectorXd mode_shape;
    int probe_index = 0;
    GridFunction mode_trace;
    GridFunction probe_trace;
    FixedPointRun run;
    MembershipVerdict classification;
    bool amplitude_ok = false;
    bool pass = false;
    std::string detail;
};

PoissonHeatReport poisson_heat_scenario(const AnalyticSignal& profile,
                                        const std::optional<SplitSignal>& profile_split,
                                        const Weight& rho1, const Weight& rho2,
                                        const PoissonHeatOptions& opt = {});

}  // namespace aptk
