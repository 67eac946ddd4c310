#pragma once

#include <complex>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aptk/grid.hpp"

namespace aptk {

/// Finite-dimensional stand-in for the sectorial generators the solvers need:
/// a symmetric (or diagonal, or scalar) matrix A together with the constants
/// of the resolvent bound ||R(lambda : A)|| <= M (1+|lambda|)^-beta on the
/// region { Re lambda >= -c(|Im lambda| + 1) }, and the exponent theta of the
/// fractional-power space the nonlinearity is measured in.
///
/// The class is deliberately small: on symmetric models every operator family
/// below has a closed form in the eigenbasis, which is what makes the contour
/// quadrature independently checkable.
struct OperatorModel {
    Eigen::MatrixXd A;
    double c = 0.5;
    double M = 4.0;
    double beta = 1.0;
    double theta = 0.0;

    OperatorModel() = default;
    OperatorModel(Eigen::MatrixXd a, double c, double M, double beta, double theta = 0.0);

    static OperatorModel scalar(double a, double c, double M, double beta, double theta = 0.0);
    static OperatorModel diagonal(const std::vector<double>& entries, double c, double M,
                                  double beta, double theta = 0.0);

    int dim() const { return static_cast<int>(A.rows()); }
    /// Eigenvalues in ascending order.
    const Eigen::VectorXd& eigenvalues() const { return mu_; }
    /// Orthonormal eigenbasis Q with A = Q diag(mu) Q^T.
    const Eigen::MatrixXd& basis() const { return Q_; }

    /// e^{tA} in the eigenbasis.  Closed-form route; contour_tnu is the
    /// quadrature route, and the two are compared in tests, never fused.
    Eigen::MatrixXd semigroup(double t) const;

    /// (-A)^nu e^{tA}.  On this model class the defining contour integral
    /// collapses to the residue at each eigenvalue, because the fractional
    /// power's branch cut [0, inf) lies on the far side of the contour.
    Eigen::MatrixXd tnu(double nu, double t) const;

  private:
    Eigen::VectorXd mu_;
    Eigen::MatrixXd Q_;
    void decompose();
};

struct ConditionPReport {
    bool pass = false;
    double worst_ratio = 0.0;            // max ||R(lambda)|| (1+|lambda|)^beta / M
    std::complex<double> worst_lambda{0.0, 0.0};
    std::string detail;
};

/// Scans the sector boundary lambda = -c(|eta|+1) + i eta and horizontal
/// offsets into the region, checking the resolvent bound of the model.
/// Spectrum intersecting the region fails immediately with a witness.
ConditionPReport check_condition_p(const OperatorModel& model);

/// T_nu(t) = (1/2 pi i) int (-lambda)^nu e^{lambda t} (lambda - A)^{-1} dlambda
/// along the boundary contour, by panel quadrature with complex solves at the
/// nodes.  Truncation is chosen so the e^{lambda t} tail is below tol.
Eigen::MatrixXd contour_tnu(const OperatorModel& model, double nu, double t, double tol = 1e-10);

/// (-A)^theta via the eigendecomposition; requires negative definite A for
/// theta != 0.  theta = 0 gives the identity.
Eigen::MatrixXd fractional_power(const OperatorModel& model, double theta);

/// Entire probability density Phi_gamma(z) = sum (-z)^n / (n! Gamma(1-gamma-gamma n)),
/// gamma in (0,1), z >= 0.  Small z: the alternating series in extended
/// precision with the reflection formula for the Gamma factors.  Large z: the
/// Hankel integral deformed to the vertical line through the saddle of
/// sigma - z sigma^gamma, where the integrand decays like a Gaussian.
double wright_phi(double gamma, double z);

/// Switch point between the two regimes.  Chosen so the series' worst
/// intermediate term stays below ~e^13, keeping cancellation error under
/// control in extended precision.
double wright_series_cutoff(double gamma);

/// |series - contour| evaluated at the switch point; a cross-regime
/// consistency diagnostic.
double wright_switch_discrepancy(double gamma);

/// Fixed quadrature rule for integrals int_0^inf f(s) Phi_gamma(s) ds.
/// Nodes, weights and density values are precomputed once; the truncation
/// point is where the density's exponential tail drops below tail_tol.
class WrightQuadrature {
  public:
    explicit WrightQuadrature(double gamma, double tail_tol = 1e-14);

    double gamma() const { return gamma_; }
    double s_max() const { return s_max_; }
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& density() const { return phi_; }

    template <class F>
    double integrate(F&& f) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < s_.size(); ++j) acc += w_[j] * phi_[j] * f(s_[j]);
        return acc;
    }

  private:
    double gamma_, s_max_;
    std::vector<double> s_, w_, phi_;
};

/// Shared per-gamma quadrature plan (construction costs ~10^3 density
/// evaluations, so kernels on fine time grids reuse it).
std::shared_ptr<const WrightQuadrature> wright_plan(double gamma);

/// T_{gamma,nu}(t) = t^{gamma nu} int_0^inf s^nu Phi_gamma(s) T_0(s t^gamma) ds.
/// nu = 0 is the subordinated solution family, gamma T_{gamma,1}(t)/t^gamma
/// the subordinated propagator.  Scalar models reproduce the Mittag-Leffler
/// function: subordinate(a, gamma, 0, t) = E_gamma(a t^gamma) for a < 0.
Eigen::MatrixXd subordinate(const OperatorModel& model, double gamma, double nu, double t);

/// The pair (R_gamma(t), R_gamma^theta(t)):
///   R_gamma(t)       = gamma t^{gamma-1} int s Phi_gamma(s) T_0(s t^gamma) ds
///   R_gamma^theta(t) = gamma t^{gamma-1} int s Phi_gamma(s) T_theta(s t^gamma) ds
/// the mild-solution kernels of the order-gamma problem.  theta = 0 makes the
/// two coincide.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> r_gamma_kernels(const OperatorModel& model,
                                                            double gamma, double theta, double t);

/// Lipschitz data for the nonlinearity: either a constant or a tabulated
/// nonnegative function of time (constant beyond the table).
struct LipschitzSpec {
    double value = 0.0;
    std::shared_ptr<const GridFunction> table;  // null -> constant

    static LipschitzSpec constant(double v);
    static LipschitzSpec tabulated(GridFunction g);

    bool is_constant() const { return table == nullptr; }
    double at(double t) const;
};

/// Contraction constant of the n-fold iterated convolution map with kernel
/// e^{-c u} u^{beta-theta-1}: M^n sup_t of the nested integral with n Lipschitz
/// factors.  Constant Lipschitz data factorizes into the closed form
/// (M L c^{theta-beta} Gamma(beta-theta))^n; tabulated data runs the iterated
/// smoothing G_k(y) = int K(u) L(y-u) G_{k-1}(y-u) du on a grid, n <= 3.
double mn_constant(int n, const LipschitzSpec& lf, double M, double c, double beta, double theta);

/// Always takes the quadrature path, constant data included; the independent
/// counterpart of the closed form above.
double mn_nested(int n, const LipschitzSpec& lf, double M, double c, double beta, double theta);

/// Same construction for the fractional kernel ||R_gamma^theta||: for constant
/// Lipschitz data B_n = (L int_0^inf ||R_gamma^theta(u)|| du)^n.  The kernel is
/// u^{gamma-1}-singular at 0 and decays algebraically, so the integral uses
/// graded panels plus an estimated power tail.  n <= 2.
double bn_constant(int n, const LipschitzSpec& lf, const OperatorModel& model, double gamma,
                   double theta);

/// Fitted witness for the decay bound ||T_nu(t)|| <= M e^{-ct} t^{beta-nu-1}.
/// m_ls is the least-squares intercept in log space, m_witness the smallest
/// constant making the inequality hold at every sampled t (the bound is
/// existential, so the witness is the checkable artifact).
struct BoundFit {
    double m_ls = 0.0;
    double m_witness = 0.0;
    double worst_ratio = 0.0;  // max ||T_nu|| / (m_witness e^{-ct} t^{beta-nu-1})
    bool pass = false;
};

BoundFit fit_decay_bound(const OperatorModel& model, double nu, const std::vector<double>& ts);

}  // namespace aptk
