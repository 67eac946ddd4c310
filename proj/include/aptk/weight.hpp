#pragma once

#include <map>
#include <memory>
#include <string>

#include "aptk/grid.hpp"

namespace aptk {

/// Positive locally integrable weight on the line.  Admissibility classes:
///   unbounded_mass:  int_{-T}^{T} rho -> infinity as T grows,
///   bounded_weight:  additionally rho in L^inf.
enum class WeightClass { locally_integrable, unbounded_mass, bounded_weight };

std::string to_string(WeightClass c);

class Weight {
  public:
    enum class Kind { constant, polynomial, exponential, gaussian_growth, tabulated };

    static Weight constant(double value = 1.0);
    static Weight polynomial();             // 1 + t^2
    static Weight exponential(double a);    // e^{a t}
    static Weight gaussian_growth();        // e^{t^2}
    static Weight tabulated(GridFunction table);  // positive samples required

    Kind kind() const { return kind_; }
    double param() const { return param_; }

    double operator()(double t) const;
    double log_at(double t) const;  // log(rho(t)), exact for the growth kinds

    /// int_{-T}^{T} rho; closed form where available, cached quadrature else.
    double mass(double T) const;
    /// int_0^T rho.
    double mass_one_sided(double T) const;
    /// log of int_a^b rho, stable for weights whose values overflow doubles.
    double log_mass(double a, double b) const;

    /// Classification probed on a dyadic T-ladder (mass growth) and a scan for
    /// boundedness.  Decidable exactly for the closed kinds.
    WeightClass classify() const;

  private:
    Kind kind_ = Kind::constant;
    double param_ = 1.0;
    std::shared_ptr<const GridFunction> table_;
    // cache of quadrature masses for the tabulated/gaussian kinds
    mutable std::shared_ptr<std::map<double, double>> mass_cache_;

    double quad_mass(double a, double b) const;
};

}  // namespace aptk
