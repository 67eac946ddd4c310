#include "aptk/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "aptk/quadrature.hpp"

namespace aptk {

std::string to_string(WeightClass c) {
    switch (c) {
        case WeightClass::locally_integrable: return "locally-integrable";
        case WeightClass::unbounded_mass: return "unbounded-mass";
        case WeightClass::bounded_weight: return "bounded-weight";
    }
    return "?";
}

Weight Weight::constant(double value) {
    if (!(value > 0)) throw std::invalid_argument("Weight: constant must be positive");
    Weight w;
    w.kind_ = Kind::constant;
    w.param_ = value;
    return w;
}

Weight Weight::polynomial() {
    Weight w;
    w.kind_ = Kind::polynomial;
    return w;
}

Weight Weight::exponential(double a) {
    Weight w;
    w.kind_ = Kind::exponential;
    w.param_ = a;
    return w;
}

Weight Weight::gaussian_growth() {
    Weight w;
    w.kind_ = Kind::gaussian_growth;
    return w;
}

Weight Weight::tabulated(GridFunction table) {
    table.validate();
    if (table.dimension() != 1) throw std::invalid_argument("Weight: table must be scalar");
    for (Eigen::Index j = 0; j < table.size(); ++j)
        if (!(table.values(0, j) > 0))
            throw std::invalid_argument("Weight: table values must be positive");
    Weight w;
    w.kind_ = Kind::tabulated;
    w.table_ = std::make_shared<GridFunction>(std::move(table));
    return w;
}

double Weight::operator()(double t) const {
    switch (kind_) {
        case Kind::constant: return param_;
        case Kind::polynomial: return 1.0 + t * t;
        case Kind::exponential: return std::exp(param_ * t);
        case Kind::gaussian_growth: return std::exp(t * t);
        case Kind::tabulated: return table_->eval(t)(0);
    }
    return 1.0;
}

double Weight::log_at(double t) const {
    switch (kind_) {
        case Kind::constant: return std::log(param_);
        case Kind::polynomial: return std::log1p(t * t);
        case Kind::exponential: return param_ * t;
        case Kind::gaussian_growth: return t * t;
        case Kind::tabulated: return std::log(table_->eval(t)(0));
    }
    return 0.0;
}

double Weight::quad_mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    return quad::integrate([&](double t) { return (*this)(t); }, a, b, 0.25);
}

double Weight::mass(double T) const {
    if (!(T > 0)) throw std::invalid_argument("Weight::mass: T must be positive");
    switch (kind_) {
        case Kind::constant: return 2.0 * param_ * T;
        case Kind::polynomial: return 2.0 * T + 2.0 * T * T * T / 3.0;
        case Kind::exponential: {
            const double a = param_;
            if (a == 0.0) return 2.0 * T;
            return (std::exp(a * T) - std::exp(-a * T)) / a;
        }
        default: return quad_mass(-T, T);
    }
}

double Weight::mass_one_sided(double T) const {
    if (!(T > 0)) throw std::invalid_argument("Weight::mass_one_sided: T must be positive");
    switch (kind_) {
        case Kind::constant: return param_ * T;
        case Kind::polynomial: return T + T * T * T / 3.0;
        case Kind::exponential: {
            const double a = param_;
            if (a == 0.0) return T;
            return (std::exp(a * T) - 1.0) / a;
        }
        default: return quad_mass(0.0, T);
    }
}

double Weight::log_mass(double a, double b) const {
    if (!(b > a)) return -std::numeric_limits<double>::infinity();
    switch (kind_) {
        case Kind::constant: return std::log(param_) + std::log(b - a);
        case Kind::polynomial:
            return std::log((b - a) + (b * b * b - a * a * a) / 3.0);
        case Kind::exponential: {
            const double r = param_;
            if (r == 0.0) return std::log(b - a);
            // int_a^b e^{rt} = e^{r b}(1 - e^{-r(b-a)})/r for r>0
            if (r > 0) return r * b + std::log((-std::expm1(-r * (b - a))) / r);
            return r * a + std::log((-std::expm1(r * (b - a))) / (-r));
        }
        case Kind::gaussian_growth: {
            // cumulative of e^{t^2} in the log domain; beyond the quadrature
            // range use e^{x^2}/(2x)(1 + 1/2 x^-2 + 3/4 x^-4 + 15/8 x^-6),
            // which keeps strips near |t| ~ 4000 representable where panel
            // sums cannot even be enumerated
            auto logF = [](double x) {  // log int_0^x e^{t^2} dt
                if (x <= 0.0) return -std::numeric_limits<double>::infinity();
                if (x > 4.0) {
                    const double ix2 = 1.0 / (x * x);
                    return x * x - std::log(2.0 * x) +
                           std::log1p(ix2 * (0.5 + ix2 * (0.75 + ix2 * 1.875)));
                }
                return std::log(
                    quad::integrate([](double t) { return std::exp(t * t); }, 0.0, x, 0.25));
            };
            auto logsub = [](double big, double small) {
                return big + std::log1p(-std::exp(small - big));
            };
            if (a >= 0.0) return logsub(logF(b), logF(a));
            if (b <= 0.0) return logsub(logF(-a), logF(-b));
            const double lb = logF(b), la = logF(-a);
            const double m = std::max(lb, la);
            return m + std::log1p(std::exp(std::min(lb, la) - m));
        }
        default: {
            // running log-sum-exp over fixed panels; tables are compactly
            // supported so the span stays modest
            const quad::Gauss16& g = quad::gauss16();
            double mx = -std::numeric_limits<double>::infinity(), s = 0.0;
            double lo = a;
            while (lo < b) {
                const double hi = std::min(b, lo + 0.25);
                const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
                for (int i = 0; i < 16; ++i) {
                    const double t = mid + half * g.node[i];
                    const double v = log_at(t) + std::log(g.weight[i] * half);
                    if (v <= mx) {
                        s += std::exp(v - mx);
                    } else {
                        s = s * std::exp(mx - v) + 1.0;
                        mx = v;
                    }
                }
                lo = hi;
            }
            return mx + std::log(s);
        }
    }
}

WeightClass Weight::classify() const {
    switch (kind_) {
        case Kind::constant: return WeightClass::bounded_weight;
        case Kind::polynomial: return WeightClass::unbounded_mass;
        case Kind::exponential:
            return param_ == 0.0 ? WeightClass::bounded_weight : WeightClass::unbounded_mass;
        case Kind::gaussian_growth: return WeightClass::unbounded_mass;
        case Kind::tabulated: {
            // constant extrapolation outside the table keeps the weight bounded
            // and gives linearly growing mass
            return WeightClass::bounded_weight;
        }
    }
    return WeightClass::locally_integrable;
}

}  // namespace aptk
