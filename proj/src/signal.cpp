#include "aptk/signal.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "aptk/quadrature.hpp"

namespace aptk {

namespace {

int part_dim(const SignalPart& p) {
    return std::visit(
        [](const auto& q) -> int {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, TabulatedPart>)
                return q.table->dimension();
            else if constexpr (std::is_same_v<T, SubSignalPart>)
                return q.inner->dimension();
            else if constexpr (std::is_same_v<T, ConvolvedPart>)
                return q.f->dimension();
            else
                return static_cast<int>(q.amplitude.size());
        },
        p);
}

}  // namespace

AnalyticSignal::AnalyticSignal(int dim, std::vector<SignalPart> parts)
    : dim_(dim), parts_(std::move(parts)) {
    if (dim_ < 1) throw std::invalid_argument("AnalyticSignal: dimension must be >= 1");
    for (const auto& p : parts_)
        if (part_dim(p) != dim_)
            throw std::invalid_argument("AnalyticSignal: part dimension mismatch");
}

void AnalyticSignal::add_into(double t, double* out, double gain) const {
    const double tau = t - shift_;
    if (zero_before_ && tau < cut_) return;
    const double g = gain * scale_;
    for (const auto& part : parts_) {
        std::visit(
            [&](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, TrigPart>) {
                    const double v = std::sin(p.frequency * tau + p.phase);
                    for (int i = 0; i < dim_; ++i) out[i] += g * v * p.amplitude[i];
                } else if constexpr (std::is_same_v<T, ExpDecayPart>) {
                    double v = 0.0;
                    if (p.two_sided)
                        v = std::exp(-p.rate * std::fabs(tau));
                    else if (tau >= 0)
                        v = std::exp(-p.rate * tau);
                    if (v != 0.0)
                        for (int i = 0; i < dim_; ++i) out[i] += g * v * p.amplitude[i];
                } else if constexpr (std::is_same_v<T, SignCosPart>) {
                    const double c = std::cos(2.0 * M_PI * p.theta * tau);
                    const double v = (c > 0) - (c < 0);
                    if (v != 0)
                        for (int i = 0; i < dim_; ++i) out[i] += g * v * p.amplitude[i];
                } else if constexpr (std::is_same_v<T, BumpPart>) {
                    const double u = tau - p.center;
                    if (std::fabs(u) < p.radius) {
                        const double c = std::cos(M_PI * u / (2.0 * p.radius));
                        const double v = c * c;
                        for (int i = 0; i < dim_; ++i) out[i] += g * v * p.amplitude[i];
                    }
                } else if constexpr (std::is_same_v<T, PowerDecayPart>) {
                    const double v = std::pow(p.offset + std::fabs(tau), -p.exponent);
                    for (int i = 0; i < dim_; ++i) out[i] += g * v * p.amplitude[i];
                } else if constexpr (std::is_same_v<T, TabulatedPart>) {
                    const GridFunction& tb = *p.table;
                    const Eigen::Index n = tb.size();
                    const double pos = (tau - tb.origin) / tb.step;
                    if (pos <= 0) {
                        for (int i = 0; i < dim_; ++i) out[i] += g * tb.values(i, 0);
                    } else if (pos >= static_cast<double>(n - 1)) {
                        for (int i = 0; i < dim_; ++i) out[i] += g * tb.values(i, n - 1);
                    } else {
                        const Eigen::Index j = static_cast<Eigen::Index>(pos);
                        const double w = pos - static_cast<double>(j);
                        for (int i = 0; i < dim_; ++i)
                            out[i] += g * ((1.0 - w) * tb.values(i, j) + w * tb.values(i, j + 1));
                    }
                } else if constexpr (std::is_same_v<T, SubSignalPart>) {
                    p.inner->add_into(tau, out, g);
                } else if constexpr (std::is_same_v<T, ConvolvedPart>) {
                    const double upper = p.finite_upper ? std::min(tau, p.truncation)
                                                        : p.truncation;
                    if (upper > 0.0) {
                        const quad::Gauss16& gl = quad::gauss16();
                        const int np = static_cast<int>(std::ceil(upper / p.panel));
                        const double w = upper / np;
                        constexpr int kStack = 64;
                        double buf[kStack];
                        double* tmp = buf;
                        std::vector<double> heap;
                        if (dim_ > kStack) {
                            heap.resize(static_cast<std::size_t>(dim_));
                            tmp = heap.data();
                        }
                        for (int k = 0; k < np; ++k) {
                            const double mid = (k + 0.5) * w, half = 0.5 * w;
                            for (int i = 0; i < 16; ++i) {
                                const double v = mid + half * gl.node[i];
                                const double kv = p.kernel->eval_scalar(v);
                                if (kv == 0.0) continue;
                                p.f->eval(tau - v, tmp);
                                const double c = g * gl.weight[i] * half * kv;
                                for (int j = 0; j < dim_; ++j) out[j] += c * tmp[j];
                            }
                        }
                    }
                }
            },
            part);
    }
}

void AnalyticSignal::eval(double t, double* out) const {
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    add_into(t, out, 1.0);
}

Eigen::VectorXd AnalyticSignal::eval(double t) const {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim_);
    add_into(t, v.data(), 1.0);
    return v;
}

double AnalyticSignal::eval_scalar(double t) const {
    if (dim_ != 1) throw std::logic_error("eval_scalar: signal is not scalar");
    double v = 0.0;
    add_into(t, &v, 1.0);
    return v;
}

double AnalyticSignal::norm_at(double t) const {
    constexpr int kStack = 64;
    if (dim_ == 1) {
        double v = 0.0;
        add_into(t, &v, 1.0);
        return std::fabs(v);
    }
    if (dim_ <= kStack) {
        double buf[kStack];
        for (int i = 0; i < dim_; ++i) buf[i] = 0.0;
        add_into(t, buf, 1.0);
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += buf[i] * buf[i];
        return std::sqrt(s);
    }
    return eval(t).norm();
}

AnalyticSignal AnalyticSignal::translated(double s) const {
    AnalyticSignal f = *this;
    f.shift_ -= s;
    return f;
}

AnalyticSignal AnalyticSignal::scaled(double a) const {
    AnalyticSignal f = *this;
    f.scale_ *= a;
    return f;
}

AnalyticSignal AnalyticSignal::extended_by_zero() const {
    AnalyticSignal f;
    f.dim_ = dim_;
    f.zero_before_ = true;
    f.cut_ = 0.0;
    f.parts_.push_back(SubSignalPart{std::make_shared<AnalyticSignal>(*this)});
    return f;
}

AnalyticSignal AnalyticSignal::plus(const AnalyticSignal& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("plus: dimension mismatch");
    AnalyticSignal f;
    f.dim_ = dim_;
    f.parts_.push_back(SubSignalPart{std::make_shared<AnalyticSignal>(*this)});
    f.parts_.push_back(SubSignalPart{std::make_shared<AnalyticSignal>(other)});
    return f;
}

std::optional<std::pair<double, double>> AnalyticSignal::tabulated_span() const {
    std::optional<std::pair<double, double>> span;
    auto merge = [&](double lo, double hi) {
        lo += shift_;
        hi += shift_;
        if (!span)
            span = {lo, hi};
        else
            span = {std::max(span->first, lo), std::min(span->second, hi)};
    };
    for (const auto& part : parts_) {
        if (const auto* tb = std::get_if<TabulatedPart>(&part)) {
            merge(tb->table->origin, tb->table->t_last());
        } else if (const auto* sub = std::get_if<SubSignalPart>(&part)) {
            if (auto s = sub->inner->tabulated_span()) merge(s->first, s->second);
        } else if (const auto* cv = std::get_if<ConvolvedPart>(&part)) {
            // the convolution reads f on [t - truncation, t]
            if (auto s = cv->f->tabulated_span()) merge(s->first + cv->truncation, s->second);
        }
    }
    return span;
}

AnalyticSignal AnalyticSignal::sine(double frequency, double amplitude) {
    TrigPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, amplitude);
    p.frequency = frequency;
    p.phase = 0.0;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::cosine(double frequency, double amplitude) {
    TrigPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, amplitude);
    p.frequency = frequency;
    p.phase = M_PI / 2.0;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::constant(double value) {
    TrigPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, value);
    p.frequency = 0.0;
    p.phase = M_PI / 2.0;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::exp_decay(double rate, bool two_sided, double amplitude) {
    ExpDecayPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, amplitude);
    p.rate = rate;
    p.two_sided = two_sided;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::sign_cos(double theta) {
    SignCosPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, 1.0);
    p.theta = theta;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::bump(double center, double radius, double amplitude) {
    if (!(radius > 0)) throw std::invalid_argument("bump: radius must be positive");
    BumpPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, amplitude);
    p.center = center;
    p.radius = radius;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::power_decay(double exponent, double offset, double amplitude) {
    if (!(offset > 0)) throw std::invalid_argument("power_decay: offset must be positive");
    PowerDecayPart p;
    p.amplitude = Eigen::VectorXd::Constant(1, amplitude);
    p.exponent = exponent;
    p.offset = offset;
    return AnalyticSignal(1, {p});
}

AnalyticSignal AnalyticSignal::tabulated(GridFunction table) {
    table.validate();
    TabulatedPart p;
    p.table = std::make_shared<GridFunction>(std::move(table));
    return AnalyticSignal(p.table->dimension(), {p});
}

AnalyticSignal AnalyticSignal::modulated(const AnalyticSignal& scalar, const Eigen::VectorXd& mode) {
    if (scalar.dimension() != 1) throw std::invalid_argument("modulated: base must be scalar");
    const int d = static_cast<int>(mode.size());
    AnalyticSignal f;
    f.dim_ = d;
    // re-express every closed part with the mode as amplitude
    std::vector<SignalPart> parts;
    std::function<void(const AnalyticSignal&, double)> absorb =
        [&](const AnalyticSignal& s, double gain) {
            const double g = gain * s.scale_;
            if (s.shift_ != 0.0 || s.zero_before_)
                throw std::invalid_argument(
                    "modulated: translated or masked signals are not supported");
            for (const auto& part : s.parts_) {
                if (const auto* sub = std::get_if<SubSignalPart>(&part)) {
                    absorb(*sub->inner, g);
                    continue;
                }
                SignalPart q = part;
                std::visit(
                    [&](auto& pp) {
                        using T = std::decay_t<decltype(pp)>;
                        if constexpr (std::is_same_v<T, TabulatedPart> ||
                                      std::is_same_v<T, ConvolvedPart>) {
                            throw std::invalid_argument(
                                "modulated: tabulated or convolved parts are not supported");
                        } else if constexpr (!std::is_same_v<T, SubSignalPart>) {
                            pp.amplitude = (g * pp.amplitude[0]) * mode;
                        }
                    },
                    q);
                parts.push_back(std::move(q));
            }
        };
    absorb(scalar, 1.0);
    f.parts_ = std::move(parts);
    return f;
}

GridFunction sample(const AnalyticSignal& f, double t0, double t1, double step) {
    if (!(step > 0)) throw std::invalid_argument("sample: step must be positive");
    if (!(t1 > t0)) throw std::invalid_argument("sample: empty window");
    const Eigen::Index n = static_cast<Eigen::Index>(std::floor((t1 - t0) / step + 1e-9)) + 1;
    if (n < 2) throw std::invalid_argument("sample: window shorter than one step");
    GridFunction g;
    g.origin = t0;
    g.step = step;
    g.values.resize(f.dimension(), n);
    std::vector<double> buf(static_cast<std::size_t>(f.dimension()));
    for (Eigen::Index j = 0; j < n; ++j) {
        f.eval(t0 + step * static_cast<double>(j), buf.data());
        for (int i = 0; i < f.dimension(); ++i) g.values(i, j) = buf[static_cast<std::size_t>(i)];
    }
    return g;
}

GridFunction stepanov_lift(const AnalyticSignal& f, double t, double step) {
    return sample(f, t, t + 1.0, step);
}

AnalyticSignal translate(const AnalyticSignal& f, double s) { return f.translated(s); }

AnalyticSignal extend_by_zero(const AnalyticSignal& f) { return f.extended_by_zero(); }

}  // namespace aptk
