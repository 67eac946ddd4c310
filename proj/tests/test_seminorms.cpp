#include <cmath>

#include "aptk/seminorms.hpp"
#include "aptk/signal.hpp"
#include "aptk/weight.hpp"
#include "doctest.h"

using namespace aptk;

namespace {
const AnalyticSignal kZero = AnalyticSignal::constant(0.0);
}

TEST_CASE("stepanov metric of sin against zero over a full period") {
    SeminormSpec spec;
    spec.p = 2.0;
    auto f = AnalyticSignal::sine(1.0);
    // (1/2pi int_0^{2pi} sin^2)^{1/2} = 1/sqrt(2), independent of the window start
    CHECK(stepanov_metric(f, kZero, 2.0 * M_PI, spec) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("stepanov norm of a two-sided exponential peaks on the centered window") {
    SeminormSpec spec;
    spec.p = 1.0;
    auto f = AnalyticSignal::exp_decay(1.0, true);
    // sup_t int_t^{t+1} e^{-|s|} ds is attained at t = -1/2
    CHECK(stepanov_norm(f, spec) ==
          doctest::Approx(2.0 * (1.0 - std::exp(-0.5))).epsilon(1e-10));
}

TEST_CASE("stepanov norm properties: homogeneity, triangle, p-monotonicity") {
    SeminormSpec spec;
    spec.p = 2.0;
    spec.scan_halfwidth = 16.0;
    auto f = AnalyticSignal::sine(1.0);
    auto g = AnalyticSignal::cosine(std::sqrt(2.0));
    auto h = AnalyticSignal::exp_decay(0.5, true);

    const double nf = stepanov_norm(f, spec);
    CHECK(stepanov_norm(f.scaled(2.5), spec) == doctest::Approx(2.5 * nf).epsilon(1e-9));

    const double dfh = stepanov_metric(f, h, 1.0, spec);
    const double dfg = stepanov_metric(f, g, 1.0, spec);
    const double dgh = stepanov_metric(g, h, 1.0, spec);
    CHECK(dfh <= dfg + dgh + 1e-12);

    SeminormSpec p1 = spec;
    p1.p = 1.0;
    CHECK(stepanov_metric(f, kZero, 1.0, p1) <= stepanov_metric(f, kZero, 1.0, spec) + 1e-12);
}

TEST_CASE("stepanov norm is translation invariant for periodic signals") {
    SeminormSpec spec;
    spec.p = 2.0;
    spec.scan_halfwidth = 16.0;
    // the x-scan hits the exact sup only up to grid resolution, so the match
    // is at the scan accuracy level, not machine precision
    auto f = AnalyticSignal::sine(1.0);
    CHECK(stepanov_norm(translate(f, 0.3), spec) ==
          doctest::Approx(stepanov_norm(f, spec)).epsilon(1e-4));
}

TEST_CASE("weyl distance of sin from zero converges to 1/sqrt(2)") {
    SeminormSpec spec;
    spec.p = 2.0;
    spec.scan_halfwidth = 16.0;
    auto e = weyl_distance(AnalyticSignal::sine(1.0), kZero, spec);
    CHECK(e.converged);
    CHECK(e.extrapolated == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-4));
    CHECK_FALSE(e.vanishes(1e-3));
}

TEST_CASE("weyl distance of an integrable bump decays like 1/sqrt(l)") {
    SeminormSpec spec;
    spec.p = 2.0;
    spec.scan_halfwidth = 16.0;
    auto e = weyl_distance(AnalyticSignal::bump(0.0, 2.0), kZero, spec);
    // limit is zero, but the ladder only reaches (mass/4096)^{1/2} ~ 0.02,
    // so the headline verdict must stay honest about the last rung
    CHECK(e.converged);
    CHECK(e.extrapolated == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(e.decay_exponent == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK_FALSE(e.vanishes(1e-3));
}

TEST_CASE("besicovitch upper limit of sin") {
    SeminormSpec spec;
    spec.p = 2.0;
    auto e = besicovitch_upper(AnalyticSignal::sine(1.0), kZero, spec);
    CHECK(e.extrapolated == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("weighted averages match closed forms at finite horizon") {
    auto one = AnalyticSignal::constant(1.0);
    auto rho1 = Weight::polynomial();
    auto rho2 = Weight::constant(1.0);
    // int_{-1}^1 1 dt / (2 int_{-1}^1 (1+t^2) dt) = 2 / (16/3) = 3/8
    CHECK(weighted_ergodic(one, rho1, rho2, 1.0) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    // one-sided: int_0^1 / int_0^1 (1+t^2) = 1 / (4/3) = 3/4
    CHECK(one_sided_ergodic(one, rho1, rho2, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("weighted limit: bounded numerator against growing mass vanishes") {
    SeminormSpec spec;
    auto f = AnalyticSignal::sine(1.0);
    auto e = weighted_ergodic_limit(f, Weight::polynomial(), Weight::constant(1.0), spec);
    // numerator ~ (2/pi) 2T, denominator ~ (2/3) T^3: decay T^{-2}
    CHECK(e.vanishes(1e-3));
    CHECK(e.decay_exponent == doctest::Approx(-2.0).epsilon(0.05));
}

TEST_CASE("weighted limit of a constant with equal weights stays at the mean") {
    SeminormSpec spec;
    auto one = AnalyticSignal::constant(1.0);
    auto e = weighted_ergodic_limit(one, Weight::constant(1.0), Weight::constant(1.0), spec);
    CHECK(e.converged);
    CHECK(e.extrapolated == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("stepanov-window weighted limit vanishes for integrable signals") {
    SeminormSpec spec;
    spec.p = 2.0;
    auto q = AnalyticSignal::exp_decay(1.0, true);
    auto e = stepanov_ergodic(q, Weight::polynomial(), Weight::constant(1.0), spec);
    CHECK(e.vanishes(1e-3));
}

TEST_CASE("weyl-window weighted limit vanishes for bounded integrable-power signals") {
    SeminormSpec spec;
    spec.p = 2.0;
    InnerDiagnostics diag;
    auto q = AnalyticSignal::exp_decay(1.0, true);
    auto e = weyl_ergodic(q, Weight::polynomial(), Weight::constant(1.0), spec, &diag);
    CHECK(e.vanishes(1e-3));
    CHECK(diag.nodes > 0);
}

TEST_CASE("besicovitch-window weighted limit retains persistent oscillation") {
    SeminormSpec spec;
    spec.p = 2.0;
    spec.ladder.count = 9;
    auto q = AnalyticSignal::sine(1.0);
    auto e = besicovitch_ergodic(q, Weight::constant(1.0), Weight::constant(1.0), spec);
    // inner limsup is 1/sqrt(2) at every t; the mass-normalized average
    // (1 / 2 int rho1) int |.| rho2 halves it
    CHECK(e.extrapolated == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-2));
    CHECK_FALSE(e.vanishes(1e-3));
}
