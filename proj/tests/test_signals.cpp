#include <cmath>

#include "aptk/grid.hpp"
#include "aptk/signal.hpp"
#include "aptk/weight.hpp"
#include "doctest.h"

using namespace aptk;

TEST_CASE("basic signal evaluation") {
    auto f = AnalyticSignal::sine(1.0);
    CHECK(f.eval_scalar(M_PI / 2) == doctest::Approx(1.0));
    CHECK(f.dimension() == 1);

    auto c = AnalyticSignal::constant(3.5);
    CHECK(c.eval_scalar(123.4) == doctest::Approx(3.5));

    auto e = AnalyticSignal::exp_decay(1.0, true);
    CHECK(e.eval_scalar(-2.0) == doctest::Approx(std::exp(-2.0)));
    CHECK(e.eval_scalar(2.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("translation and superposition") {
    auto f = AnalyticSignal::sine(1.0);
    auto g = translate(f, M_PI / 2);  // sin(t + pi/2) = cos t
    CHECK(g.eval_scalar(0.0) == doctest::Approx(1.0));
    auto s = f.plus(g);
    CHECK(s.eval_scalar(0.0) == doctest::Approx(1.0));
    CHECK(s.eval_scalar(M_PI / 4) == doctest::Approx(std::sqrt(2.0)));
    auto d = f.plus(f.scaled(-1.0));
    CHECK(d.norm_at(0.77) == doctest::Approx(0.0));
}

TEST_CASE("zero extension cuts the past") {
    auto f = AnalyticSignal::constant(2.0);
    auto q = extend_by_zero(f);
    CHECK(q.eval_scalar(-0.5) == 0.0);
    CHECK(q.eval_scalar(0.5) == doctest::Approx(2.0));
}

TEST_CASE("sign of cosine produces a unit-modulus square wave") {
    auto s = AnalyticSignal::sign_cos(std::sqrt(2.0));
    CHECK(std::abs(s.eval_scalar(0.0)) == doctest::Approx(1.0));
    CHECK(std::abs(s.eval_scalar(17.234)) == doctest::Approx(1.0));
}

TEST_CASE("sampling round-trips through CSV") {
    auto f = AnalyticSignal::cosine(2.0);
    GridFunction g = sample(f, -2.0, 2.0, 0.125);
    const char* path = "signal_roundtrip_test.csv";
    g.save_csv(path);
    GridFunction h = GridFunction::load_csv(path);
    REQUIRE(h.size() == g.size());
    CHECK(h.origin == doctest::Approx(g.origin));
    CHECK(h.step == doctest::Approx(g.step));
    for (long j = 0; j < h.size(); ++j)
        CHECK(h.values(0, j) == doctest::Approx(g.values(0, j)).epsilon(1e-15));
    std::remove(path);
}

TEST_CASE("tabulated signals interpolate and clip") {
    auto f = AnalyticSignal::sine(1.0);
    GridFunction g = sample(f, -4.0, 4.0, 1.0 / 64);
    auto tab = AnalyticSignal::tabulated(g);
    CHECK(tab.eval_scalar(1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-4));
    auto span = tab.tabulated_span();
    REQUIRE(span.has_value());
    CHECK(span->first == doctest::Approx(-4.0));
    CHECK(span->second == doctest::Approx(4.0));
}

TEST_CASE("modulated vector signals share the scalar time profile") {
    Eigen::VectorXd dir(3);
    dir << 1.0, -2.0, 2.0;
    auto f = AnalyticSignal::modulated(AnalyticSignal::sine(2.0), dir);
    CHECK(f.dimension() == 3);
    // |dir| = 3, so the norm is 3|sin 2t|
    CHECK(f.norm_at(M_PI / 4) == doctest::Approx(3.0));
}

TEST_CASE("weight masses match closed forms") {
    auto flat = Weight::constant(1.0);
    CHECK(flat.mass(3.0) == doctest::Approx(6.0));
    CHECK(flat.mass_one_sided(3.0) == doctest::Approx(3.0));

    auto poly = Weight::polynomial();  // 1 + t^2
    CHECK(poly.mass(2.0) == doctest::Approx(4.0 + 16.0 / 3.0));
    CHECK(poly(2.0) == doctest::Approx(5.0));

    auto ex = Weight::exponential(1.0);  // e^t
    CHECK(ex.mass(1.0) == doctest::Approx(std::exp(1.0) - std::exp(-1.0)));

    CHECK(to_string(flat.classify()) == "bounded-weight");
    CHECK(to_string(poly.classify()) == "unbounded-mass");
}

TEST_CASE("gaussian-growth weight works in the log domain") {
    auto g = Weight::gaussian_growth();  // exp(t^2)
    CHECK(g.log_at(10.0) == doctest::Approx(100.0));
    // int_{-1}^{1} e^{t^2} dt = 2 * int_0^1 e^{t^2} ~ 2.9253034918143
    CHECK(std::exp(g.log_mass(-1.0, 1.0)) == doctest::Approx(2.9253034918143).epsilon(1e-9));
}
