#include <cmath>

#include "aptk/quadrature.hpp"
#include "doctest.h"

using namespace aptk;

TEST_CASE("gauss16 nodes integrate high-degree polynomials exactly") {
    const quad::Gauss16& g = quad::gauss16();
    // GL16 is exact through degree 31; check x^30 on [-1,1].
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += g.weight[i] * std::pow(g.node[i], 30);
    CHECK(s == doctest::Approx(2.0 / 31.0).epsilon(1e-13));
    double w = 0.0;
    for (int i = 0; i < 16; ++i) w += g.weight[i];
    CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("composite integration of smooth functions") {
    auto f = [](double x) { return std::sin(x); };
    CHECK(quad::integrate(f, 0.0, M_PI, 0.5) == doctest::Approx(2.0).epsilon(1e-13));
    auto gauss = [](double x) { return std::exp(-x * x); };
    CHECK(quad::integrate(gauss, -8.0, 8.0, 0.5) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
}

TEST_CASE("graded panels handle algebraic endpoint singularities") {
    // int_0^1 x^{-1/2} dx = 2
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK(quad::integrate_graded_left(f, 0.0, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-10));
    // int_0^1 x^{-0.7} dx = 1/0.3
    auto g = [](double x) { return std::pow(x, -0.7); };
    CHECK(quad::integrate_graded_left(g, 0.0, 1.0, 0.3) ==
          doctest::Approx(1.0 / 0.3).epsilon(1e-9));
    // alpha = 1 passes through to the plain composite rule
    auto s = [](double x) { return std::cos(x); };
    CHECK(quad::integrate_graded_left(s, 0.0, 1.0, 1.0) ==
          doctest::Approx(std::sin(1.0)).epsilon(1e-13));
}

TEST_CASE("cumulative cache matches direct quadrature") {
    auto f = [](double x) { return std::exp(-x * x / 8.0) * (2.0 + std::sin(3.0 * x)); };
    quad::CumulativeCache cache(f, -10.0, 10.0, 0.25);
    for (double a : {-9.7, -3.0, -0.1, 0.0, 2.341, 5.0}) {
        for (double len : {0.1, 1.0, 4.33}) {
            const double direct = quad::integrate(f, a, a + len, 0.05);
            CHECK(cache.window(a, a + len) == doctest::Approx(direct).epsilon(1e-11));
        }
    }
}
