#include <cmath>

#include "aptk/convolve.hpp"
#include "doctest.h"

using aptk::AnalyticSignal;

TEST_CASE("exponential kernel certificate recovers the exact tail") {
    const auto R = AnalyticSignal::exp_decay(1.0, /*two_sided=*/false);
    const auto cert = aptk::certify_kernel(R);
    CHECK(cert.certified);
    CHECK(cert.l1_norm == doctest::Approx(1.0).epsilon(1e-10));
    // int (1+t) e^{-t} = 2
    CHECK(cert.weighted_l1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(cert.tail_rate == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cert.tail_coeff == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cert.fit_residual < 1e-10);
    CHECK(cert.truncation_for(1e-9) == doctest::Approx(std::log(1e9)).epsilon(1e-6));
}

TEST_CASE("algebraic tails are refused a certificate") {
    // (1+t)^{-2} hugs a line over one octave of the probe but its local rate
    // keeps falling; the envelope would undershoot the true tail
    const auto R = AnalyticSignal::power_decay(2.0);
    const auto cert = aptk::certify_kernel(R);
    CHECK_FALSE(cert.certified);
    CHECK(aptk::lq_unit_partition_sum(R, 1.0, cert) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("numerically compact kernels certify with zero tail") {
    AnalyticSignal gauss(1, {aptk::BumpPart{Eigen::VectorXd::Constant(1, 1.0), 2.0, 2.0}});
    const auto cert = aptk::certify_kernel(gauss);
    CHECK(cert.certified);
    CHECK(cert.tail_mass(64.0) == 0.0);
    // bump integral: int cos^2(pi u / 4) over |u|<2 = 2
    CHECK(cert.l1_norm == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("unit-cell q-sums of the exponential kernel match closed forms") {
    const auto R = AnalyticSignal::exp_decay(1.0, false);
    const auto cert = aptk::certify_kernel(R);
    // q=1 collapses to the L1 norm
    CHECK(aptk::lq_unit_partition_sum(R, 1.0, cert) == doctest::Approx(1.0).epsilon(1e-9));
    // q=2: sum_k e^{-k} sqrt((1-e^{-2})/2) = sqrt((1-e^{-2})/2) / (1-e^{-1})
    const double expect2 = std::sqrt((1.0 - std::exp(-2.0)) / 2.0) / (1.0 - std::exp(-1.0));
    CHECK(aptk::lq_unit_partition_sum(R, 2.0, cert) == doctest::Approx(expect2).epsilon(1e-9));
    // sup cells: sum_k e^{-k}
    const double expect_sup = 1.0 / (1.0 - std::exp(-1.0));
    CHECK(aptk::lq_unit_partition_sum(R, 1e7, cert) ==
          doctest::Approx(expect_sup).epsilon(1e-9));
}

TEST_CASE("convolving sine with e^{-t} gives (sin t - cos t)/2") {
    const auto R = AnalyticSignal::exp_decay(1.0, false);
    const auto cert = aptk::certify_kernel(R);
    const auto F = aptk::infinite_convolution(R, AnalyticSignal::sine(), cert, 1e-10);
    double worst = 0.0;
    for (double t = -10.0; t <= 10.0; t += 0.25)
        worst = std::max(worst, std::fabs(F.eval_scalar(t) - 0.5 * (std::sin(t) - std::cos(t))));
    CHECK(worst < 1e-9);
}

TEST_CASE("convolution against a constant reproduces the kernel mass") {
    const auto R = AnalyticSignal::exp_decay(1.0, false);
    const auto cert = aptk::certify_kernel(R);
    const auto F = aptk::infinite_convolution(R, AnalyticSignal::constant(1.0), cert, 1e-10);
    CHECK(F.eval_scalar(0.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(F.eval_scalar(17.3) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("finite convolution closed forms") {
    const auto R = AnalyticSignal::exp_decay(1.0, false);
    const auto step = aptk::finite_convolution(R, AnalyticSignal::constant(1.0));
    CHECK(step.eval_scalar(-1.0) == 0.0);
    for (double t : {0.5, 1.0, 3.0, 10.0})
        CHECK(step.eval_scalar(t) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-12));

    // e^{-t} * e^{-2t} on [0,t] = e^{-t} - e^{-2t}
    const auto f = AnalyticSignal::exp_decay(2.0, false);
    const auto F = aptk::finite_convolution(R, f);
    for (double t : {0.25, 1.0, 2.5})
        CHECK(F.eval_scalar(t) == doctest::Approx(std::exp(-t) - std::exp(-2.0 * t)).epsilon(1e-12));
}

TEST_CASE("convolution is linear in the signal") {
    const auto R = AnalyticSignal::exp_decay(1.0, false);
    const auto cert = aptk::certify_kernel(R);
    const auto f = AnalyticSignal::sine();
    const auto g = AnalyticSignal::cosine(3.0, 0.7);
    const auto Fsum = aptk::infinite_convolution(R, f.plus(g), cert);
    const auto Ff = aptk::infinite_convolution(R, f, cert);
    const auto Fg = aptk::infinite_convolution(R, g, cert);
    for (double t : {-4.0, 0.0, 1.3, 9.0})
        CHECK(Fsum.eval_scalar(t) ==
              doctest::Approx(Ff.eval_scalar(t) + Fg.eval_scalar(t)).epsilon(1e-12));
}

TEST_CASE("uncertified kernels are rejected by infinite convolution") {
    const auto R = AnalyticSignal::power_decay(2.0);
    const auto cert = aptk::certify_kernel(R);
    CHECK_THROWS(aptk::infinite_convolution(R, AnalyticSignal::sine(), cert));
}
