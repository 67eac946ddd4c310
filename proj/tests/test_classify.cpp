#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aptk/classify.hpp"
#include "doctest.h"

using aptk::AnalyticSignal;
using aptk::SpaceRequest;
using aptk::Verdict;
using aptk::Weight;

namespace {

const AnalyticSignal kSine = AnalyticSignal::sine(1.0);

// sup_t |sin(t+tau) - sin t| = 2 |sin(tau/2)|
double sine_discrepancy(double tau) { return 2.0 * std::fabs(std::sin(tau / 2.0)); }

std::vector<double> cf_denominators_sqrt2() { return {1, 2, 5, 12, 29, 70, 169, 408}; }

}  // namespace

TEST_CASE("sine periods land on multiples of 2 pi") {
    const auto c = aptk::epsilon_periods(kSine, 1e-6, 512.0);
    CHECK(c.periods.size() >= 75);
    for (double tau : c.periods) {
        const double k = std::round(tau / (2.0 * M_PI));
        CHECK(k >= 1.0);
        CHECK(std::fabs(tau - 2.0 * M_PI * k) <= 2e-6);
    }
    CHECK(c.relatively_dense(64.0));
    CHECK(c.inclusion_length <= 2.0 * M_PI + 0.1);
}

TEST_CASE("census periods obey the closed-form discrepancy bound") {
    for (double eps : {0.1, 0.3}) {
        const auto c = aptk::epsilon_periods(kSine, eps, 256.0);
        CHECK(!c.periods.empty());
        // a sampled sup can undershoot the true one by the grid gap, never more
        for (double tau : c.periods) CHECK(sine_discrepancy(tau) <= eps * 1.01 + 1e-9);
    }
}

TEST_CASE("censuses are nested across eps") {
    const auto tight = aptk::epsilon_periods(kSine, 0.1, 256.0);
    const auto loose = aptk::epsilon_periods(kSine, 0.4, 256.0);
    for (double tau : tight.periods) {
        bool found = false;
        for (double s : loose.periods) found = found || std::fabs(s - tau) < 1e-9;
        CHECK(found);
    }
    CHECK(loose.periods.size() >= tight.periods.size());
    CHECK(loose.inclusion_length <= tight.inclusion_length);
}

TEST_CASE("doubling the signal and eps together leaves the census unchanged") {
    const auto base = aptk::epsilon_periods(kSine, 0.2, 256.0);
    const auto doubled = aptk::epsilon_periods(kSine.scaled(2.0), 0.4, 256.0);
    REQUIRE(doubled.periods.size() == base.periods.size());
    for (std::size_t i = 0; i < base.periods.size(); ++i)
        CHECK(doubled.periods[i] == doctest::Approx(base.periods[i]).epsilon(1e-12));
}

TEST_CASE("pure sine is uniformly recurrent") {
    aptk::ApOptions opt;
    opt.scan_range = 512.0;
    const auto v = aptk::ap_test(kSine, opt);
    CHECK(v.verdict == Verdict::member);
    REQUIRE(v.censuses.size() == 2);
    CHECK(v.censuses[1].eps == doctest::Approx(0.2));
}

TEST_CASE("a growing ramp has no near-periods") {
    const auto ramp = AnalyticSignal::power_decay(-1.0);  // 1 + |t|
    aptk::ApOptions opt;
    opt.scan_range = 256.0;
    const auto v = aptk::ap_test(ramp, opt);
    CHECK(v.verdict == Verdict::non_member);
    // the translation profile is exactly tau here, so a handful of tiny tau
    // clear the loose pass but stay clustered at the origin
    REQUIRE(v.censuses.size() == 2);
    CHECK(v.censuses[1].periods.empty());
    CHECK(aptk::epsilon_periods(ramp, 0.1, 256.0).periods.empty());
}

TEST_CASE("two incommensurate tones stay uniformly recurrent") {
    const auto f = kSine.plus(AnalyticSignal::sine(std::sqrt(2.0)));
    const auto v = aptk::ap_test(f);  // default 2048 scan; eps-0.2 periods are ~100 apart
    CHECK(v.verdict == Verdict::member);
    REQUIRE(v.censuses.size() == 2);
    CHECK(v.censuses[1].periods.size() >= 12);
    CHECK(v.censuses[1].inclusion_length <= 256.0);
}

TEST_CASE("translates along 2 pi n reproduce sine") {
    std::vector<double> seq;
    for (int n = 1; n <= 16; ++n) seq.push_back(2.0 * M_PI * n);
    const auto r = aptk::aa_test(kSine, seq);
    CHECK(r.verdict == Verdict::member);
    CHECK(r.forward_error <= 1e-12);
    CHECK(r.backward_error <= 1e-12);
    REQUIRE(r.limit.size() > 0);
    for (Eigen::Index j = 0; j < r.limit.size(); ++j)
        CHECK(r.limit.values(0, j) == doctest::Approx(std::sin(r.limit.t(j))).epsilon(1e-12));
}

TEST_CASE("constant signals are their own subsequence limits") {
    const auto r = aptk::aa_test(AnalyticSignal::constant(0.7), {1.1, 2.3, 3.9, 5.2, 7.7, 11.0});
    CHECK(r.verdict == Verdict::member);
    for (Eigen::Index j = 0; j < r.limit.size(); ++j)
        CHECK(r.limit.values(0, j) == doctest::Approx(0.7));
}

TEST_CASE("a ramp admits no convergent subsequence of translates") {
    const auto ramp = AnalyticSignal::power_decay(-1.0);
    std::vector<double> seq;
    for (int n = 1; n <= 12; ++n) seq.push_back(n);
    const auto r = aptk::aa_test(ramp, seq);
    CHECK(r.verdict == Verdict::inconclusive);
    CHECK(r.forward_error >= 0.5);
}

TEST_CASE("uniform recurrence survives the unit-window lift") {
    std::vector<double> seq;
    for (int n = 1; n <= 12; ++n) seq.push_back(2.0 * M_PI * n);
    const auto v = aptk::sp_aa_test(kSine, 2.0, seq);
    CHECK(v.verdict == Verdict::member);
}

TEST_CASE("square-wave recurrence shows up in windowed means") {
    // sign(cos 2 pi sqrt(2) t) against the continued-fraction shifts of sqrt(2):
    // uniformly the translates stay 2 apart, but the mismatch set shrinks
    const auto f = AnalyticSignal::sign_cos(std::sqrt(2.0));
    const auto v = aptk::sp_aa_test(f, 1.0, cf_denominators_sqrt2());
    CHECK(v.verdict == Verdict::member);
}

TEST_CASE("linear growth fails in every window") {
    const auto ramp = AnalyticSignal::power_decay(-1.0);
    std::vector<double> seq;
    for (int n = 1; n <= 12; ++n) seq.push_back(n);
    const auto v = aptk::sp_aa_test(ramp, 1.0, seq);
    CHECK(v.verdict == Verdict::non_member);
}

TEST_CASE("uniform recurrence implies mean recurrence along derived sequences") {
    for (const auto& f : {kSine, AnalyticSignal::cosine(1.0).scaled(0.5)}) {
        for (double p : {1.0, 2.0}) {
            SpaceRequest req;
            req.space = "spaa";
            req.p = p;
            const auto v = aptk::membership(f, req);
            CHECK(v.verdict == Verdict::member);
        }
    }
}

TEST_CASE("decorated space names normalize to the same verdict") {
    const auto q = AnalyticSignal::exp_decay(1.0);
    SpaceRequest plain;
    plain.space = "wpwpaa0";
    plain.p = 2.0;
    SpaceRequest fancy = plain;
    fancy.space = "W^pWPAA₀(ρ₁, ρ₂)";
    const auto a = aptk::membership(q, plain);
    const auto b = aptk::membership(q, fancy);
    CHECK(a.space == "wpwpaa0");
    CHECK(b.space == "wpwpaa0");
    CHECK(a.verdict == Verdict::member);
    CHECK(b.verdict == a.verdict);
}

TEST_CASE("square wave plus integrable tail joins the weighted mean class") {
    // recurrent square wave + e^{-|t|}, weights 1+t^2 and 1, declared split
    const auto g = AnalyticSignal::sign_cos(std::sqrt(2.0));
    const auto q = AnalyticSignal::exp_decay(1.0);
    SpaceRequest req;
    req.space = "spwpaa";
    req.p = 1.0;
    req.rho1 = Weight::polynomial();
    req.rho2 = Weight::constant();
    req.sequence = cf_denominators_sqrt2();
    aptk::SplitSignal split{g, q};
    const auto v = aptk::membership(g.plus(q), req, split);
    CHECK(v.verdict == Verdict::member);
    CHECK(v.detail.find("recurrent part") != std::string::npos);
}

TEST_CASE("the zero signal sits in every pseudo class") {
    const auto zero = AnalyticSignal::constant(0.0);
    aptk::SplitSignal split{zero, zero};
    for (const char* space : {"wpap", "spwpaa", "wpwpaa", "bpwpaa"}) {
        SpaceRequest req;
        req.space = space;
        req.p = 1.0;
        const auto v = aptk::membership(zero, req, split);
        CHECK(v.verdict == Verdict::member);
    }
}

TEST_CASE("constant drift is never ergodically negligible") {
    SpaceRequest req;
    req.space = "pap0";
    const auto v = aptk::membership(AnalyticSignal::constant(1.0), req);
    CHECK(v.verdict == Verdict::non_member);
    REQUIRE(v.estimate.has_value());
    // unit weights: the average of ||1|| rho2 over [-T,T] against 2 int rho1
    CHECK(v.estimate->extrapolated == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("pseudo classes demand an explicit split") {
    SpaceRequest req;
    req.space = "wpaa";
    const auto v = aptk::membership(kSine, req);
    CHECK(v.verdict == Verdict::inconclusive);
    CHECK(v.detail.find("not unique") != std::string::npos);
}

TEST_CASE("unknown space names are refused") {
    SpaceRequest req;
    req.space = "frobnicate";
    CHECK_THROWS_AS((void)aptk::membership(kSine, req), std::invalid_argument);
}

TEST_CASE("compact support passes the half-line vanishing test") {
    const auto v = aptk::weyl_vanishing_test(AnalyticSignal::bump(0.5, 0.5), 2.0);
    CHECK(v.verdict == Verdict::member);
    REQUIRE(v.estimate.has_value());
    CHECK(v.estimate->converged);
}

TEST_CASE("constants fail the half-line vanishing test") {
    const auto v = aptk::weyl_vanishing_test(AnalyticSignal::constant(1.0), 1.0);
    CHECK(v.verdict == Verdict::non_member);
    REQUIRE(v.estimate.has_value());
    CHECK(v.estimate->extrapolated == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("quartic-root decay still has vanishing window means") {
    const auto q = AnalyticSignal::power_decay(0.25);  // (1+t)^{-1/4} on the half line
    const auto v = aptk::weyl_vanishing_test(q, 1.0);
    CHECK(v.verdict == Verdict::member);
    REQUIRE(v.estimate.has_value());
    CHECK(std::fabs(v.estimate->extrapolated) <= 1e-3);
}

TEST_CASE("equi-vanishing signals always pass the plain vanishing test") {
    const std::vector<AnalyticSignal> signals = {
        AnalyticSignal::bump(0.5, 0.5), AnalyticSignal::exp_decay(1.0, /*two_sided=*/false),
        AnalyticSignal::power_decay(0.25), AnalyticSignal::constant(1.0)};
    int equi_members = 0;
    for (const auto& q : signals) {
        const auto e = aptk::equi_weyl_vanishing_test(q, 1.0);
        if (e.verdict != Verdict::member) continue;
        ++equi_members;
        CHECK(aptk::weyl_vanishing_test(q, 1.0).verdict == Verdict::member);
    }
    CHECK(equi_members >= 2);  // bump and the one-sided exponential qualify
}

TEST_CASE("zero extension keeps a vanishing bump ergodic") {
    const auto rep = aptk::verify_weyl_extension(AnalyticSignal::bump(0.5, 0.5), 2.0);
    CHECK(rep.pass);
    CHECK(rep.half_line.verdict == Verdict::member);
    CHECK(rep.extended.verdict == Verdict::member);
}

TEST_CASE("zero extension keeps a decaying exponential ergodic") {
    const auto q = AnalyticSignal::exp_decay(1.0, /*two_sided=*/false);
    const auto rep = aptk::verify_weyl_extension(q, 2.0);
    CHECK(rep.pass);
    CHECK(rep.extended.verdict == Verdict::member);
}

TEST_CASE("extension test refuses signals that violate its hypothesis") {
    const auto rep = aptk::verify_weyl_extension(AnalyticSignal::constant(1.0), 1.0);
    CHECK_FALSE(rep.pass);
    CHECK(rep.detail.find("hypothesis violated") != std::string::npos);
    CHECK(rep.extended.detail == "skipped");
}

TEST_CASE("unit weights translate freely") {
    const auto rep =
        aptk::translation_invariance_check(Weight::constant(), Weight::constant(), {0.5, 2.0, 10.0});
    CHECK(rep.pass);
    for (const auto& sc : rep.shifts) {
        CHECK(sc.ok);
        CHECK(sc.dominator <= 1.0 + 1e-9);
    }
}

TEST_CASE("quadratic weights admit the closed-form dominator") {
    // 1 + (t-s)^2 <= 2 (1+s^2) (1+t^2), so the scanned sup must stay below it
    const auto rep = aptk::translation_invariance_check(Weight::polynomial(), Weight::polynomial(),
                                                       {0.5, 2.0, 10.0});
    CHECK(rep.pass);
    for (const auto& sc : rep.shifts) {
        CHECK(sc.boundary_ok);
        CHECK(sc.dominator_finite);
        CHECK(sc.dominator <= 2.0 * (1.0 + sc.s * sc.s) * (1.0 + 1e-9));
    }
}

TEST_CASE("gaussian-growth weights fail translation invariance") {
    const auto rep = aptk::translation_invariance_check(Weight::gaussian_growth(),
                                                       Weight::gaussian_growth(), {0.5, 2.0});
    CHECK_FALSE(rep.pass);
    bool some_divergent = false;
    for (const auto& sc : rep.shifts) some_divergent = some_divergent || !sc.dominator_finite;
    CHECK(some_divergent);
}

TEST_CASE("passing weights keep translated averages negligible") {
    const Weight rho = Weight::polynomial();
    REQUIRE(aptk::translation_invariance_check(rho, rho, {0.5, 3.0}).pass);
    for (const auto& f : {AnalyticSignal::bump(0.0, 2.0), AnalyticSignal::exp_decay(1.0)}) {
        REQUIRE(aptk::weighted_ergodic_limit(f, rho, rho).vanishes(1e-3));
        for (double s : {0.5, 3.0}) {
            const auto e = aptk::weighted_ergodic_limit(aptk::translate(f, s), rho, rho);
            CHECK(e.vanishes(1e-3));
        }
    }
}

TEST_CASE("convolving zero stays zero") {
    const auto kernel = AnalyticSignal::exp_decay(1.0, /*two_sided=*/false);
    const auto rep = aptk::convolution_invariance_demo(AnalyticSignal::constant(0.0), kernel,
                                                      Weight::polynomial(), Weight::constant());
    CHECK(rep.pass);
    CHECK(rep.vanishing);
}

TEST_CASE("exponential kernel preserves the vanishing mean") {
    const auto q = AnalyticSignal::exp_decay(1.0);  // e^{-|t|}
    const auto kernel = AnalyticSignal::exp_decay(1.0, /*two_sided=*/false);
    const auto rep = aptk::convolution_invariance_demo(q, kernel, Weight::polynomial(),
                                                      Weight::constant());
    CHECK(rep.pass);
    CHECK(rep.kernel.l1_norm == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.vanishing);
    CHECK(rep.bound_holds);
}

TEST_CASE("normalized bump kernel preserves the vanishing mean") {
    const auto q = AnalyticSignal::bump(0.0, 2.0);
    // kernels are probed on [0, inf), so center the bump to keep its mass
    const auto kernel = AnalyticSignal::bump(1.0, 1.0);
    const auto rep =
        aptk::convolution_invariance_demo(q, kernel, Weight::polynomial(), Weight::constant());
    CHECK(rep.pass);
    CHECK(rep.kernel.l1_norm == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rep.bound_holds);
}
