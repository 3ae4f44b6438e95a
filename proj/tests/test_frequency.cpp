// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "opbayes/capital.hpp"
#include "opbayes/frequency.hpp"
#include "opbayes/calibration.hpp"
#include "opbayes/random.hpp"
#include "support/oracle.hpp"

using namespace opbayes;

namespace {

// Example dataset: 15 annual counts sampled from Pois(0.6), one expert at 0.7
// with xi = 4, prior Gamma(3.407, 0.147), volume 1.
const std::vector<int> kCounts = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0};
const GammaParams kPrior{3.407, 0.147};
const ExpertPanel kPanel({0.7}, 4.0);

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("posterior parameters on the example dataset") {
    const GigParams g = freq_posterior(kPrior, 1.0, kCounts, kPanel);
    CHECK(g.nu == doctest::Approx(8.407).epsilon(1e-13));
    CHECK(g.omega == doctest::Approx(15.0 + 1.0 / 0.147).epsilon(1e-13));
    CHECK(g.phi == doctest::Approx(2.8).epsilon(1e-13));
    CHECK(g.branch() == GigBranch::proper);
}

TEST_CASE("no data and no experts returns the prior embedding bit-for-bit") {
    const GigParams g = freq_posterior(kPrior, 1.0, {}, ExpertPanel::none());
    const GigParams p = kPrior.as_gig();
    CHECK(g.nu == p.nu);
    CHECK(g.omega == p.omega);
    CHECK(g.phi == p.phi);
}

TEST_CASE("no experts reduces to the classical Poisson-Gamma conjugate") {
    const GigParams g = freq_posterior(kPrior, 1.0, kCounts, ExpertPanel::none());
    CHECK(g.branch() == GigBranch::gamma);
    // Gamma(alpha0 + sum N, beta0 / (V K beta0 + 1)): shape nu+1, rate omega.
    CHECK(g.nu + 1.0 == doctest::Approx(3.407 + 10.0).epsilon(1e-14));
    CHECK(1.0 / g.omega == doctest::Approx(0.147 / (15.0 * 0.147 + 1.0)).epsilon(1e-14));
    CHECK(gig_mean(g) ==
          doctest::Approx((3.407 + 10.0) * 0.147 / (15.0 * 0.147 + 1.0)).epsilon(1e-13));
}

TEST_CASE("gamma prior embeds exactly into the GIG-prior route") {
    const GigParams via_gamma = freq_posterior(kPrior, 1.0, kCounts, kPanel);
    const GigParams via_gig = freq_posterior_gig_prior(kPrior.as_gig(), 1.0, kCounts, kPanel);
    CHECK(via_gamma.nu == via_gig.nu);
    CHECK(via_gamma.omega == via_gig.omega);
    CHECK(via_gamma.phi == via_gig.phi);
}

TEST_CASE("gig-prior posterior: identity and one-year substitution") {
    const GigParams prior{1.3, 4.0, 0.7};
    const GigParams unchanged = freq_posterior_gig_prior(prior, 2.0, {}, ExpertPanel::none());
    CHECK(unchanged.nu == prior.nu);
    CHECK(unchanged.omega == prior.omega);
    CHECK(unchanged.phi == prior.phi);
    const std::vector<int> one_year = {2};
    const GigParams g = freq_posterior_gig_prior(prior, 2.0, one_year, ExpertPanel::none());
    CHECK(g.nu == prior.nu + 2.0);
    CHECK(g.omega == prior.omega + 2.0);
    CHECK(g.phi == prior.phi);
}

TEST_CASE("sequential year updates match the batch posterior exactly") {
    FrequencyCellState state(kPrior, 1.0, {}, kPanel);
    for (int n : kCounts) state = state.with_year(n);
    const GigParams batch = freq_posterior(kPrior, 1.0, kCounts, kPanel);
    CHECK(state.posterior().nu == batch.nu);
    CHECK(state.posterior().omega == batch.omega);
    CHECK(state.posterior().phi == batch.phi);

    // A zero count moves only omega, and phi never moves in any update.
    const FrequencyCellState s0 = state.with_year(0);
    CHECK(s0.posterior().nu == state.posterior().nu);
    CHECK(s0.posterior().omega == state.posterior().omega + 1.0);
    CHECK(s0.posterior().phi == state.posterior().phi);
    const FrequencyCellState s7 = state.with_year(7);
    CHECK(s7.posterior().phi == state.posterior().phi);
}

TEST_CASE("batch equals fold for randomized histories") {
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = static_cast<int>(rng.u01() * 40);
        std::vector<int> counts;
        counts.reserve(k);
        for (int i = 0; i < k; ++i) counts.push_back(static_cast<int>(rng.u01() * 5));
        const double volume = 0.25 + 3.0 * rng.u01();
        ExpertPanel panel = ExpertPanel::none();
        if (rng.u01() < 0.5) panel = ExpertPanel({0.3 + rng.u01(), 0.3 + rng.u01()}, 1.0 + 5.0 * rng.u01());
        FrequencyCellState state(kPrior, volume, {}, panel);
        for (int n : counts) state = state.with_year(n);
        const GigParams batch = freq_posterior(kPrior, volume, counts, panel);
        CHECK(state.posterior().nu == batch.nu);
        CHECK(state.posterior().omega == batch.omega);
        CHECK(state.posterior().phi == batch.phi);
    }
}

TEST_CASE("bayes estimate: quadrature oracle, prior-only value, expert-certain limit") {
    const FrequencyCellState state(kPrior, 1.0, kCounts, kPanel);
    const double bayes = freq_bayes_estimate(state);
    const GigParams& g = state.posterior();
    CHECK(rel_diff(bayes, oracle::gig_moment(g.nu, g.omega, g.phi, 1)) < 1e-8);

    const FrequencyCellState empty(kPrior, 1.0, {}, ExpertPanel::none());
    CHECK(freq_bayes_estimate(empty) == doctest::Approx(kPrior.mean()).epsilon(1e-12));

    // Vco(expert) -> 0 (xi huge): the estimate collapses onto the opinion.
    const FrequencyCellState certain(kPrior, 1.0, kCounts, ExpertPanel({0.7}, 1e8));
    CHECK(std::abs(freq_bayes_estimate(certain) - 0.7) < 1e-3);
}

TEST_CASE("fitted prior reproduces its target mean through the no-data estimate") {
    // The rounded literals (3.407, 0.147) carry the fit's rounding; the fitted
    // prior itself pins the mean at 0.5 exactly.
    const GammaParams fitted =
        fit_gamma_from_constraint(PriorConstraint{0.5, 0.25, 0.75, 2.0 / 3.0});
    const FrequencyCellState state(fitted, 1.0, {}, ExpertPanel::none());
    CHECK(freq_bayes_estimate(state) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mode estimators delegate to the gig module") {
    const FrequencyCellState state(kPrior, 1.0, kCounts, kPanel);
    CHECK(freq_mode_estimate(state) == gig_mode(state.posterior()));
    CHECK(freq_mode_estimate_approx(state) == gig_mode_approx(state.posterior()));
    CHECK(freq_mode_estimate(state) < freq_bayes_estimate(state));  // mode < mean for a GIG
}

TEST_CASE("maximum likelihood estimator") {
    CHECK(freq_mle(kCounts, 1.0) == doctest::Approx(10.0 / 15.0).epsilon(1e-15));
    const std::vector<int> zeros(8, 0);
    CHECK(freq_mle(zeros, 1.0) == 0.0);
    CHECK(freq_mle(kCounts, 2.0) == doctest::Approx(0.5 * 10.0 / 15.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)freq_mle({}, 1.0), std::domain_error);
}

TEST_CASE("two-source credibility estimate") {
    CHECK(freq_two_source_estimate(kPrior, 1.0, {}) == doctest::Approx(kPrior.mean()));
    // beta0 -> infinity (prior mean held fixed) pushes all weight onto the data.
    const GammaParams diffuse{0.5 / 1e12, 1e12};
    CHECK(freq_two_source_estimate(diffuse, 1.0, kCounts) ==
          doctest::Approx(10.0 / 15.0).epsilon(1e-9));
    // Frozen hand arithmetic: w = 1/(15*0.147+1), w*0.500829 + (1-w)*2/3.
    CHECK(freq_two_source_estimate(kPrior, 1.0, kCounts) ==
          doctest::Approx(0.6149232449297972).epsilon(1e-13));
}

// Asymptotic limit checks with fixed seeds. The acceptance suite repeats
// these at full size; here they guard the module on its own.
TEST_CASE("limit (a): many years of data recover the true intensity") {
    Rng rng(2026);
    const double lambda_true = 0.6;
    std::vector<int> counts(10000);
    for (auto& c : counts) c = static_cast<int>(sample_poisson(lambda_true, rng));
    const FrequencyCellState state(kPrior, 1.0, counts, kPanel);
    CHECK(std::abs(freq_bayes_estimate(state) - lambda_true) < 0.05);
}

TEST_CASE("limit (c): many experts recover the true intensity") {
    Rng rng(2027);
    const double lambda_true = 0.6, xi = 4.0;
    std::vector<double> opinions(10000);
    for (auto& t : opinions) t = sample_gamma(xi, lambda_true / xi, rng);
    const FrequencyCellState state(kPrior, 1.0, kCounts, ExpertPanel(opinions, xi));
    CHECK(std::abs(freq_bayes_estimate(state) - lambda_true) < 0.05);
}

TEST_CASE("limit (d): worthless experts reduce to the two-source blend") {
    const FrequencyCellState state(kPrior, 1.0, kCounts, ExpertPanel({0.7}, 1e-8));
    CHECK(std::abs(freq_bayes_estimate(state) - freq_two_source_estimate(kPrior, 1.0, kCounts)) <
          1e-3);
}

TEST_CASE("limit (e): a certain prior ignores data and experts") {
    const double c = 1e6;
    const GammaParams sharp{3.407 * c, 0.147 / c};
    const FrequencyCellState state(sharp, 1.0, kCounts, kPanel);
    CHECK(std::abs(freq_bayes_estimate(state) - sharp.mean()) < 1e-3);
}

TEST_CASE("negative nu posteriors are valid proper GIGs, not clamped") {
    // Small alpha0, many experts, few counts.
    const GammaParams prior{0.5, 1.0};
    const ExpertPanel panel({0.5, 0.6, 0.7}, 4.0);
    const GigParams g = freq_posterior(prior, 1.0, std::vector<int>{0, 1}, panel);
    CHECK(g.nu < 0.0);
    CHECK(g.branch() == GigBranch::proper);
    CHECK(gig_mean(g) > 0.0);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)freq_posterior(kPrior, 0.0, kCounts, kPanel), std::domain_error);
    CHECK_THROWS_AS((void)freq_posterior(kPrior, 1.0, std::vector<int>{-1}, kPanel),
                    std::domain_error);
    CHECK_THROWS_AS(ExpertPanel({0.7}, 0.0), std::domain_error);
    CHECK_THROWS_AS((void)freq_posterior(kPrior, 1.0, kCounts, ExpertPanel({-0.7}, 4.0)),
                    std::domain_error);
    CHECK_THROWS_AS((void)freq_posterior(GammaParams{-1.0, 0.147}, 1.0, kCounts, kPanel),
                    std::domain_error);
}
