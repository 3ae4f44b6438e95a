// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "opbayes/calibration.hpp"
#include "opbayes/gamma_fn.hpp"
#include "opbayes/random.hpp"
#include "support/oracle.hpp"

using namespace opbayes;

TEST_CASE("regularized incomplete gamma against independent checks") {
    // P(1, x) = 1 - e^-x; half-integer shapes via erf.
    for (double x : {0.1, 1.0, 3.0, 10.0}) {
        CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-14));
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-13));
    }
    // Quadrature of the density for a non-trivial shape.
    for (double x : {0.5, 2.0, 4.0, 9.0}) {
        auto pdf = [](double u) {
            return u <= 0.0 ? 0.0 : std::exp(2.3 * std::log(u) - u - std::lgamma(3.3));
        };
        CHECK(gamma_p(3.3, x) == doctest::Approx(oracle::integrate(pdf, 0.0, x, 1e-12)).epsilon(1e-10));
    }
    CHECK(gamma_p(2.0, 0.0) == 0.0);
    CHECK(gamma_q(2.0, 0.0) == 1.0);
    CHECK(gamma_p(5.0, 1e4) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)gamma_p(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)gamma_p(2.0, -1.0), std::domain_error);
}

TEST_CASE("prior fit from mean and interval probability") {
    const PriorConstraint c{0.5, 0.25, 0.75, 2.0 / 3.0};
    const GammaParams fit = fit_gamma_from_constraint(c);
    // Reference values 3.407 and 0.147.
    CHECK(std::abs(fit.shape - 3.407) / 3.407 < 0.005);
    CHECK(std::abs(fit.scale - 0.147) < 0.001);
    // Closure: the returned parameters reproduce both constraints.
    CHECK(fit.mean() == doctest::Approx(0.5).epsilon(1e-14));
    const double prob =
        gamma_p(fit.shape, 0.75 / fit.scale) - gamma_p(fit.shape, 0.25 / fit.scale);
    CHECK(prob == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("constraint fit self-consistency on a wide interval") {
    const PriorConstraint c{1.0, 0.05, 4.0, 0.97};
    const GammaParams fit = fit_gamma_from_constraint(c);
    CHECK(fit.mean() == doctest::Approx(1.0).epsilon(1e-14));
    const double prob = gamma_p(fit.shape, 4.0 / fit.scale) - gamma_p(fit.shape, 0.05 / fit.scale);
    CHECK(prob == doctest::Approx(0.97).epsilon(1e-6));
}

TEST_CASE("infeasible constraint raises") {
    // No Gamma with mean 0.5 puts only 1e-6 mass on (0.25, 0.75) within the
    // alpha bracket... the requested probability is above the bracket's range.
    CHECK_THROWS_AS((void)fit_gamma_from_constraint(PriorConstraint{0.5, 0.499, 0.501, 0.999999}),
                    std::domain_error);
    CHECK_THROWS_AS((void)fit_gamma_from_constraint(PriorConstraint{0.5, 0.6, 0.7, 0.5}),
                    std::domain_error);
}

TEST_CASE("gamma from mean and vco") {
    const GammaParams g = gamma_from_mean_vco(4.5, 0.5);
    CHECK(g.shape == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(g.scale == doctest::Approx(9.0 / 8.0).epsilon(1e-14));
    // Round trip: mean and Vco reproduce.
    for (double vco : {0.1, 0.5, 2.0}) {
        const GammaParams h = gamma_from_mean_vco(0.5, vco);
        CHECK(h.mean() == doctest::Approx(0.5).epsilon(1e-12));
        const double vco_back = std::sqrt(h.shape * h.scale * h.scale) / h.mean();
        CHECK(vco_back == doctest::Approx(vco).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)gamma_from_mean_vco(0.5, 1e-7), std::domain_error);
}

TEST_CASE("xi from opinion moments") {
    // Vco = 0.5 encodes xi = 4 for any scale.
    const std::vector<double> ops = {1.0, 0.5, 1.5};  // mean 1, stdev 0.5
    CHECK(xi_from_opinions_moments(ops) == doctest::Approx(4.0).epsilon(1e-12));
    const std::vector<double> arith = {1.0, 2.0, 3.0, 4.0};
    const double sd = std::sqrt((2.25 + 0.25 + 0.25 + 2.25) / 3.0);
    CHECK(xi_from_opinions_moments(arith) ==
          doctest::Approx((2.5 / sd) * (2.5 / sd)).epsilon(1e-12));
    // Scale invariance.
    std::vector<double> scaled;
    for (double v : arith) scaled.push_back(13.7 * v);
    CHECK(std::abs(xi_from_opinions_moments(scaled) - xi_from_opinions_moments(arith)) < 1e-12);
    CHECK_THROWS_AS((void)xi_from_opinions_moments(std::vector<double>{2.0, 2.0, 2.0}),
                    std::domain_error);
    CHECK_THROWS_AS((void)xi_from_opinions_moments(std::vector<double>{2.0}), std::domain_error);
}

TEST_CASE("method-of-moments gamma fit") {
    CHECK(fit_gamma_moments(std::vector<double>{1.0, 3.0}).shape == doctest::Approx(2.0));
    CHECK(fit_gamma_moments(std::vector<double>{1.0, 3.0}).scale == doctest::Approx(1.0));
    // Simulation consistency: samples from Gamma(3, 0.2).
    Rng rng(777);
    std::vector<double> samples(100000);
    for (auto& s : samples) s = sample_gamma(3.0, 0.2, rng);
    const GammaParams fit = fit_gamma_moments(samples);
    CHECK(std::abs(fit.shape - 3.0) / 3.0 < 0.05);
    CHECK(std::abs(fit.scale - 0.2) / 0.2 < 0.05);
    CHECK_THROWS_AS((void)fit_gamma_moments(std::vector<double>{2.0, 2.0}), std::domain_error);
    CHECK_THROWS_AS((void)fit_gamma_moments(std::vector<double>{2.0}), std::domain_error);
}
