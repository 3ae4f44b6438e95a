// Apache License, Version 2.0, refer to LICENSE.txt
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "opbayes/random.hpp"
#include "opbayes/severity_lognormal.hpp"

using namespace opbayes;

TEST_CASE("no information returns the prior") {
    const NormalParams prior{1.7, 0.4};
    const NormalParams post = lognormal_posterior(prior, 0.9, {}, ExpertPanel::none());
    CHECK(post.mean == prior.mean);
    CHECK(post.stdev == prior.stdev);
}

TEST_CASE("equal-weight arithmetic") {
    // sigma0 = sigma_i = xi = 1, mu0 = 0, one loss ln X = 3, one opinion 3.
    const NormalParams prior{0.0, 1.0};
    const std::vector<double> logs = {3.0};
    const NormalParams post = lognormal_posterior(prior, 1.0, logs, ExpertPanel({3.0}, 1.0));
    CHECK(post.mean == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(post.stdev * post.stdev == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("synthetic dataset against a frozen direct evaluation") {
    // mu0 = 1, sigma0 = 2, sigma_i = 0.5, four logged losses, two opinions
    // with xi set to their sample stdev. Expected values evaluated from the
    // posterior formulas independently (precision = 1/4 + 4/0.25 + 2/xi^2).
    const NormalParams prior{1.0, 2.0};
    const std::vector<double> logs = {0.9, 1.1, 1.0, 1.2};
    const std::vector<double> opinions = {1.3, 0.8};
    const double xi = xi_from_opinions_stdev(opinions);
    CHECK(xi == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-14));  // 0.3536

    const NormalParams post = lognormal_posterior(prior, 0.5, logs, ExpertPanel(opinions, xi));
    const double precision = 1.0 / 4.0 + 4.0 / 0.25 + 2.0 / (xi * xi);
    const double var = 1.0 / precision;
    const double mean = var * (1.0 / 4.0 + (0.9 + 1.1 + 1.0 + 1.2) / 0.25 + (1.3 + 0.8) / (xi * xi));
    CHECK(post.stdev == doctest::Approx(std::sqrt(var)).epsilon(1e-14));
    CHECK(post.mean == doctest::Approx(mean).epsilon(1e-14));
}

TEST_CASE("credibility weights: corners, symmetry, data domination") {
    const NormalParams prior{0.0, 1.0};
    {
        const auto w = credibility_weights(prior, 1.0, 0, ExpertPanel::none());
        CHECK(w[0] == doctest::Approx(1.0));
        CHECK(w[1] == 0.0);
        CHECK(w[2] == 0.0);
    }
    {
        const auto w = credibility_weights(prior, 1.0, 1, ExpertPanel({0.5}, 1.0));
        CHECK(w[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(w[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    {
        const auto w = credibility_weights(prior, 1.0, 10000, ExpertPanel({0.5}, 1.0));
        CHECK(w[1] > 0.999);
    }
}

TEST_CASE("weights sum to one and the posterior mean is their blend") {
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const NormalParams prior{4.0 * (rng.u01() - 0.5), 0.1 + 3.0 * rng.u01()};
        const double obs_sigma = 0.1 + 2.0 * rng.u01();
        const int k = static_cast<int>(rng.u01() * 20);
        std::vector<double> logs(k);
        for (auto& v : logs) v = 3.0 * (rng.u01() - 0.5);
        const int m = static_cast<int>(rng.u01() * 5);
        ExpertPanel panel = ExpertPanel::none();
        std::vector<double> ops(m);
        if (m > 0) {
            for (auto& v : ops) v = 3.0 * (rng.u01() - 0.5);
            panel = ExpertPanel(ops, 0.1 + rng.u01());
        }
        const auto w = credibility_weights(prior, obs_sigma, logs.size(), panel);
        CHECK(std::abs(w[0] + w[1] + w[2] - 1.0) < 1e-12);

        const NormalParams post = lognormal_posterior(prior, obs_sigma, logs, panel);
        double data_mean = 0.0;
        for (double v : logs) data_mean += v;
        data_mean = logs.empty() ? 0.0 : data_mean / logs.size();
        double op_mean = 0.0;
        for (double v : ops) op_mean += v;
        op_mean = ops.empty() ? 0.0 : op_mean / ops.size();
        const double blend = w[0] * prior.mean + w[1] * data_mean + w[2] * op_mean;
        CHECK(std::abs(post.mean - blend) < 1e-12);
    }
}

TEST_CASE("posterior stdev never widens with more information") {
    const NormalParams prior{0.0, 1.5};
    double prev = prior.stdev;
    std::vector<double> logs;
    for (int k = 1; k <= 30; ++k) {
        logs.push_back(0.3 * k);
        const double s = lognormal_posterior(prior, 0.8, logs, ExpertPanel::none()).stdev;
        CHECK(s < prev);
        prev = s;
    }
    const double with_experts =
        lognormal_posterior(prior, 0.8, logs, ExpertPanel({1.0, 2.0}, 0.7)).stdev;
    CHECK(with_experts < prev);
}

TEST_CASE("order invariance of losses and opinions") {
    const NormalParams prior{0.3, 1.1};
    std::vector<double> logs = {0.4, -0.2, 1.9, 0.6, 1.1};
    std::vector<double> ops = {1.0, 0.2, 1.4};
    const NormalParams a = lognormal_posterior(prior, 0.7, logs, ExpertPanel(ops, 0.5));
    std::reverse(logs.begin(), logs.end());
    std::reverse(ops.begin(), ops.end());
    const NormalParams b = lognormal_posterior(prior, 0.7, logs, ExpertPanel(ops, 0.5));
    CHECK(std::abs(a.mean - b.mean) < 1e-12);
    CHECK(std::abs(a.stdev - b.stdev) < 1e-12);
}

TEST_CASE("xi from opinion stdev: examples and degenerate panels") {
    CHECK(xi_from_opinions_stdev(std::vector<double>{1.0, 2.0, 3.0}) == doctest::Approx(1.0));
    CHECK(xi_from_opinions_stdev(std::vector<double>{1.3, 0.8}) ==
          doctest::Approx(0.35355339059327373).epsilon(1e-14));
    CHECK_THROWS_AS((void)xi_from_opinions_stdev(std::vector<double>{2.0}), std::domain_error);
    CHECK_THROWS_AS((void)xi_from_opinions_stdev(std::vector<double>{2.0, 2.0, 2.0}),
                    std::domain_error);
}

TEST_CASE("state ingests raw severities and rejects non-positive rows") {
    const NormalParams prior{1.0, 1.0};
    const std::vector<double> losses = {2.0, std::exp(1.0), 10.0};
    const LognormalCellState state(prior, 0.5, losses, ExpertPanel::none());
    CHECK(state.log_losses()[1] == doctest::Approx(1.0).epsilon(1e-15));
    const LognormalCellState grown = state.with_loss(5.0);
    CHECK(grown.log_losses().size() == 4);
    CHECK(grown.posterior().stdev < state.posterior().stdev);
    CHECK_THROWS_AS(LognormalCellState(prior, 0.5, std::vector<double>{1.0, -3.0},
                                       ExpertPanel::none()),
                    std::domain_error);
    CHECK_THROWS_AS((void)state.with_loss(0.0), std::domain_error);
    CHECK_THROWS_AS(LognormalCellState(prior, 0.0, losses, ExpertPanel::none()),
                    std::domain_error);
}

TEST_CASE("negative location opinions are legal in this model") {
    const NormalParams prior{0.0, 1.0};
    const NormalParams post =
        lognormal_posterior(prior, 1.0, std::vector<double>{-0.5}, ExpertPanel({-1.0, -2.0}, 0.5));
    CHECK(post.mean < 0.0);
}
