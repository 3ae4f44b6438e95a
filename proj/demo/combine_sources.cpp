// Apache License, Version 2.0, refer to LICENSE.txt
//
// Walks the frequency workflow end to end: calibrate a Gamma prior from an
// industry-style constraint, fold in fifteen years of counts and one expert
// opinion, and print how the three estimators evolve.
#include <cstdio>
#include <vector>

#include "opbayes/opbayes.hpp"

int main() {
    using namespace opbayes;

    // Industry view: mean intensity 0.5 with two thirds of the mass on
    // [0.25, 0.75].
    const GammaParams prior =
        fit_gamma_from_constraint(PriorConstraint{0.5, 0.25, 0.75, 2.0 / 3.0});
    std::printf("prior: Gamma(alpha0=%.4f, beta0=%.4f), mean %.3f\n", prior.shape, prior.scale,
                prior.mean());

    // One in-house expert pegs the intensity at 0.7; the regulator assigns the
    // panel a coefficient of variation of 0.5, i.e. xi = 4.
    const ExpertPanel panel({0.7}, 4.0);

    const std::vector<int> counts = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 2, 1, 1, 2, 0};

    std::printf("%3s %10s %12s %8s\n", "k", "bayes", "two-source", "mle");
    for (const auto& row : frequency_trajectory(prior, 1.0, counts, panel)) {
        if (row.mle)
            std::printf("%3d %10.4f %12.4f %8.4f\n", row.k, row.bayes, row.two_source, *row.mle);
        else
            std::printf("%3d %10.4f %12.4f %8s\n", row.k, row.bayes, row.two_source, "-");
    }

    FrequencyCellState state(prior, 1.0, counts, panel);
    const GigParams& post = state.posterior();
    std::printf("\nposterior GIG(nu=%.4f, omega=%.4f, phi=%.4f)\n", post.nu, post.omega, post.phi);
    std::printf("posterior mean %.6f, mode %.6f, mode approximation %.6f\n",
                freq_bayes_estimate(state), freq_mode_estimate(state),
                freq_mode_estimate_approx(state));

    // A new year with three losses arrives.
    state = state.with_year(3);
    std::printf("after one more year with 3 losses: mean %.6f\n", freq_bayes_estimate(state));
    return 0;
}
