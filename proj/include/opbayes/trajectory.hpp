// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <optional>
#include <span>
#include <vector>

#include "opbayes/frequency.hpp"
#include "opbayes/severity_lognormal.hpp"
#include "opbayes/severity_pareto.hpp"

namespace opbayes {

/// One row of an estimator trajectory: after k observations, the Bayes
/// estimate with experts, the two-source estimate without experts, and the
/// MLE (absent at k = 0 or when degenerate).
struct TrajectoryRow {
    int k = 0;
    double bayes = 0.0;
    double two_source = 0.0;
    std::optional<double> mle;
};

inline std::vector<TrajectoryRow> frequency_trajectory(const GammaParams& prior, double volume,
                                                       std::span<const int> counts,
                                                       const ExpertPanel& panel) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(counts.size() + 1);
    for (std::size_t k = 0; k <= counts.size(); ++k) {
        const auto head = counts.subspan(0, k);
        TrajectoryRow row;
        row.k = static_cast<int>(k);
        row.bayes = gig_mean(freq_posterior(prior, volume, head, panel));
        row.two_source = gig_mean(freq_posterior(prior, volume, head, ExpertPanel::none()));
        if (k >= 1) row.mle = freq_mle(head, volume);
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<TrajectoryRow> pareto_trajectory(const GammaParams& prior, double threshold,
                                                    std::span<const double> losses,
                                                    const ExpertPanel& panel) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(losses.size() + 1);
    for (std::size_t k = 0; k <= losses.size(); ++k) {
        const auto head = losses.subspan(0, k);
        TrajectoryRow row;
        row.k = static_cast<int>(k);
        row.bayes = gig_mean(pareto_posterior(prior, threshold, head, panel));
        row.two_source = gig_mean(pareto_posterior(prior, threshold, head, ExpertPanel::none()));
        if (k >= 1) {
            double s = 0.0;
            for (double x : head) s += std::log(x / threshold);
            if (s > 0.0) row.mle = static_cast<double>(k) / s;
        }
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<TrajectoryRow> lognormal_trajectory(const NormalParams& prior, double obs_sigma,
                                                       std::span<const double> losses,
                                                       const ExpertPanel& panel) {
    std::vector<TrajectoryRow> rows;
    rows.reserve(losses.size() + 1);
    std::vector<double> logs;
    logs.reserve(losses.size());
    for (std::size_t k = 0; k <= losses.size(); ++k) {
        TrajectoryRow row;
        row.k = static_cast<int>(k);
        row.bayes = lognormal_posterior(prior, obs_sigma, logs, panel).mean;
        row.two_source = lognormal_posterior(prior, obs_sigma, logs, ExpertPanel::none()).mean;
        if (k >= 1) {
            double s = 0.0;
            for (double lx : logs) s += lx;
            row.mle = s / static_cast<double>(k);
        }
        rows.push_back(row);
        if (k < losses.size()) {
            if (!(losses[k] > 0.0))
                throw std::domain_error("lognormal_trajectory: losses must be positive");
            logs.push_back(std::log(losses[k]));
        }
    }
    return rows;
}

}  // namespace opbayes
