// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "opbayes/expert.hpp"
#include "opbayes/gig.hpp"

namespace opbayes {

// ---------------------------------------------------------------------------
// Poisson-Gamma-Gamma frequency engine.
//
// Prior Lambda ~ Gamma(alpha0, beta0), annual counts N_k | Lambda ~
// Pois(V Lambda), expert opinions theta^(m) | Lambda ~ Gamma(xi, Lambda/xi).
// Posterior is GIG(nu, omega, phi) with
//   nu    = alpha0 - 1 - M xi + sum N_k,
//   omega = V K + 1/beta0,
//   phi   = xi M mean(theta).
// All count sums are folded left to right so that the batch posterior equals
// the sequence of one-year updates bit for bit.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_counts(std::span<const int> counts) {
    for (int n : counts)
        if (n < 0) throw std::domain_error("frequency: counts must be non-negative");
}

inline void check_volume(double volume) {
    if (!(volume > 0.0)) throw std::domain_error("frequency: volume must be positive");
}

// Posterior before any year of data: prior adjusted by the expert block.
inline GigParams freq_base(const GigParams& prior, const ExpertPanel& panel) {
    prior.branch();
    double nu = prior.nu;
    double phi = prior.phi;
    if (!panel.empty()) {
        panel.require_positive_opinions("frequency");
        const double m = static_cast<double>(panel.size());
        nu -= m * panel.xi();
        phi += panel.xi() * m * panel.opinion_mean();
    }
    return GigParams{nu, prior.omega, phi};
}

}  // namespace detail

/// One-year update of posterior GIG parameters (Update Process: nu gains the
/// new count, omega gains the volume, phi never moves).
inline GigParams freq_update_year_params(const GigParams& posterior, int new_count, double volume) {
    if (new_count < 0) throw std::domain_error("frequency: counts must be non-negative");
    detail::check_volume(volume);
    return GigParams{posterior.nu + static_cast<double>(new_count), posterior.omega + volume,
                     posterior.phi};
}

/// Posterior for a GIG prior (Poisson-Gamma-GIG model).
inline GigParams freq_posterior_gig_prior(const GigParams& prior, double volume,
                                          std::span<const int> counts, const ExpertPanel& panel) {
    detail::check_volume(volume);
    detail::check_counts(counts);
    GigParams g = detail::freq_base(prior, panel);
    for (int n : counts) g = freq_update_year_params(g, n, volume);
    return g;
}

/// Posterior for the Gamma prior of the base model; the Gamma prior embeds as
/// GIG(alpha0 - 1, 1/beta0, 0).
inline GigParams freq_posterior(const GammaParams& prior, double volume,
                                std::span<const int> counts, const ExpertPanel& panel) {
    return freq_posterior_gig_prior(prior.as_gig(), volume, counts, panel);
}

/// Maximum likelihood estimate of Lambda: mean count divided by volume.
inline double freq_mle(std::span<const int> counts, double volume) {
    detail::check_volume(volume);
    if (counts.empty()) throw std::domain_error("freq_mle: undefined for an empty history");
    detail::check_counts(counts);
    double s = 0.0;
    for (int n : counts) s += n;
    return s / static_cast<double>(counts.size()) / volume;
}

/// Two-source credibility estimate (no experts): the classical Poisson-Gamma
/// blend w * prior mean + (1 - w) * MLE with w = 1 / (V K beta0 + 1).
inline double freq_two_source_estimate(const GammaParams& prior, double volume,
                                       std::span<const int> counts) {
    prior.validate();
    detail::check_volume(volume);
    if (counts.empty()) return prior.mean();
    const double k = static_cast<double>(counts.size());
    const double w = 1.0 / (volume * k * prior.scale + 1.0);
    return w * prior.mean() + (1.0 - w) * freq_mle(counts, volume);
}

/// Immutable bundle of prior, exposure, count history, panel and the posterior
/// they imply. Year updates return a new state.
class FrequencyCellState {
public:
    FrequencyCellState(const GammaParams& prior, double volume, std::vector<int> counts,
                       ExpertPanel panel)
        : FrequencyCellState(prior.as_gig(), volume, std::move(counts), std::move(panel)) {}

    FrequencyCellState(const GigParams& prior, double volume, std::vector<int> counts,
                       ExpertPanel panel)
        : prior_(prior),
          volume_(volume),
          counts_(std::move(counts)),
          panel_(std::move(panel)),
          posterior_(freq_posterior_gig_prior(prior_, volume_, counts_, panel_)) {}

    const GigParams& prior() const { return prior_; }
    double volume() const { return volume_; }
    const std::vector<int>& counts() const { return counts_; }
    const ExpertPanel& panel() const { return panel_; }
    const GigParams& posterior() const { return posterior_; }

    /// Append one year of observations; only (nu, omega) move.
    FrequencyCellState with_year(int new_count) const {
        FrequencyCellState next(*this);
        next.counts_.push_back(new_count);
        next.posterior_ = freq_update_year_params(posterior_, new_count, volume_);
        return next;
    }

private:
    GigParams prior_;
    double volume_;
    std::vector<int> counts_;
    ExpertPanel panel_;
    GigParams posterior_;
};

/// Posterior mean E[Lambda | data, opinions], the Bayes estimator.
inline double freq_bayes_estimate(const FrequencyCellState& state) {
    return gig_mean(state.posterior());
}

/// Exact posterior mode.
inline double freq_mode_estimate(const FrequencyCellState& state) {
    return gig_mode(state.posterior());
}

/// Bessel-free mode approximation nu/(2 omega) 1{nu>=0} + phi/|nu|.
inline double freq_mode_estimate_approx(const FrequencyCellState& state) {
    return gig_mode_approx(state.posterior());
}

}  // namespace opbayes
