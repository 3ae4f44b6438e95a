// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opbayes/expert.hpp"
#include "opbayes/gig.hpp"

namespace opbayes {

// ---------------------------------------------------------------------------
// Pareto tail-index engine.
//
// Prior Gamma_i ~ Gamma(alpha0, beta0) (or a GIG), losses X_k | Gamma_i ~
// Pareto(Gamma_i, L) above the known threshold L, expert opinions about the
// tail index with Gamma(xi, Gamma_i/xi) likelihood. Posterior is
// GIG(nu, omega, phi) with
//   nu    = alpha0 - 1 - M xi + K,
//   omega = 1/beta0 + sum ln(X_k / L),
//   phi   = xi M mean(theta).
// Per-loss updates fold left to right, matching the batch posterior exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_threshold(double threshold) {
    if (!(threshold > 0.0) || !std::isfinite(threshold))
        throw std::domain_error("pareto: threshold must be positive and finite");
}

inline void check_loss(double loss, double threshold, std::size_t row) {
    if (!std::isfinite(loss) || loss < threshold)
        throw std::domain_error("pareto: loss at row " + std::to_string(row) +
                                " is below the threshold (or not a number)");
}

inline GigParams pareto_base(const GigParams& prior, const ExpertPanel& panel) {
    prior.branch();
    double nu = prior.nu;
    double phi = prior.phi;
    if (!panel.empty()) {
        panel.require_positive_opinions("pareto");
        const double m = static_cast<double>(panel.size());
        nu -= m * panel.xi();
        phi += panel.xi() * m * panel.opinion_mean();
    }
    return GigParams{nu, prior.omega, phi};
}

}  // namespace detail

/// One-loss update: nu gains one, omega gains ln(X/L), phi never moves.
inline GigParams pareto_update_loss_params(const GigParams& posterior, double new_loss,
                                           double threshold) {
    detail::check_threshold(threshold);
    detail::check_loss(new_loss, threshold, 0);
    return GigParams{posterior.nu + 1.0, posterior.omega + std::log(new_loss / threshold),
                     posterior.phi};
}

inline GigParams pareto_posterior_gig_prior(const GigParams& prior, double threshold,
                                            std::span<const double> losses,
                                            const ExpertPanel& panel) {
    detail::check_threshold(threshold);
    for (std::size_t i = 0; i < losses.size(); ++i) detail::check_loss(losses[i], threshold, i);
    GigParams g = detail::pareto_base(prior, panel);
    for (double x : losses) g = pareto_update_loss_params(g, x, threshold);
    return g;
}

inline GigParams pareto_posterior(const GammaParams& prior, double threshold,
                                  std::span<const double> losses, const ExpertPanel& panel) {
    return pareto_posterior_gig_prior(prior.as_gig(), threshold, losses, panel);
}

/// MLE of the tail index: K / sum ln(X_k / L).
inline double pareto_mle(std::span<const double> losses, double threshold) {
    detail::check_threshold(threshold);
    if (losses.empty()) throw std::domain_error("pareto_mle: undefined for an empty history");
    double s = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        detail::check_loss(losses[i], threshold, i);
        s += std::log(losses[i] / threshold);
    }
    if (!(s > 0.0))
        throw std::domain_error("pareto_mle: all losses at the threshold (degenerate sample)");
    return static_cast<double>(losses.size()) / s;
}

/// Immutable bundle of prior, threshold, losses, panel, and the implied
/// posterior. Loss updates return a new state.
class ParetoCellState {
public:
    ParetoCellState(const GammaParams& prior, double threshold, std::vector<double> losses,
                    ExpertPanel panel)
        : ParetoCellState(prior.as_gig(), threshold, std::move(losses), std::move(panel)) {}

    ParetoCellState(const GigParams& prior, double threshold, std::vector<double> losses,
                    ExpertPanel panel)
        : prior_(prior),
          threshold_(threshold),
          losses_(std::move(losses)),
          panel_(std::move(panel)),
          posterior_(pareto_posterior_gig_prior(prior_, threshold_, losses_, panel_)) {}

    const GigParams& prior() const { return prior_; }
    double threshold() const { return threshold_; }
    const std::vector<double>& losses() const { return losses_; }
    const ExpertPanel& panel() const { return panel_; }
    const GigParams& posterior() const { return posterior_; }

    ParetoCellState with_loss(double new_loss) const {
        ParetoCellState next(*this);
        detail::check_loss(new_loss, threshold_, losses_.size());
        next.losses_.push_back(new_loss);
        next.posterior_ = pareto_update_loss_params(posterior_, new_loss, threshold_);
        return next;
    }

private:
    GigParams prior_;
    double threshold_;
    std::vector<double> losses_;
    ExpertPanel panel_;
    GigParams posterior_;
};

/// Posterior mean E[Gamma | losses, opinions] = sqrt(phi/omega)
/// R_{nu+1}(2 sqrt(omega phi)) on the proper branch.
inline double pareto_bayes_estimate(const ParetoCellState& state) {
    return gig_mean(state.posterior());
}

}  // namespace opbayes
