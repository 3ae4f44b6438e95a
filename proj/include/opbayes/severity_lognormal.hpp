// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "opbayes/expert.hpp"

namespace opbayes {

// ---------------------------------------------------------------------------
// Lognormal-normal-normal severity engine.
//
// Prior Delta ~ N(mu0, sigma0), losses X_k | Delta ~ LN(Delta, sigma_i) with
// sigma_i known, opinions theta^(m) | Delta ~ N(Delta, xi). The posterior for
// Delta is exactly normal; no Bessel machinery is involved.
// ---------------------------------------------------------------------------

struct NormalParams {
    double mean = 0.0;
    double stdev = 1.0;

    void validate() const {
        if (!std::isfinite(mean) || !(stdev > 0.0) || !std::isfinite(stdev))
            throw std::domain_error("NormalParams: require finite mean and stdev > 0");
    }
};

/// Posterior N(mu_hat, sigma_hat):
///   sigma_hat^2 = (1/sigma0^2 + K/sigma_i^2 + M/xi^2)^-1
///   mu_hat      = sigma_hat^2 (mu0/sigma0^2 + sum(ln X)/sigma_i^2 + sum(theta)/xi^2)
inline NormalParams lognormal_posterior(const NormalParams& prior, double obs_sigma,
                                        std::span<const double> log_losses,
                                        const ExpertPanel& panel) {
    prior.validate();
    if (!(obs_sigma > 0.0)) throw std::domain_error("lognormal_posterior: require obs_sigma > 0");
    const double k = static_cast<double>(log_losses.size());
    const double m = static_cast<double>(panel.size());
    double precision = 1.0 / (prior.stdev * prior.stdev) + k / (obs_sigma * obs_sigma);
    if (!panel.empty()) precision += m / (panel.xi() * panel.xi());
    const double post_var = 1.0 / precision;

    double weighted = prior.mean / (prior.stdev * prior.stdev);
    double sum_logs = 0.0;
    for (double lx : log_losses) sum_logs += lx;
    weighted += sum_logs / (obs_sigma * obs_sigma);
    if (!panel.empty()) {
        double sum_op = 0.0;
        for (double t : panel.opinions()) sum_op += t;
        weighted += sum_op / (panel.xi() * panel.xi());
    }
    return NormalParams{post_var * weighted, std::sqrt(post_var)};
}

/// Credibility weights (w1, w2, w3) on prior mean, data log-mean, and opinion
/// mean; they sum to one.
inline std::array<double, 3> credibility_weights(const NormalParams& prior, double obs_sigma,
                                                 std::size_t k, const ExpertPanel& panel) {
    prior.validate();
    if (!(obs_sigma > 0.0)) throw std::domain_error("credibility_weights: require obs_sigma > 0");
    const double kk = static_cast<double>(k);
    const double m = static_cast<double>(panel.size());
    double precision = 1.0 / (prior.stdev * prior.stdev) + kk / (obs_sigma * obs_sigma);
    if (!panel.empty()) precision += m / (panel.xi() * panel.xi());
    const double post_var = 1.0 / precision;
    const double w1 = post_var / (prior.stdev * prior.stdev);
    const double w2 = post_var * kk / (obs_sigma * obs_sigma);
    const double w3 = panel.empty() ? 0.0 : post_var * m / (panel.xi() * panel.xi());
    return {w1, w2, w3};
}

/// xi estimated as the sample standard deviation (divisor M - 1) of the
/// location opinions.
inline double xi_from_opinions_stdev(std::span<const double> opinions) {
    if (opinions.size() < 2)
        throw std::domain_error("xi_from_opinions_stdev: need at least two opinions");
    double mean = 0.0;
    for (double v : opinions) mean += v;
    mean /= static_cast<double>(opinions.size());
    double ss = 0.0;
    for (double v : opinions) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(opinions.size() - 1));
    if (!(sd > 0.0))
        throw std::domain_error("xi_from_opinions_stdev: opinions are constant (degenerate panel)");
    return sd;
}

/// Prior, known log-severity stdev, logged losses, panel, and the posterior
/// they imply. Losses are ingested as raw severities and logged here.
class LognormalCellState {
public:
    LognormalCellState(const NormalParams& prior, double obs_sigma, std::span<const double> losses,
                       ExpertPanel panel)
        : prior_(prior), obs_sigma_(obs_sigma), panel_(std::move(panel)) {
        log_losses_.reserve(losses.size());
        for (std::size_t i = 0; i < losses.size(); ++i) log_losses_.push_back(checked_log(losses[i], i));
        posterior_ = lognormal_posterior(prior_, obs_sigma_, log_losses_, panel_);
    }

    const NormalParams& prior() const { return prior_; }
    double obs_sigma() const { return obs_sigma_; }
    const std::vector<double>& log_losses() const { return log_losses_; }
    const ExpertPanel& panel() const { return panel_; }
    const NormalParams& posterior() const { return posterior_; }

    LognormalCellState with_loss(double raw_loss) const {
        LognormalCellState next(*this);
        next.log_losses_.push_back(checked_log(raw_loss, log_losses_.size()));
        next.posterior_ = lognormal_posterior(prior_, obs_sigma_, next.log_losses_, panel_);
        return next;
    }

    std::array<double, 3> weights() const {
        return credibility_weights(prior_, obs_sigma_, log_losses_.size(), panel_);
    }

private:
    static double checked_log(double x, std::size_t row) {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error("lognormal severity: loss at row " + std::to_string(row) +
                                    " is not a positive number");
        return std::log(x);
    }

    NormalParams prior_;
    double obs_sigma_;
    std::vector<double> log_losses_;
    ExpertPanel panel_;
    NormalParams posterior_;
};

}  // namespace opbayes
