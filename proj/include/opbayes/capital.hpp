// Apache License, Version 2.0, refer to LICENSE.txt
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "opbayes/frequency.hpp"
#include "opbayes/gig.hpp"
#include "opbayes/random.hpp"
#include "opbayes/severity_lognormal.hpp"
#include "opbayes/severity_pareto.hpp"

namespace opbayes {

// ---------------------------------------------------------------------------
// Predictive annual-loss Monte Carlo with parameter uncertainty, per-cell VaR
// and the sum-of-VaRs aggregation.
// ---------------------------------------------------------------------------

/// Exact Poisson sampler: sequential inversion below mean 30, Hormann's
/// transformed rejection (PTRS) above. No normal approximation anywhere.
template <UniformStream S>
inline std::int64_t sample_poisson(double mean, S& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::domain_error("sample_poisson: mean must be non-negative and finite");
    if (mean == 0.0) return 0;
    if (mean < 30.0) {
        const double l = std::exp(-mean);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= rng.u01();
        } while (p > l);
        return k - 1;
    }
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);
    for (;;) {
        double u = rng.u01() - 0.5;
        double v = rng.u01();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            kf * log_mean - mean - std::lgamma(kf + 1.0))
            return static_cast<std::int64_t>(kf);
    }
}

template <UniformStream S>
inline double sample_lognormal(double mu, double sigma, S& rng) {
    if (!(sigma > 0.0)) throw std::domain_error("sample_lognormal: require sigma > 0");
    return std::exp(mu + sigma * standard_normal(rng));
}

/// Pareto inversion on the survival scale: X = L u^{-1/gamma}, so u = 1 maps
/// to the threshold itself.
inline double pareto_inverse_survival(double gamma, double threshold, double u) {
    if (!(gamma > 0.0) || !(threshold > 0.0))
        throw std::domain_error("pareto_inverse_survival: require gamma > 0 and threshold > 0");
    if (!(u > 0.0) || u > 1.0)
        throw std::domain_error("pareto_inverse_survival: require u in (0, 1]");
    return threshold * std::pow(u, -1.0 / gamma);
}

template <UniformStream S>
inline double sample_pareto(double gamma, double threshold, S& rng) {
    return pareto_inverse_survival(gamma, threshold, rng.u01());
}

/// Draw from any valid GIG triple; the degenerate branches use their exact
/// closed-form samplers rather than the ratio-of-uniforms loop.
template <UniformStream S>
inline double sample_gig_any(const GigParams& params, S& rng) {
    switch (params.branch()) {
        case GigBranch::proper:
            return gig_sample(params, rng);
        case GigBranch::gamma:
            return sample_gamma(params.nu + 1.0, 1.0 / params.omega, rng);
        case GigBranch::inverse_gamma:
            return 1.0 / sample_gamma(-params.nu - 1.0, 1.0 / params.phi, rng);
    }
    throw std::logic_error("sample_gig_any: unreachable");
}

/// One risk cell: a frequency posterior plus one severity posterior.
struct CellModel {
    FrequencyCellState frequency;
    std::variant<LognormalCellState, ParetoCellState> severity;
};

/// One simulated year: the parameter draws, the event count, and the total.
struct PredictiveSample {
    double lambda_draw = 0.0;
    double severity_param_draw = 0.0;
    std::int64_t count = 0;
    double total = 0.0;
};

struct SimulateOptions {
    /// Redraw (Lambda, severity parameter) from their posteriors every path.
    /// When false, both are pinned at their posterior means.
    bool parameter_uncertainty = true;
    /// Worker threads; the result is identical for any value by construction.
    unsigned workers = 1;
    /// Paths per independently seeded block.
    std::size_t block_size = 4096;
};

namespace detail {

inline PredictiveSample simulate_one(const CellModel& cell, bool redraw, Rng& rng) {
    PredictiveSample out;
    out.lambda_draw = redraw ? sample_gig_any(cell.frequency.posterior(), rng)
                             : gig_mean(cell.frequency.posterior());
    out.count = sample_poisson(cell.frequency.volume() * out.lambda_draw, rng);
    if (const auto* ln = std::get_if<LognormalCellState>(&cell.severity)) {
        const NormalParams& post = ln->posterior();
        out.severity_param_draw =
            redraw ? post.mean + post.stdev * standard_normal(rng) : post.mean;
        for (std::int64_t i = 0; i < out.count; ++i)
            out.total += sample_lognormal(out.severity_param_draw, ln->obs_sigma(), rng);
    } else {
        const auto& pa = std::get<ParetoCellState>(cell.severity);
        out.severity_param_draw =
            redraw ? sample_gig_any(pa.posterior(), rng) : gig_mean(pa.posterior());
        for (std::int64_t i = 0; i < out.count; ++i)
            out.total += sample_pareto(out.severity_param_draw, pa.threshold(), rng);
    }
    return out;
}

}  // namespace detail

/// Simulate n_sims annual paths. Paths are partitioned into fixed-size blocks,
/// each driven by a stream derived from (master_seed, block index), so the
/// output is bit-identical for any worker count.
inline std::vector<PredictiveSample> simulate_annual_losses(const CellModel& cell,
                                                            std::size_t n_sims,
                                                            std::uint64_t master_seed,
                                                            const SimulateOptions& opt = {}) {
    if (n_sims < 1) throw std::domain_error("simulate_annual_losses: require n_sims >= 1");
    if (opt.block_size < 1) throw std::domain_error("simulate_annual_losses: block_size >= 1");
    std::vector<PredictiveSample> out(n_sims);
    const std::size_t n_blocks = (n_sims + opt.block_size - 1) / opt.block_size;
    auto run_block = [&](std::size_t block) {
        Rng rng = Rng::derive(master_seed, block);
        const std::size_t lo = block * opt.block_size;
        const std::size_t hi = std::min(lo + opt.block_size, n_sims);
        for (std::size_t i = lo; i < hi; ++i)
            out[i] = detail::simulate_one(cell, opt.parameter_uncertainty, rng);
    };
    const unsigned workers = std::max(1u, opt.workers);
    if (workers == 1 || n_blocks == 1) {
        for (std::size_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < n_blocks; b += workers) run_block(b);
            });
        for (auto& t : pool) t.join();
    }
    return out;
}

/// Empirical VaR at a level in (0, 1).
struct VarEstimate {
    double level = 0.0;
    double value = 0.0;
    std::size_t n_sims = 0;
    std::string standard_error_note;
};

/// Order-statistic quantile: the ceil(level * n)-th smallest total (1-based).
inline VarEstimate empirical_var(std::span<const PredictiveSample> samples, double level) {
    if (samples.empty()) throw std::domain_error("empirical_var: no samples");
    if (!(level > 0.0) || !(level < 1.0))
        throw std::domain_error("empirical_var: level must be in (0, 1)");
    std::vector<double> totals;
    totals.reserve(samples.size());
    for (const auto& s : samples) totals.push_back(s.total);
    const auto n = totals.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    std::nth_element(totals.begin(), totals.begin() + (rank - 1), totals.end());
    VarEstimate est;
    est.level = level;
    est.value = totals[rank - 1];
    est.n_sims = n;
    est.standard_error_note =
        "order-statistic quantile (rank ceil(level*n)); resampling error shrinks as n^-1/2";
    return est;
}

/// Sum of per-cell VaRs at a common level; equivalent to assuming perfect
/// dependence between cells.
inline double aggregate_var_sum(std::span<const VarEstimate> cells) {
    if (cells.empty()) throw std::domain_error("aggregate_var_sum: no cells");
    const double level = cells.front().level;
    double total = 0.0;
    for (const auto& c : cells) {
        if (c.level != level)
            throw std::domain_error("aggregate_var_sum: cells quote VaR at different levels");
        total += c.value;
    }
    return total;
}

}  // namespace opbayes
