// Apache License, Version 2.0, refer to LICENSE.txt
//
// opbayes: combine internal loss data, industry priors, and expert opinions
// into posterior frequency/severity estimates, and run predictive VaR.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opbayes/opbayes.hpp"

namespace {

using namespace opbayes;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Thrown for bad command-line values; mapped to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double flag_real(const std::string& text, const std::string& flag) {
    try {
        return io::parse_real(text);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

// Strict key=value config access: every key must be consumed.
class Config {
public:
    Config(std::map<std::string, std::string> kv, std::string name)
        : kv_(std::move(kv)), name_(std::move(name)) {}

    static Config load(const std::string& path) {
        return Config(io::read_file(path, [](std::istream& in, const std::string& n) {
                          return io::read_config(in, n);
                      }),
                      path);
    }

    std::optional<std::string> get(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v) throw std::runtime_error(name_ + ": missing required key '" + key + "'");
        return *v;
    }

    double require_real(const std::string& key) {
        const std::string v = require(key);
        try {
            return io::parse_real(v);
        } catch (const std::exception& e) {
            throw std::runtime_error(name_ + ": key '" + key + "': " + e.what());
        }
    }

    void finish() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k))
                throw std::runtime_error(name_ + ": unknown key '" + k + "'");
    }

    const std::string& name() const { return name_; }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
    std::string name_;
};

std::string resolve_near(const std::string& config_path, const std::string& file) {
    const std::filesystem::path p(file);
    if (p.is_absolute()) return file;
    return (std::filesystem::path(config_path).parent_path() / p).string();
}

std::vector<double> load_experts(const std::string& path) {
    return io::read_file(path, [](std::istream& in, const std::string& n) {
        return io::read_experts_csv(in, n);
    });
}

// Panel from config keys `<prefix>experts` / `<prefix>xi`; xi may be a number
// or `from-opinions`. `location_model` picks the stdev-based xi estimator.
ExpertPanel panel_from_config(Config& cfg, const std::string& config_path,
                              const std::string& prefix, bool location_model) {
    const auto experts_file = cfg.get(prefix + "experts");
    if (!experts_file) {
        (void)cfg.get(prefix + "xi");  // tolerated but unused without experts
        return ExpertPanel::none();
    }
    const auto opinions = load_experts(resolve_near(config_path, *experts_file));
    if (opinions.empty()) return ExpertPanel::none();
    const auto xi_spec = cfg.get(prefix + "xi");
    if (!xi_spec)
        throw std::runtime_error(config_path + ": experts file given but no '" + prefix +
                                 "xi' (a number or 'from-opinions')");
    double xi;
    if (*xi_spec == "from-opinions")
        xi = location_model ? xi_from_opinions_stdev(opinions) : xi_from_opinions_moments(opinions);
    else
        xi = io::parse_real(*xi_spec);
    return ExpertPanel(opinions, xi);
}

GammaParams gamma_prior_from(Config& cfg, const std::string& prefix) {
    return GammaParams{cfg.require_real(prefix + "alpha0"), cfg.require_real(prefix + "beta0")};
}

GigParams gig_prior_from(Config& cfg, const std::string& prefix) {
    return GigParams{cfg.require_real(prefix + "nu0"), cfg.require_real(prefix + "omega0"),
                     cfg.require_real(prefix + "phi0")};
}

// ----------------------------------------------------------------- fit-prior

int cmd_fit_prior(const std::string& mean_s, const std::string& interval_s,
                  const std::string& prob_s, const std::string& vco_s,
                  const std::string& industry_file) {
    GammaParams fit{};
    if (!industry_file.empty()) {
        const auto samples = io::read_file(industry_file, [](std::istream& in, const std::string& n) {
            return io::read_samples_csv(in, n);
        });
        fit = fit_gamma_moments(samples);
    } else if (!vco_s.empty()) {
        if (mean_s.empty()) throw UsageError("--vco requires --mean");
        fit = gamma_from_mean_vco(flag_real(mean_s, "--mean"), flag_real(vco_s, "--vco"));
    } else if (!interval_s.empty() || !prob_s.empty()) {
        if (mean_s.empty() || interval_s.empty() || prob_s.empty())
            throw UsageError("constraint fit needs --mean, --interval lo,hi and --prob");
        const auto comma = interval_s.find(',');
        if (comma == std::string::npos) throw UsageError("--interval expects 'low,high'");
        PriorConstraint c;
        c.mean = flag_real(mean_s, "--mean");
        c.interval_low = flag_real(interval_s.substr(0, comma), "--interval");
        c.interval_high = flag_real(interval_s.substr(comma + 1), "--interval");
        c.interval_prob = flag_real(prob_s, "--prob");
        try {
            c.validate();
        } catch (const std::domain_error& e) {
            throw UsageError(e.what());
        }
        fit = fit_gamma_from_constraint(c);
    } else {
        throw UsageError("fit-prior needs --interval/--prob, --vco, or --industry");
    }
    std::cout << "family=gamma alpha0=" << fmt(fit.shape) << " beta0=" << fmt(fit.scale) << "\n";
    return 0;
}

// ---------------------------------------------------------------- trajectory

void print_trajectory(const std::vector<TrajectoryRow>& rows) {
    std::cout << "k,bayes,two_source,mle\n";
    for (const auto& row : rows) {
        std::cout << row.k << ',' << fmt17(row.bayes) << ',' << fmt17(row.two_source) << ',';
        if (row.mle) std::cout << fmt17(*row.mle);
        std::cout << '\n';
    }
}

int cmd_trajectory(const std::string& config_path, const std::string& data_path,
                   const std::string& experts_path, const std::string& xi_flag) {
    Config cfg = Config::load(config_path);
    const std::string model = cfg.require("model");

    // xi comes from the config (key `xi`) or the --xi flag; the flag wins.
    const auto xi_cfg = cfg.get("xi");
    const std::string xi_spec = !xi_flag.empty() ? xi_flag : xi_cfg.value_or("");

    ExpertPanel panel = ExpertPanel::none();
    if (!experts_path.empty()) {
        const auto opinions = load_experts(experts_path);
        if (!opinions.empty()) {
            if (xi_spec.empty())
                throw UsageError(
                    "--experts requires xi (config key 'xi' or --xi; a number or 'from-opinions')");
            double xi;
            if (xi_spec == "from-opinions")
                xi = (model == "severity-lognormal") ? xi_from_opinions_stdev(opinions)
                                                     : xi_from_opinions_moments(opinions);
            else
                xi = flag_real(xi_spec, "--xi");
            panel = ExpertPanel(opinions, xi);
        }
    }

    if (model == "frequency-poisson") {
        const double volume = cfg.require_real("volume");
        const std::string prior_kind = cfg.require("prior");
        const auto counts = io::read_file(data_path, [](std::istream& in, const std::string& n) {
            return io::read_counts_csv(in, n);
        });
        if (prior_kind == "gamma") {
            const GammaParams prior = gamma_prior_from(cfg, "");
            cfg.finish();
            print_trajectory(frequency_trajectory(prior, volume, counts, panel));
        } else if (prior_kind == "gig") {
            // Trajectory columns need the Gamma two-source form; a GIG prior is
            // supported through the library but not as a trajectory, so reject.
            throw std::runtime_error("trajectory: gig priors are not supported for trajectories");
        } else {
            throw std::runtime_error(config_path + ": unknown prior '" + prior_kind + "'");
        }
        return 0;
    }
    if (model == "severity-pareto") {
        const double threshold = cfg.require_real("threshold");
        const std::string prior_kind = cfg.require("prior");
        if (prior_kind != "gamma")
            throw std::runtime_error(config_path + ": pareto trajectories need prior=gamma");
        const GammaParams prior = gamma_prior_from(cfg, "");
        cfg.finish();
        const auto losses = io::read_file(data_path, [](std::istream& in, const std::string& n) {
            return io::read_losses_csv(in, n);
        });
        print_trajectory(pareto_trajectory(prior, threshold, losses, panel));
        return 0;
    }
    if (model == "severity-lognormal") {
        const double obs_sigma = cfg.require_real("obs_sigma");
        const std::string prior_kind = cfg.require("prior");
        if (prior_kind != "normal")
            throw std::runtime_error(config_path + ": lognormal trajectories need prior=normal");
        const NormalParams prior{cfg.require_real("mu0"), cfg.require_real("sigma0")};
        cfg.finish();
        const auto losses = io::read_file(data_path, [](std::istream& in, const std::string& n) {
            return io::read_losses_csv(in, n);
        });
        print_trajectory(lognormal_trajectory(prior, obs_sigma, losses, panel));
        return 0;
    }
    throw std::runtime_error(config_path + ": unknown model '" + model + "'");
}

// -------------------------------------------------------------- simulate-var

CellModel cell_from_config(const std::string& path) {
    Config cfg = Config::load(path);

    const std::string freq_prior_kind = cfg.require("freq.prior");
    const double volume = cfg.require_real("freq.volume");
    const auto counts =
        io::read_file(resolve_near(path, cfg.require("freq.counts")),
                      [](std::istream& in, const std::string& n) { return io::read_counts_csv(in, n); });
    const ExpertPanel freq_panel = panel_from_config(cfg, path, "freq.", false);
    std::optional<FrequencyCellState> freq;
    if (freq_prior_kind == "gamma")
        freq.emplace(gamma_prior_from(cfg, "freq."), volume, counts, freq_panel);
    else if (freq_prior_kind == "gig")
        freq.emplace(gig_prior_from(cfg, "freq."), volume, counts, freq_panel);
    else
        throw std::runtime_error(path + ": unknown freq.prior '" + freq_prior_kind + "'");

    const std::string sev_model = cfg.require("sev.model");
    const auto losses =
        io::read_file(resolve_near(path, cfg.require("sev.losses")),
                      [](std::istream& in, const std::string& n) { return io::read_losses_csv(in, n); });
    if (sev_model == "lognormal") {
        if (cfg.require("sev.prior") != "normal")
            throw std::runtime_error(path + ": a lognormal cell needs sev.prior=normal");
        const NormalParams prior{cfg.require_real("sev.mu0"), cfg.require_real("sev.sigma0")};
        const double obs_sigma = cfg.require_real("sev.obs_sigma");
        const ExpertPanel panel = panel_from_config(cfg, path, "sev.", true);
        cfg.finish();
        return CellModel{std::move(*freq), LognormalCellState(prior, obs_sigma, losses, panel)};
    }
    if (sev_model == "pareto") {
        const double threshold = cfg.require_real("sev.threshold");
        const std::string prior_kind = cfg.require("sev.prior");
        const ExpertPanel panel = panel_from_config(cfg, path, "sev.", false);
        std::optional<ParetoCellState> sev;
        if (prior_kind == "gamma")
            sev.emplace(gamma_prior_from(cfg, "sev."), threshold, losses, panel);
        else if (prior_kind == "gig")
            sev.emplace(gig_prior_from(cfg, "sev."), threshold, losses, panel);
        else
            throw std::runtime_error(path + ": unknown sev.prior '" + prior_kind + "'");
        cfg.finish();
        return CellModel{std::move(*freq), std::move(*sev)};
    }
    throw std::runtime_error(path + ": unknown sev.model '" + sev_model + "'");
}

int cmd_simulate_var(const std::vector<std::string>& cell_paths, const std::string& level_s,
                     std::size_t sims, std::uint64_t seed, unsigned workers, bool point_mass) {
    const double level = flag_real(level_s, "--level");
    if (!(level > 0.0) || !(level < 1.0)) throw UsageError("--level must lie strictly in (0, 1)");
    if (sims < 1) throw UsageError("--sims must be at least 1");

    SimulateOptions opt;
    opt.parameter_uncertainty = !point_mass;
    opt.workers = workers;

    // Compute everything first; nothing is printed unless the whole run
    // succeeds (diagnostics go to stderr only).
    std::vector<VarEstimate> per_cell;
    for (std::size_t i = 0; i < cell_paths.size(); ++i) {
        const CellModel cell = cell_from_config(cell_paths[i]);
        // Every cell runs from the same master seed: cells are independent
        // runs (VaR is per cell), and identical cell configs then give
        // identical VaR, so the SUM of n copies is exactly n times one copy.
        const auto paths = simulate_annual_losses(cell, sims, seed, opt);
        per_cell.push_back(empirical_var(paths, level));
    }
    std::cout << "cell,level,var\n";
    for (std::size_t i = 0; i < cell_paths.size(); ++i)
        std::cout << cell_paths[i] << ',' << fmt(level) << ',' << fmt17(per_cell[i].value) << '\n';
    std::cout << "SUM," << fmt(level) << ',' << fmt17(aggregate_var_sum(per_cell)) << '\n';
    std::cout << "# sum of per-cell VaRs; equivalent to assuming perfect dependence between "
                 "risk cells\n";
    return 0;
}

// ---------------------------------------------------------------- sample-gig

int cmd_sample_gig(const std::string& nu_s, const std::string& omega_s, const std::string& phi_s,
                   std::size_t n, std::uint64_t seed) {
    const GigParams params{flag_real(nu_s, "--nu"), flag_real(omega_s, "--omega"),
                           flag_real(phi_s, "--phi")};
    try {
        if (params.branch() != GigBranch::proper)
            throw UsageError("sample-gig requires the proper branch: omega > 0 and phi > 0");
    } catch (const std::domain_error& e) {
        throw UsageError(e.what());
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) std::cout << fmt17(gig_sample(params, rng)) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian combination of internal loss data, industry priors and expert "
                 "opinions for operational risk"};
    app.require_subcommand(1);

    // fit-prior
    auto* fit = app.add_subcommand("fit-prior", "Fit a Gamma prior from constraints or samples");
    std::string mean_s, interval_s, prob_s, vco_s, industry_file;
    fit->add_option("--mean", mean_s, "prior mean");
    fit->add_option("--interval", interval_s, "low,high of the pinned interval");
    fit->add_option("--prob", prob_s, "probability mass on the interval (accepts a/b)");
    fit->add_option("--vco", vco_s, "coefficient of variation");
    fit->add_option("--industry", industry_file, "CSV 'index,value' of industry samples");

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "Emit estimator trajectories as CSV");
    std::string t_config, t_data, t_experts, t_xi;
    traj->add_option("--config", t_config, "model config (key=value)")->required();
    traj->add_option("--data", t_data, "counts or losses CSV")->required();
    traj->add_option("--experts", t_experts, "experts CSV");
    traj->add_option("--xi", t_xi, "expert credibility: a number or 'from-opinions'");

    // simulate-var
    auto* sim = app.add_subcommand("simulate-var", "Predictive VaR per cell plus the sum");
    std::vector<std::string> cells;
    std::string level_s{"0.999"};
    std::size_t sims = 100000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    bool point_mass = false;
    sim->add_option("--cell", cells, "cell config file (repeatable)")->required();
    sim->add_option("--level", level_s, "VaR level in (0,1)");
    sim->add_option("--sims", sims, "number of simulated years per cell");
    sim->add_option("--seed", seed, "master seed");
    sim->add_option("--workers", workers, "worker threads (result is identical for any value)");
    sim->add_flag("--point-mass", point_mass,
                  "pin parameters at posterior means instead of redrawing per path");

    // sample-gig
    auto* sg = app.add_subcommand("sample-gig", "Draw from a GIG(nu, omega, phi)");
    std::string nu_s, omega_s, phi_s;
    std::size_t n = 1;
    std::uint64_t sg_seed = 1;
    sg->add_option("--nu", nu_s)->required();
    sg->add_option("--omega", omega_s)->required();
    sg->add_option("--phi", phi_s)->required();
    sg->add_option("--n", n, "number of draws");
    sg->add_option("--seed", sg_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (fit->parsed()) return cmd_fit_prior(mean_s, interval_s, prob_s, vco_s, industry_file);
        if (traj->parsed()) return cmd_trajectory(t_config, t_data, t_experts, t_xi);
        if (sim->parsed()) return cmd_simulate_var(cells, level_s, sims, seed, workers, point_mass);
        if (sg->parsed()) return cmd_sample_gig(nu_s, omega_s, phi_s, n, sg_seed);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
