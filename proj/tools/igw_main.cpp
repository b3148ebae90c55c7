// Command-line front end: simulation, estimation, Monte Carlo reproduction,
// limit-law sampling and unit-root testing over file-based I/O.
//
// Exit codes: 0 success, 1 domain error, 2 usage error (bad flags, missing
// or malformed files, invalid configuration).

#include "igw/errors.hpp"
#include "igw/io.hpp"
#include "igw/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr const char* kSeedEnvVar = "IGW_MASTER_SEED";

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw igw::ConfigError("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

igw::ModelSpec load_spec(const std::string& path) {
    try {
        return igw::model_spec_from_json(read_file(path));
    } catch (const igw::ConfigError& e) {
        throw igw::ConfigError("spec file " + path + ": " + e.what());
    }
}

igw::CountPath load_path(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw igw::ConfigError("cannot open input file: " + path);
    try {
        return igw::read_count_path_csv(in);
    } catch (const igw::ConfigError& e) {
        throw igw::ConfigError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw igw::ConfigError("cannot open output file: " + path);
    out << contents;
    if (!out) throw igw::ConfigError("failed while writing: " + path);
}

void emit(const std::optional<std::string>& out_path, const std::string& contents) {
    if (out_path) {
        write_file(*out_path, contents);
    } else {
        std::cout << contents;
    }
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

/// Flattens a resolved-configuration object into "# key=value" CSV comments.
std::vector<std::string> config_comments(const json& config) {
    std::vector<std::string> lines;
    for (const auto& [key, value] : config.items()) {
        lines.push_back(key + "=" +
                        (value.is_string() ? value.get<std::string>() : value.dump()));
    }
    return lines;
}

std::string csv_with_comments(const json& config,
                              const std::function<void(std::ostream&)>& body) {
    std::ostringstream os;
    for (const auto& line : config_comments(config)) os << "# " << line << '\n';
    body(os);
    return os.str();
}

igw::WeightScheme scheme_from_name(const std::string& name) {
    if (name == "ols") return igw::WeightScheme::ols();
    if (name == "wei") return igw::WeightScheme::wei_winnicki();
    if (name == "recip-t") return igw::WeightScheme::reciprocal_t();
    throw igw::ConfigError("unknown scheme '" + name +
                           "' (expected ols|wei|recip-t)");
}

// ---------------------------------------------------------------------------
// Subcommand options
// ---------------------------------------------------------------------------

struct SimulateOpts {
    std::string spec_file;
    std::size_t n = 100;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

struct EstimateOpts {
    std::string path_file;
    std::string scheme = "recip-t";
    bool with_sigma2 = false;
    bool with_tau = false;
    bool adaptive = false;
    std::optional<std::string> out;
};

struct McOpts {
    std::string spec_file;
    std::size_t n = 100;
    std::size_t reps = 5000;
    std::vector<std::string> schemes{"ols", "recip-t"};
    std::uint64_t seed = 0;
    std::size_t bins = 0;
    std::optional<std::string> out;
    std::optional<std::string> hist;
};

struct Table1Opts {
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

struct LimitDistOpts {
    std::string which = "wls-slope";
    double mu0 = 1.0;
    double sigma0 = 1.0;
    std::size_t grid = 1000;
    std::size_t draws = 10000;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
    std::optional<std::string> quantiles_out;
};

struct CltOpts {
    std::string spec_file;
    std::size_t n = 100000;
    std::size_t reps = 1000;
    std::uint64_t seed = 0;
    std::optional<std::string> out;
};

struct UnitRootOpts {
    std::string path_file;
    double level = 0.05;
    std::string estimator = "wls";
    std::size_t draws = 10000;
    std::size_t grid = 1000;
    std::uint64_t seed = 0;
    std::optional<double> kpss_pvalue;
    std::optional<std::string> out;
};

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int run_simulate(const SimulateOpts& o) {
    const igw::ModelSpec spec = load_spec(o.spec_file);
    print_warnings(spec.warnings());
    const igw::CountPath path =
        igw::simulate_path(spec, o.n, igw::SeedRecord{o.seed, 0});

    const json config{{"subcommand", "simulate"}, {"spec_file", o.spec_file},
                      {"n", o.n},                 {"master_seed", o.seed},
                      {"stream", 0},              {"schema_version", 1}};
    emit(o.out, csv_with_comments(config, [&](std::ostream& os) {
             igw::write_count_path_csv(os, path);
         }));
    return 0;
}

int run_estimate(const EstimateOpts& o) {
    const igw::CountPath path = load_path(o.path_file);

    json config{{"subcommand", "estimate"},
                {"path_file", o.path_file},
                {"scheme", o.adaptive ? "adaptive" : o.scheme},
                {"sigma2", o.with_sigma2},
                {"tau", o.with_tau},
                {"adaptive", o.adaptive}};

    json payload;
    if (o.adaptive) {
        const igw::AdaptiveFit result = igw::adaptive_fit(path);
        payload = json::parse(igw::estimate_record_to_json(
            result.estimate, result.tau.sigma2_hat, result.tau.tau_hat));
        payload["adaptive"] = {
            {"chosen", result.chosen == igw::AdaptiveChoice::WeiWinnicki
                           ? "wei"
                           : "recip-t"},
            {"mu_tilde", result.tau.mu_tilde},
            {"transient", result.tau.transient}};
    } else {
        const igw::Estimate est = igw::fit(path, scheme_from_name(o.scheme));
        std::optional<double> sigma2, tau;
        if (o.with_sigma2 || o.with_tau) {
            const double mu_tilde =
                igw::fit(path, igw::WeightScheme::reciprocal_t()).mu_hat;
            sigma2 = igw::estimate_sigma2(path, mu_tilde);
        }
        if (o.with_tau) {
            const igw::TauEstimate t = igw::estimate_tau(path);
            sigma2 = t.sigma2_hat;
            tau = t.tau_hat;
        }
        payload = json::parse(igw::estimate_record_to_json(est, sigma2, tau));
    }

    const json out{{"schema_version", 1}, {"config", config}, {"estimate", payload}};
    emit(o.out, out.dump(2) + "\n");
    return 0;
}

int run_mc(const McOpts& o, unsigned workers) {
    igw::ExperimentConfig cfg{load_spec(o.spec_file), o.n, o.reps, {}, o.seed,
                              o.bins};
    print_warnings(cfg.spec.warnings());
    for (const auto& name : o.schemes) cfg.schemes.push_back(scheme_from_name(name));

    const igw::MCSummary summary = igw::run_experiment(cfg, workers);
    std::cerr << "mc: " << o.reps << " replications in " << summary.wall_seconds
              << " s\n";

    json out = json::parse(igw::mc_summary_to_json(summary));
    out["config"]["spec_file"] = o.spec_file;
    emit(o.out, out.dump(2) + "\n");

    if (o.hist) {
        const json config{{"subcommand", "mc"},      {"spec_file", o.spec_file},
                          {"n", o.n},                {"replications", o.reps},
                          {"master_seed", o.seed},   {"histogram_bins", o.bins},
                          {"schema_version", 1}};
        write_file(*o.hist, csv_with_comments(config, [&](std::ostream& os) {
                       igw::write_histograms_csv(os, summary);
                   }));
    }
    return 0;
}

int run_table1(const Table1Opts& o, unsigned workers) {
    const igw::WlsMeanTable table = igw::reproduce_table1(o.seed, workers);
    const json config{{"subcommand", "table1"},
                      {"master_seed", o.seed},
                      {"replications", table.replications},
                      {"schema_version", 1}};
    emit(o.out, csv_with_comments(config, [&](std::ostream& os) {
             igw::write_table1_csv(os, table);
         }));
    return 0;
}

int run_limitdist(const LimitDistOpts& o, unsigned workers) {
    igw::LimitLaw law;
    if (o.which == "wls-slope") {
        law = igw::LimitLaw::WlsSlope;
    } else if (o.which == "ols-pair") {
        law = igw::LimitLaw::OlsPair;
    } else if (o.which == "mu-gauss") {
        law = igw::LimitLaw::MuGauss;
    } else {
        throw igw::ConfigError("unknown limit law '" + o.which +
                               "' (expected wls-slope|ols-pair|mu-gauss)");
    }

    const igw::CirConfig cfg{o.mu0, o.sigma0, o.grid};
    const igw::LimitSample sample =
        igw::sample_limit_law(law, cfg, o.draws, igw::SeedRecord{o.seed, 0}, workers);

    const json config{{"subcommand", "limitdist"}, {"which", o.which},
                      {"mu0", o.mu0},              {"sigma0", o.sigma0},
                      {"grid", o.grid},            {"draws", o.draws},
                      {"master_seed", o.seed},     {"schema_version", 1}};
    emit(o.out, csv_with_comments(config, [&](std::ostream& os) {
             igw::write_limit_sample_csv(os, sample);
         }));

    if (o.quantiles_out) {
        static const std::vector<double> probs{0.005, 0.01, 0.025, 0.05, 0.1,
                                               0.25,  0.5,  0.75,  0.9,  0.95,
                                               0.975, 0.99, 0.995};
        write_file(*o.quantiles_out,
                   csv_with_comments(config, [&](std::ostream& os) {
                       igw::write_quantile_table_csv(os, sample.values, probs);
                   }));
    }
    return 0;
}

int run_clt_check(const CltOpts& o, unsigned workers) {
    const igw::ModelSpec spec = load_spec(o.spec_file);
    const igw::CltReport report =
        igw::verify_clt(spec, o.n, o.reps, o.seed, workers);

    json out = json::parse(igw::clt_report_to_json(report));
    out["config"] = {{"subcommand", "clt-check"}, {"spec_file", o.spec_file},
                     {"n", o.n},                  {"replications", o.reps},
                     {"master_seed", o.seed}};
    emit(o.out, out.dump(2) + "\n");
    return 0;
}

int run_unit_root(const UnitRootOpts& o, unsigned workers) {
    const igw::CountPath path = load_path(o.path_file);
    const igw::UnitRootEstimator estimator = [&] {
        if (o.estimator == "wls") return igw::UnitRootEstimator::Wls;
        if (o.estimator == "ols") return igw::UnitRootEstimator::Ols;
        throw igw::ConfigError("unknown estimator '" + o.estimator +
                               "' (expected wls|ols)");
    }();

    igw::UnitRootOptions opt;
    opt.grid_size = o.grid;
    opt.workers = workers;

    const igw::RegimeDecision decision =
        igw::decide_regime(path, o.level, o.kpss_pvalue, estimator, o.draws,
                           igw::SeedRecord{o.seed, 0}, opt);
    print_warnings(decision.unit_root.warnings);

    json out = json::parse(igw::regime_decision_to_json(decision));
    out["config"] = {{"subcommand", "test-unit-root"},
                     {"path_file", o.path_file},
                     {"level", o.level},
                     {"estimator", o.estimator},
                     {"limit_draws", o.draws},
                     {"grid", o.grid},
                     {"master_seed", o.seed}};
    emit(o.out, out.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrated Galton-Watson processes: simulation, intercept "
                 "estimation and unit-root inference"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Load flags from a config file (flags given "
                                   "on the command line take precedence)");

    unsigned workers = igw::default_workers();
    app.add_option("--workers", workers,
                   "Worker threads (results are independent of this)")
        ->capture_default_str();

    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "Simulate a count path");
    c_sim->add_option("--spec", sim.spec_file, "Model spec JSON file")->required();
    c_sim->add_option("--n", sim.n, "Path length")->required();
    c_sim->add_option("--seed", sim.seed, "Master seed")->envname(kSeedEnvVar);
    c_sim->add_option("--out", sim.out, "Output CSV (stdout if omitted)");

    EstimateOpts est;
    auto* c_est = app.add_subcommand("estimate", "Fit (m, mu) on a path CSV");
    c_est->add_option("--path", est.path_file, "Path CSV file")->required();
    auto* scheme_opt =
        c_est->add_option("--scheme", est.scheme, "Weighting: ols|wei|recip-t")
            ->capture_default_str();
    c_est->add_flag("--sigma2", est.with_sigma2, "Include the sigma^2 plug-in");
    c_est->add_flag("--tau", est.with_tau, "Include tau_hat = 2 mu_tilde/sigma2_hat");
    c_est->add_flag("--adaptive", est.adaptive,
                    "Adaptive selection between wei and recip-t via tau_hat")
        ->excludes(scheme_opt);
    c_est->add_option("--out", est.out, "Output JSON (stdout if omitted)");

    McOpts mc;
    auto* c_mc = app.add_subcommand("mc", "Monte Carlo estimator experiment");
    c_mc->add_option("--spec", mc.spec_file, "Model spec JSON file")->required();
    c_mc->add_option("--n", mc.n, "Path length")->required();
    c_mc->add_option("--reps", mc.reps, "Replication count")->required();
    c_mc->add_option("--schemes", mc.schemes, "Schemes (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    c_mc->add_option("--seed", mc.seed, "Master seed")->envname(kSeedEnvVar);
    c_mc->add_option("--bins", mc.bins, "Histogram bins (0 = Freedman-Diaconis)");
    c_mc->add_option("--out", mc.out, "Output JSON (stdout if omitted)");
    c_mc->add_option("--hist", mc.hist, "Also write histograms to this CSV");

    Table1Opts t1;
    auto* c_t1 = app.add_subcommand(
        "table1", "WLS sample-mean table over mu0 x n (B = 5000)");
    c_t1->add_option("--seed", t1.seed, "Master seed")->envname(kSeedEnvVar);
    c_t1->add_option("--out", t1.out, "Output CSV (stdout if omitted)");

    LimitDistOpts ld;
    auto* c_ld = app.add_subcommand("limitdist", "Sample a limit law");
    c_ld->add_option("--which", ld.which, "wls-slope|ols-pair|mu-gauss")
        ->required();
    c_ld->add_option("--mu0", ld.mu0, "Drift mu0")->required();
    c_ld->add_option("--sigma0", ld.sigma0, "Volatility sigma0")->required();
    c_ld->add_option("--grid", ld.grid, "CIR grid size")->capture_default_str();
    c_ld->add_option("--draws", ld.draws, "Number of draws")->required();
    c_ld->add_option("--seed", ld.seed, "Master seed")->envname(kSeedEnvVar);
    c_ld->add_option("--out", ld.out, "Output CSV (stdout if omitted)");
    c_ld->add_option("--quantiles-out", ld.quantiles_out,
                     "Also write a {probability, quantile} CSV");

    CltOpts clt;
    auto* c_clt = app.add_subcommand(
        "clt-check", "Check sqrt(ln n)(mu_tilde - mu0) against N(0, sigma0^2 mu0)");
    c_clt->add_option("--spec", clt.spec_file, "Model spec JSON file")->required();
    c_clt->add_option("--n", clt.n, "Path length")->required();
    c_clt->add_option("--reps", clt.reps, "Replication count")->required();
    c_clt->add_option("--seed", clt.seed, "Master seed")->envname(kSeedEnvVar);
    c_clt->add_option("--out", clt.out, "Output JSON (stdout if omitted)");

    UnitRootOpts ur;
    auto* c_ur = app.add_subcommand("test-unit-root",
                                    "Unit-root test with simulated critical values");
    c_ur->add_option("--path", ur.path_file, "Path CSV file")->required();
    c_ur->add_option("--level", ur.level, "Test level in (0,1)")
        ->capture_default_str();
    c_ur->add_option("--estimator", ur.estimator, "wls|ols")->capture_default_str();
    c_ur->add_option("--draws", ur.draws, "Limit draws")->capture_default_str();
    c_ur->add_option("--grid", ur.grid, "CIR grid size")->capture_default_str();
    c_ur->add_option("--seed", ur.seed, "Master seed")->envname(kSeedEnvVar);
    c_ur->add_option("--kpss-pvalue", ur.kpss_pvalue,
                     "Externally computed stationarity-test p-value");
    c_ur->add_option("--out", ur.out, "Output JSON (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_sim->parsed()) return run_simulate(sim);
        if (c_est->parsed()) return run_estimate(est);
        if (c_mc->parsed()) return run_mc(mc, workers);
        if (c_t1->parsed()) return run_table1(t1, workers);
        if (c_ld->parsed()) return run_limitdist(ld, workers);
        if (c_clt->parsed()) return run_clt_check(clt, workers);
        if (c_ur->parsed()) return run_unit_root(ur, workers);
        std::cerr << "error: no subcommand given\n";
        return 2;
    } catch (const igw::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const igw::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
