#include "igw/io.hpp"

#include "igw/errors.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace igw {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Count paths
// ---------------------------------------------------------------------------

void write_count_path_csv(std::ostream& os, const CountPath& path,
                          std::span<const std::string> comments) {
    for (const auto& line : comments) os << "# " << line << '\n';
    os << "t,X_t\n";
    for (std::size_t t = 0; t < path.values.size(); ++t) {
        os << t << ',' << path.values[t] << '\n';
    }
}

namespace {

[[noreturn]] void csv_error(std::size_t line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "path CSV, line " << line_no << ": " << what;
    throw ConfigError(msg.str());
}

bool parse_int64(const std::string& token, std::int64_t& out) {
    if (token.empty()) return false;
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (errno != 0 || end != token.c_str() + token.size()) return false;
    out = v;
    return true;
}

} // namespace

CountPath read_count_path_csv(std::istream& is) {
    CountPath path;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) { // header row required
            if (line.find(',') == std::string::npos)
                csv_error(line_no, "expected a comma-separated header row");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            csv_error(line_no, "expected two comma-separated columns");
        std::int64_t t = 0, x = 0;
        if (!parse_int64(line.substr(0, comma), t))
            csv_error(line_no, "time index is not an integer");
        if (!parse_int64(line.substr(comma + 1), x))
            csv_error(line_no, "count value is not an integer");
        if (t != static_cast<std::int64_t>(path.values.size()))
            csv_error(line_no, "time indices must run 0, 1, 2, ... without gaps");
        if (x < 0) csv_error(line_no, "count values must be nonnegative");
        path.values.push_back(x);
    }
    if (!header_seen) throw ConfigError("path CSV: empty file (header row required)");
    if (path.values.size() < 2)
        throw ConfigError("path CSV: need at least X_0 and X_1");
    return path;
}

// ---------------------------------------------------------------------------
// Model specs
// ---------------------------------------------------------------------------

namespace {

json offspring_to_json(const OffspringDist& z) {
    switch (z.kind()) {
    case OffspringKind::Poisson: return {{"kind", "poisson"}, {"mean", z.mean()}};
    case OffspringKind::Geometric: return {{"kind", "geometric"}, {"mean", z.mean()}};
    case OffspringKind::Bernoulli: return {{"kind", "bernoulli"}, {"mean", z.mean()}};
    case OffspringKind::Dirac:
        return {{"kind", "dirac"}, {"mean", z.mean()}, {"value", z.dirac_value()}};
    }
    throw ConfigError("offspring_to_json: unknown kind");
}

json immigration_to_json(const ImmigrationDist& eps) {
    switch (eps.kind()) {
    case ImmigrationKind::Poisson:
        return {{"kind", "poisson"}, {"mean", eps.mean()}};
    case ImmigrationKind::NegativeBinomial:
        return {{"kind", "negative-binomial"},
                {"mean", eps.mean()},
                {"dispersion", eps.dispersion()}};
    case ImmigrationKind::Dirac:
        return {{"kind", "dirac"}, {"mean", eps.mean()}, {"value", eps.dirac_value()}};
    }
    throw ConfigError("immigration_to_json: unknown kind");
}

double require_number(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ConfigError(std::string(where) + ": missing numeric field '" + key + "'");
    }
    return j.at(key).get<double>();
}

std::int64_t require_integer(const json& j, const char* key, const char* where) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
        throw ConfigError(std::string(where) + ": missing integer field '" + key + "'");
    }
    return j.at(key).get<std::int64_t>();
}

OffspringDist offspring_from_json(const json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "poisson") return OffspringDist::poisson(require_number(j, "mean", "offspring"));
    if (kind == "geometric")
        return OffspringDist::geometric(require_number(j, "mean", "offspring"));
    if (kind == "bernoulli")
        return OffspringDist::bernoulli(require_number(j, "mean", "offspring"));
    if (kind == "dirac")
        return OffspringDist::dirac(require_integer(j, "value", "offspring"));
    throw ConfigError("offspring: unknown kind '" + kind +
                      "' (expected poisson|geometric|bernoulli|dirac)");
}

ImmigrationDist immigration_from_json(const json& j) {
    const std::string kind = j.value("kind", "");
    if (kind == "poisson")
        return ImmigrationDist::poisson(require_number(j, "mean", "immigration"));
    if (kind == "negative-binomial")
        return ImmigrationDist::negative_binomial(
            require_number(j, "mean", "immigration"),
            require_number(j, "dispersion", "immigration"));
    if (kind == "dirac")
        return ImmigrationDist::dirac(require_integer(j, "value", "immigration"));
    throw ConfigError("immigration: unknown kind '" + kind +
                      "' (expected poisson|negative-binomial|dirac)");
}

json model_spec_to_json_obj(const ModelSpec& spec) {
    return {{"offspring", offspring_to_json(spec.offspring())},
            {"immigration", immigration_to_json(spec.immigration())}};
}

ModelSpec model_spec_from_json_obj(const json& j) {
    if (!j.is_object() || !j.contains("offspring") || !j.contains("immigration")) {
        throw ConfigError(
            "model spec: expected an object with 'offspring' and 'immigration'");
    }
    return {offspring_from_json(j.at("offspring")),
            immigration_from_json(j.at("immigration"))};
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw ConfigError(std::string(what) + ": not valid JSON");
    }
    return j;
}

} // namespace

std::string model_spec_to_json(const ModelSpec& spec) {
    return model_spec_to_json_obj(spec).dump(2);
}

ModelSpec model_spec_from_json(const std::string& text) {
    return model_spec_from_json_obj(parse_json(text, "model spec"));
}

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

namespace {

json estimate_record(const Estimate& est, std::optional<double> sigma2_hat,
                     std::optional<double> tau_hat) {
    json j{{"scheme", est.scheme.name()},
           {"m_hat", est.m_hat},
           {"mu_hat", est.mu_hat},
           {"n", est.n}};
    if (sigma2_hat) j["sigma2_hat"] = *sigma2_hat;
    if (tau_hat) j["tau_hat"] = *tau_hat;
    return j;
}

} // namespace

std::string estimate_record_to_json(const Estimate& est,
                                    std::optional<double> sigma2_hat,
                                    std::optional<double> tau_hat) {
    return estimate_record(est, sigma2_hat, tau_hat).dump(2);
}

void write_estimate_record_csv(std::ostream& os, const Estimate& est,
                               std::optional<double> sigma2_hat,
                               std::optional<double> tau_hat) {
    os << "scheme,m_hat,mu_hat,sigma2_hat,tau_hat,n\n";
    os << est.scheme.name() << ',' << format_double(est.m_hat) << ','
       << format_double(est.mu_hat) << ','
       << (sigma2_hat ? format_double(*sigma2_hat) : std::string{}) << ','
       << (tau_hat ? format_double(*tau_hat) : std::string{}) << ',' << est.n
       << '\n';
}

// ---------------------------------------------------------------------------
// Monte Carlo
// ---------------------------------------------------------------------------

namespace {

json histogram_to_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}};
}

json experiment_config_to_json(const ExperimentConfig& cfg) {
    json schemes = json::array();
    for (const auto& s : cfg.schemes) schemes.push_back(s.name());
    return {{"spec", model_spec_to_json_obj(cfg.spec)},
            {"n", cfg.n},
            {"replications", cfg.replications},
            {"schemes", schemes},
            {"master_seed", cfg.master_seed},
            {"histogram_bins", cfg.histogram_bins}};
}

} // namespace

std::string mc_summary_to_json(const MCSummary& summary) {
    json estimators = json::array();
    for (const auto& e : summary.estimators) {
        estimators.push_back({{"scheme", e.scheme},
                              {"sample_mean", e.sample_mean},
                              {"sample_variance", e.sample_variance},
                              {"failure_count", e.failure_count},
                              {"histogram", histogram_to_json(e.histogram)}});
    }
    json j{{"schema_version", 1},
           {"config", experiment_config_to_json(summary.config)},
           {"estimators", estimators}};
    return j.dump(2);
}

void write_histograms_csv(std::ostream& os, const MCSummary& summary) {
    os << "estimator,bin_left,bin_right,count\n";
    for (const auto& e : summary.estimators) {
        for (std::size_t k = 0; k < e.histogram.counts.size(); ++k) {
            os << e.scheme << ',' << format_double(e.histogram.edges[k]) << ','
               << format_double(e.histogram.edges[k + 1]) << ','
               << e.histogram.counts[k] << '\n';
        }
    }
}

void write_comparisons_csv(std::ostream& os,
                           std::span<const ComparisonRecord> records) {
    os << "statistic,empirical,target,stderr,pass\n";
    for (const auto& r : records) {
        os << r.statistic << ',' << format_double(r.empirical) << ','
           << format_double(r.target) << ',' << format_double(r.stderr_mc) << ','
           << (r.pass ? "true" : "false") << '\n';
    }
}

void write_table1_csv(std::ostream& os, const WlsMeanTable& table) {
    os << "mu0,n,wls_mean\n";
    for (std::size_t row = 0; row < table.n_values.size(); ++row) {
        for (std::size_t col = 0; col < table.mu0_values.size(); ++col) {
            os << format_double(table.mu0_values[col]) << ',' << table.n_values[row]
               << ',' << format_double(table.means[row][col]) << '\n';
        }
    }
}

std::string clt_report_to_json(const CltReport& report) {
    json j{{"schema_version", 1},
           {"empirical_sd", report.empirical_sd},
           {"target_sd", report.target_sd},
           {"ks_stat", report.ks_stat},
           {"replications", report.replications},
           {"failures", report.failures}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Limit laws
// ---------------------------------------------------------------------------

void write_limit_sample_csv(std::ostream& os, const LimitSample& sample) {
    os << "# rejected_draws=" << sample.rejected << '\n';
    if (sample.law == LimitLaw::OlsPair) {
        os << "m_component,mu_component\n";
        for (std::size_t i = 0; i < sample.values.size(); ++i) {
            os << format_double(sample.values[i]) << ','
               << format_double(sample.values2[i]) << '\n';
        }
    } else {
        os << "value\n";
        for (double v : sample.values) os << format_double(v) << '\n';
    }
}

void write_quantile_table_csv(std::ostream& os, std::span<const double> sample,
                              std::span<const double> probabilities) {
    std::vector<double> values(sample.begin(), sample.end());
    os << "probability,quantile\n";
    for (double p : probabilities) {
        os << format_double(p) << ',' << format_double(quantile(values, p)) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Unit-root tests
// ---------------------------------------------------------------------------

namespace {

json unit_root_result_to_json_obj(const UnitRootResult& r) {
    json levels = json::array();
    for (const auto& [level, interval] : r.critical_values) {
        levels.push_back({{"level", level},
                          {"lower", interval.first},
                          {"upper", interval.second}});
    }
    return {{"schema_version", 1},
            {"statistic", r.statistic},
            {"estimator", to_string(r.estimator_used)},
            {"plug_in", {{"mu_tilde", r.mu_tilde}, {"sigma2_hat", r.sigma2_hat}}},
            {"critical_values", levels},
            {"reject", r.reject},
            {"level", r.level},
            {"limit_draws", r.limit_draws},
            {"rejected_draws", r.rejected_draws},
            {"seed", {{"master", r.seed.master}, {"stream", r.seed.stream}}},
            {"warnings", r.warnings}};
}

} // namespace

std::string unit_root_result_to_json(const UnitRootResult& result) {
    return unit_root_result_to_json_obj(result).dump(2);
}

std::string regime_decision_to_json(const RegimeDecision& decision) {
    json j{{"schema_version", 1},
           {"regime", to_string(decision.regime)},
           {"unilateral", decision.unilateral},
           {"unit_root", unit_root_result_to_json_obj(decision.unit_root)}};
    if (decision.stationarity_pvalue) {
        j["stationarity_pvalue"] = *decision.stationarity_pvalue;
    } else {
        j["stationarity_pvalue"] = nullptr;
    }
    return j.dump(2);
}

} // namespace igw
