#pragma once

#include "igw/cir.hpp"
#include "igw/estimators.hpp"
#include "igw/model.hpp"
#include "igw/montecarlo.hpp"
#include "igw/unit_root.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace igw {

// ===========================================================================
// File formats. CSV files carry a header row; lines starting with '#' are
// comments (used for configuration echoes) and are skipped by the readers.
// Doubles are written in shortest round-trip form so identical values give
// identical bytes.
// ===========================================================================

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

// --- count paths -----------------------------------------------------------

/// Two-column CSV (t, X_t) with header, preceded by optional '#' comments.
void write_count_path_csv(std::ostream& os, const CountPath& path,
                          std::span<const std::string> comments = {});

/// Parses a (t, X_t) CSV; throws ConfigError with the offending line number
/// on malformed input. The seed record of a loaded path is zero.
CountPath read_count_path_csv(std::istream& is);

// --- model specs -----------------------------------------------------------

/// {"offspring": {kind, mean[, value]}, "immigration": {kind, mean[,
/// dispersion | value]}}
std::string model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const std::string& text);

// --- estimates -------------------------------------------------------------

/// Flat record {scheme, m_hat, mu_hat, sigma2_hat?, tau_hat?, n}.
std::string estimate_record_to_json(const Estimate& est,
                                    std::optional<double> sigma2_hat = {},
                                    std::optional<double> tau_hat = {});
void write_estimate_record_csv(std::ostream& os, const Estimate& est,
                               std::optional<double> sigma2_hat = {},
                               std::optional<double> tau_hat = {});

// --- Monte Carlo -----------------------------------------------------------

/// MCSummary as JSON (configuration echo included; wall-clock time is not
/// serialized so outputs are reproducible byte for byte).
std::string mc_summary_to_json(const MCSummary& summary);

/// Histograms as CSV rows (estimator, bin_left, bin_right, count).
void write_histograms_csv(std::ostream& os, const MCSummary& summary);

/// Comparison records as CSV (statistic, empirical, target, stderr, pass).
void write_comparisons_csv(std::ostream& os,
                           std::span<const ComparisonRecord> records);

/// WLS mean table as long-format CSV (mu0, n, wls_mean).
void write_table1_csv(std::ostream& os, const WlsMeanTable& table);

std::string clt_report_to_json(const CltReport& report);

// --- limit laws ------------------------------------------------------------

/// Draws as CSV: one "value" column for scalar laws, two columns
/// (m_component, mu_component) for the OLS pair; rejected-draw count as a
/// comment line.
void write_limit_sample_csv(std::ostream& os, const LimitSample& sample);

/// Empirical quantile table as CSV (probability, quantile).
void write_quantile_table_csv(std::ostream& os, std::span<const double> sample,
                              std::span<const double> probabilities);

// --- unit-root tests -------------------------------------------------------

std::string unit_root_result_to_json(const UnitRootResult& result);
std::string regime_decision_to_json(const RegimeDecision& decision);

} // namespace igw
