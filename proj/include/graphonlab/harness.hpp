#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "graphonlab/common.hpp"
#include "graphonlab/drift.hpp"
#include "graphonlab/graphon.hpp"

namespace graphonlab {

/// Flat table of experiment records. Rows share the column set; CSV output is
/// RFC 4180 (quoted where needed) with a JSON Lines mirror.
struct RecordTable {
    std::vector<std::string> columns;
    std::vector<nlohmann::json> rows;

    void append(const nlohmann::json& row);
    void write_csv(const std::string& path) const;
    void write_jsonl(const std::string& path) const;
    static RecordTable read_csv(const std::string& path);
    static RecordTable read_jsonl(const std::string& path);
};

/// Parsed experiment configuration. `raw` keeps the full JSON document; typed
/// accessors pull and check individual fields per experiment kind.
struct ExperimentConfig {
    nlohmann::json raw;
    std::string experiment;
    std::string regime = "oracle";  // oracle | torus
    std::uint64_t seed = 1;
    std::string output;

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_json(const nlohmann::json& j);
    /// Checks every field the selected experiment needs; throws with a
    /// field-specific message otherwise.
    void validate() const;
};

Graphon parse_graphon(const nlohmann::json& j);
DriftKernel parse_kernel(const nlohmann::json& j);

struct ExperimentResult {
    RecordTable records;
    nlohmann::json summary;
    bool gates_pass = true;
    std::vector<std::string> gate_failures;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

ExperimentResult run_scaling_thm22(const ExperimentConfig& cfg);
ExperimentResult run_stability_thm23(const ExperimentConfig& cfg);
ExperimentResult run_stability_thm24(const ExperimentConfig& cfg);
ExperimentResult run_estimator_validation(const ExperimentConfig& cfg);
ExperimentResult run_operator_checks(const ExperimentConfig& cfg);

/// Writes <prefix>.csv, <prefix>.jsonl and <prefix>.summary.json.
void write_outputs(const ExperimentResult& result, const std::string& prefix);

/// Recomputes the fits and pass counts a records table supports (used by the
/// report command; the run itself goes through the same code).
nlohmann::json summarize_records(const RecordTable& records);

struct WeakOrderStudy {
    std::vector<double> dt_values;
    std::vector<double> errors;        // coupled |Euler - exact transition| variance gap
    std::vector<double> variances;     // Euler sample variance of X1 - X2 at T
    double reference = 0.0;            // exact Var(X1 - X2)(T)
    double std_error = 0.0;            // Monte Carlo s.e. of the variance estimate
    double slope = 0.0;                // log-log slope of error against dt
    double r_squared = 0.0;
};

/// Two-particle linear-kernel benchmark at T = 1: Euler-Maruyama through the
/// simulator against the exact Gaussian transition driven by the same
/// Brownian increments, per dt.
WeakOrderStudy weak_order_study(std::uint64_t seed, int replicas,
                                const std::vector<double>& dt_list);

}  // namespace graphonlab
