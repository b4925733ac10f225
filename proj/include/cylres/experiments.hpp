#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cylres/io.hpp"
#include "cylres/types.hpp"

namespace cylres {

struct ExperimentConfig {
    std::string experiment;
    Json potential;  ///< builtin name, {"builtin": ...} object or inline table
    std::vector<int> l_values;
    int K = 4;
    int slabs = 512;
    double tol = 1e-10;
    int threads = 1;
    std::uint64_t seed = 0x5eed;
    Json params = Json::object();  ///< experiment-specific knobs, see default_config

    void validate() const;
    Json to_json() const;
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

ExperimentConfig default_config(const std::string& experiment);
/// Defaults for `experiment` with every key present in `overrides` replaced
/// ("params" is merged key by key).
ExperimentConfig load_config(const std::string& experiment, const Json& overrides);

struct ResultRow {
    std::string experiment;
    int l = 0;
    std::string method;
    Complex z;
    int multiplicity = 1;
    double error = 0.0;         ///< NaN when the method has no reference
    double scaled_error = 0.0;
    int K = 0;
    int slabs = 0;
    double wall_time = 0.0;
};

struct Criterion {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ExperimentResult {
    std::string experiment;
    std::vector<ResultRow> rows;
    std::vector<Criterion> criteria;
    Json tables = Json::object();
    Json timings = Json::object();
    bool partial = false;
    std::string error;

    bool all_pass() const;
    const Criterion* criterion(const std::string& name) const;
};

/// Runs one named experiment. Numerical failures inside the run are caught,
/// recorded in `error` and flagged `partial`.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

const std::vector<std::string>& csv_columns();
/// wall_time is written as "nan" so that identical runs give identical files;
/// measured times go to the summary.
void write_results_csv(const ExperimentResult& result, std::ostream& os);
Json summary_json(const ExperimentResult& result, const ExperimentConfig& cfg);
/// Writes results.csv and summary.json into `dir` (created if missing).
void write_outputs(const ExperimentResult& result, const ExperimentConfig& cfg, const std::string& dir);

}  // namespace cylres
