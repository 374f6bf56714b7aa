#pragma once

#include <string>
#include <vector>

#include "nlx/claim.hpp"

namespace nlx {

/// Verdict thresholds used by the batch commands, versioned so reports can
/// be compared across releases. Values appear in every JSON report header.
struct ToleranceTable {
    int version = 1;
    double h3_abs = 1e-12;             // |g(y,0,t)| bound
    double fixed_point = 1e-12;        // implicit step tolerance
    double linearity_default = 1e-9;   // classify default
    double gap_sigma = 5.0;            // strict gap must exceed sigma * estimate
    double linear_gap_floor = 1e-9;    // additivity residual allowed for linear drivers
    double pde_compare_abs = 5e-3;     // |u_pde - lattice| bound
    double slope_abs = 5e-3;           // |slope - g(0,b,0)| bound
};

const ToleranceTable& default_tolerances();

/// Thrown by parse_config when the user asked for --help; carries the help
/// text and maps to exit code 0.
struct HelpRequested {
    std::string text;
};

/// Fully validated description of one batch run. Construct via parse_config;
/// every numeric field is checked and errors name the offending field.
struct ExperimentConfig {
    std::string command;              // gexp | capacity | choquet | gap | pde-compare | slope | classify
    std::string driver;               // driver literal
    std::vector<std::string> claims;  // 1 claim, or 2 for gap
    std::string intervals;            // capacity: "lo,hi[;lo,hi...]" with inf/-inf allowed

    double T = 1.0;
    int steps = 2000;
    int thresholds = 200;
    bool richardson = false;

    double b = 1.0;                  // slope
    std::vector<double> horizons;    // slope
    std::vector<double> x_points;    // pde-compare
    int nx = 2001;                   // pde-compare
    int grid_points = 21;            // classify
    double tol = 1e-9;               // classify

    std::string format = "json";     // csv | json
    std::string out_path;            // empty = stdout
    std::string table_path;          // choquet: optional per-threshold CSV
};

/// Parses command-line style arguments (without the program name).
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Parses a JSON config file with the same field names as the flags; the two
/// ingestion paths share one validator and yield identical reports.
ExperimentConfig parse_config_file(const std::string& path);

/// One report cell: pre-formatted text plus whether it serializes as a JSON
/// number. Numbers are formatted once with 17 significant digits so CSV and
/// JSON carry identical values.
struct ReportCell {
    std::string text;
    bool is_number = false;
};

struct Report {
    std::string command;
    std::vector<std::pair<std::string, std::string>> inputs;  // echoed config
    std::vector<std::string> columns;
    std::vector<std::vector<ReportCell>> rows;
    std::string verdict;  // PASS | FAIL | "" (informational)

    // Side table (choquet per-threshold export); empty unless requested.
    std::vector<std::string> side_columns;
    std::vector<std::vector<ReportCell>> side_rows;
    std::string side_path;
};

/// Runs the configured experiment; deterministic for identical configs.
Report run_experiment(const ExperimentConfig& cfg);

/// Serializes the report (csv or json) to the path, or stdout when empty.
/// I/O failures raise ConfigError carrying the path.
void emit_report(const Report& report, const std::string& format, const std::string& path);

/// Formats a double with 17 significant digits (the report number format).
std::string format_number(double v);

/// Parses "lo,hi[;lo,hi...]"; accepts inf, +inf, -inf endpoints.
std::vector<Interval> parse_intervals(const std::string& text);

}  // namespace nlx
