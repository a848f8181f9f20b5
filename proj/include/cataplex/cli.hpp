#pragma once

// Batch front end: one verification command per run, reports as CSV or JSON.
//
// Exit codes: 0 all checks pass, 1 some check exceeded its tolerance,
// 2 usage error (bad flags, grids, inputs or unwritable output),
// 3 numerical failure (non-convergence, step underflow, overflow, ...).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cataplex::cli {

/// "lo:hi:n" with n an integer >= 2 means n evenly spaced points including
/// both ends; any other third field is a step. A bare number is a single
/// point. Throws UsageError on malformed or empty grids.
std::vector<double> parse_grid(const std::string& text);
/// Comma-separated numbers. Throws UsageError.
std::vector<double> parse_list(const std::string& text);

enum class Format { Csv, Json };

struct RunConfig {
    std::string command;
    std::optional<double> tol;  // per-command default when unset
    std::map<std::string, std::string> grids;  // name -> grid or list text
    std::string model = "sine-gordon";
    double z = 0.0;
    std::optional<double> psi_left;
    double step = 0.05;
    int max_steps = 4000;
    int n_sites = 16;
    double spacing = 0.1;
    int configs = 100;
    std::uint64_t seed = 1;
    std::string out = "-";
    std::optional<std::string> report_path;
    Format format = Format::Csv;
    int threads = 0;  // 0: CATAPLEX_THREADS or hardware concurrency
};

struct Record {
    std::string check_id;
    std::vector<std::pair<std::string, double>> inputs;
    double computed = 0.0;
    double reference = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Summary {
    int count = 0;
    int passed = 0;
    int failed = 0;
    double max_residual = 0.0;
};

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<Record> records;
    /// Extra table written instead of the report for `soliton` (field slice).
    std::vector<std::string> table_header;
    std::vector<std::vector<double>> table;

    [[nodiscard]] Summary summary() const;
    [[nodiscard]] bool all_pass() const { return summary().failed == 0; }
};

/// pass = residual <= tolerance (false for NaN).
Record make_record(std::string id, std::vector<std::pair<std::string, double>> inputs, double computed,
                   double reference, double residual, double tolerance);

/// Runs one of macdonald, sister, propagator, timemap, contour, soliton,
/// contract, entwine. Throws UsageError for unknown commands or bad config.
Report run_command(const RunConfig& config);

/// Report as CSV (header check_id,inputs,computed,reference,residual,tolerance,pass;
/// inputs as name=value pairs joined by ';') or JSON
/// {command, seed, records:[{check_id, inputs:{...}, computed, reference,
/// residual, tolerance, pass}], summary:{count, passed, failed, max_residual}}.
std::string render_report(const Report& report, Format format);
/// Field table as CSV with the report's table_header.
std::string render_table(const Report& report);

/// Writes to path ("-" is stdout). Throws IoError.
void write_text(const std::string& text, const std::string& path);

/// Full program: parse argv, run, write, return the exit code. Messages go to
/// stderr; wall time is printed there too so output files stay byte-stable.
int main_entry(int argc, char** argv);

}  // namespace cataplex::cli
