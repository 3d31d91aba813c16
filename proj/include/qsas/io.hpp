// io.hpp -- CSV and JSON output.
//
// CSV files are UTF-8, comma-separated, '.' decimal point, header on the
// first line.  Every command-line run also writes one summary.json whose
// schema is fixed:
//   command: string        name of the subcommand
//   verdict: string        "pass" | "fail" | "n/a"
//   seed:    number        master seed in effect
//   jobs:    number        parallelism degree in effect
//   outputs: array<string> paths of files written by the run
//   details: object        command-specific payload
// validate_summary enforces exactly these required fields and types
// (additional fields are rejected so the schema stays an exact contract).

#ifndef QSAS_IO_HPP
#define QSAS_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

namespace qsas::io {

// Shortest text that round-trips the double (17 significant digits max).
std::string format_double(double v);

// Write header + rows; throws qsas::Error on I/O failure.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Throws ConfigError when the summary violates the documented schema.
void validate_summary(const nlohmann::json& j);

// Validate, then write <dir>/summary.json (pretty-printed).
std::string write_summary(const std::string& dir, const nlohmann::json& summary);

} // namespace qsas::io

#endif // QSAS_IO_HPP
