#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smalldiv/experiments.hpp"

namespace smalldiv::cli {

using Cell = std::variant<std::uint64_t, std::int64_t, double, std::string>;

/// Everything a subcommand produces, independent of the output format.
struct Table {
    std::string command;
    std::vector<std::pair<std::string, Cell>> inputs;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;
    std::optional<Verdict> verdict;  // empty for plain primitives
    std::string notes;
};

/// Header row, data rows, then `#`-prefixed summary, verdict and notes lines.
void write_csv(std::ostream& out, const Table& t);

/// One object with `inputs`, `columns`, `rows`, `summary`, `verdict`, `notes`.
void write_json(std::ostream& out, const Table& t);

/// Fills a table from an experiment report.
void append_report(Table& t, const TrendReport& rep);

/// Parses a `key = value` config text; `#` starts a comment line.
std::vector<std::pair<std::string, std::string>> parse_config(std::istream& in);

/// Full command-line entry point. argv[0] is the program name.
/// Exit codes: 0 success, 1 invalid arguments or config, 2 a failing
/// verdict under --check.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smalldiv::cli
