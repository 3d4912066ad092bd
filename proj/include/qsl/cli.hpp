// cli.hpp: the `qsl` command-line front end

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsl/propagator.hpp"
#include "qsl/scenarios.hpp"

namespace qsl::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kSchemaError = 2,
    kInvariantViolation = 3,
    kOracleMismatch = 4,
    kBoundViolation = 5,
};

enum class Format { csv, json };

struct RunConfig {
    std::string command;
    std::string scenario;  // catalog name or path
    std::string output_path;  // empty means stdout (run, bounds) or unused
    Format format = Format::csv;
    std::vector<std::uint64_t> seeds;
    std::vector<Override> overrides;
    Method method = Method::superop_expm;
    std::optional<double> from;
    std::optional<double> to;
    bool all_catalog = false;
    std::string out_dir;
    std::vector<std::string> sweep_sets;  // "key=v1,v2,..."
    unsigned jobs = 0;  // 0 picks the hardware concurrency
};

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bounds(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_catalog(std::ostream& out);

// Parses argv-style arguments (without the program name) and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "k=a,b,[1,2]" -> ("k", {"a", "b", "[1,2]"}); commas inside brackets are kept.
std::pair<std::string, std::vector<std::string>> split_sweep_set(const std::string& text);

}  // namespace qsl::cli
