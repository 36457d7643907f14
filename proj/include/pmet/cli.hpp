#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pmet/automaton_io.hpp"
#include "pmet/lifting.hpp"

namespace pmet {

enum class RunMode { TraceDist, BranchingDist, Compare, LawCheck, Duality, WellBehaved, OracleCompare };
enum class OutputFormat { Table, JsonReport };

struct RunConfig {
    RunMode mode = RunMode::TraceDist;
    LiftParams params;
    bool eval_given = false;  // default convention follows the automaton kind
    double epsilon = 1e-6;
    int max_depth = 20;
    std::vector<std::pair<std::string, std::string>> pairs;  // empty = all pairs
    std::uint64_t seed = 42;
    OutputFormat format = OutputFormat::Table;
    bool tv_preset = false;  // top = inf, c1 = 1/2, c2 = |A|, convex
};

struct RunResult {
    int exit_code = 0;
    std::string report_json;  // deterministic machine-readable report
    std::string table_text;   // human-readable rendering of the same results
};

/// Mode dispatch on validated documents; check modes take no documents.
RunResult run(const RunConfig& config, const std::vector<Automaton>& documents);

/// Full command-line entry point (argument parsing plus run).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pmet
