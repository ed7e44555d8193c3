#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace imab {

enum class ExitCode : int { ok = 0, error = 1, invalid = 2 };

// Everything a subcommand may read. Unset optionals fall back to the library defaults.
struct RunConfig {
    std::string command;  // gen, validate, run, eval, tune, bounds, dual, report
    std::string input;
    std::string output;
    std::uint64_t seed = 0;

    // gen
    std::string family = "hard";  // hard, example, random_concave
    std::string example = "ex1";
    std::size_t k = 2;
    std::int64_t horizon = 64;
    double beta = 1.0;
    std::optional<std::int64_t> s;
    std::optional<std::size_t> good;
    double max_final = 1.0;
    std::optional<std::size_t> count;  // write a corpus of this many draws

    // algorithms
    std::string algo = "ptrr";  // ptrr, hybrid, cumulative_hybrid, regret_hybrid, envelope_greedy, doubling_ptrr
    double alpha = 1.0;
    std::optional<std::int64_t> budget_b;
    std::optional<double> m;  // PTRR threshold scale, or m_terminal for the hybrids; gen: curve scale
    std::optional<std::int64_t> tau;
    std::string estimator = "round_robin_max";
    std::string permutation;  // comma-separated arm indices; overrides the seed

    // evaluation and tuning
    bool exact = false;
    bool mc = false;
    std::size_t n = 1000;
    std::string loss = "avg_regret";
    std::optional<double> h_bound;
    std::string tune_family = "ptrr_alpha";

    // bounds
    double eps = 0.1;
    double delta = 0.1;
    double c = 1.0;
    std::optional<double> q_bound;
};

// Runs one subcommand. The artifact goes to config.output (or `out` when unset); the one-line summary
// goes to `out` when the artifact is a file and to `err` otherwise. Errors are reported on `err`.
ExitCode execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace imab
