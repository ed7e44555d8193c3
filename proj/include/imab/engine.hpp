#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "imab/algorithms.hpp"
#include "imab/instances.hpp"

namespace imab {

// Unset thresholds fall back to default_m / default_tau (PTRR) or f*(T) (hybrids).
struct PtrrSpec {
    double alpha = 1.0;
    std::optional<double> m;
    std::optional<Pulls> tau;

    friend bool operator==(const PtrrSpec&, const PtrrSpec&) = default;
};

struct HybridSpec {
    double alpha = 1.0;
    Pulls budget_b = 0;
    std::optional<double> m_terminal;

    friend bool operator==(const HybridSpec&, const HybridSpec&) = default;
};

struct CumulativeHybridSpec {
    double alpha = 1.0;
    Pulls budget_b = 0;
    std::optional<double> m_terminal;

    friend bool operator==(const CumulativeHybridSpec&, const CumulativeHybridSpec&) = default;
};

struct RegretHybridSpec {
    double alpha = 1.0;
    Pulls budget_b = 0;
    std::optional<double> m_terminal;

    friend bool operator==(const RegretHybridSpec&, const RegretHybridSpec&) = default;
};

struct EnvelopeGreedySpec {
    friend bool operator==(const EnvelopeGreedySpec&, const EnvelopeGreedySpec&) = default;
};

// estimator is "round_robin_max" or "oracle".
struct DoublingSpec {
    double alpha = 1.0;
    std::string estimator = "round_robin_max";

    friend bool operator==(const DoublingSpec&, const DoublingSpec&) = default;
};

using AlgorithmSpec = std::variant<PtrrSpec, HybridSpec, CumulativeHybridSpec, RegretHybridSpec,
                                   EnvelopeGreedySpec, DoublingSpec>;

// "ptrr", "hybrid", "cumulative_hybrid", "regret_hybrid", "envelope_greedy", "doubling_ptrr"
std::string algo_name(const AlgorithmSpec& spec);

// Explicit parameters as "name=value" pairs joined by ';'.
std::string spec_params(const AlgorithmSpec& spec);

EpisodeTrace run_episode(const AlgorithmSpec& spec, const Instance& instance, const Permutation& order);

// The permutation comes from shuffled_permutation(k, Rng(seed)).
EpisodeTrace run_episode(const AlgorithmSpec& spec, const Instance& instance, std::uint64_t seed);

enum class LossKind { avg_regret, max_pull_regret, bai_failure };

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

struct LossSpec {
    LossKind kind = LossKind::avg_regret;
    std::optional<double> h_bound;  // defaults: max_i f_i(T) for the regrets, 1 for bai_failure

    friend bool operator==(const LossSpec&, const LossSpec&) = default;
};

double resolved_h_bound(const LossSpec& spec, const Instance& instance);

// avg_regret: (OPT_T - R)/T; max_pull_regret: max_i f_i(T) - max_i f_i(t_i);
// bai_failure: 1 when f_chosen(T) is below max_i f_i(T). Clamped to [0, H].
double loss(const EpisodeTrace& trace, const Instance& instance, const LossSpec& spec);

// avg_regret, max_pull_regret, bai_failure with default bounds.
std::vector<LossSpec> standard_losses();

enum class EvalMethod { exact, mc };

struct EvalReport {
    EvalMethod method = EvalMethod::exact;
    std::size_t n = 0;
    double mean_reward = 0.0;
    double ratio = 0.0;           // OPT_T / mean_reward
    double p_best_arm = 0.0;      // fraction of runs whose returned arm has the best final value
    double mean_chosen_final = 0.0;  // E[f_chosen(T)]
    double reward_variance = 0.0;    // population variance across runs
    double reward_std_error = 0.0;   // mc only
    std::vector<LossSpec> losses;
    std::vector<double> loss_means;
    std::vector<double> loss_std_errors;  // mc only
};

inline constexpr std::size_t kMaxExactArms = 8;

// i-th permutation of 0..k-1 in lexicographic order.
Permutation nth_permutation(std::size_t k, std::uint64_t index);

std::uint64_t factorial(std::size_t k);

// Uniform average over all k! orders. Throws DomainError for k > k_max, directing to mc.
EvalReport expected_metrics_exact(const AlgorithmSpec& spec, const Instance& instance,
                                  const std::vector<LossSpec>& losses = standard_losses(),
                                  std::size_t k_max = kMaxExactArms);

// n orders drawn in sequence from Rng(seed) with shuffled_permutation.
EvalReport expected_metrics_mc(const AlgorithmSpec& spec, const Instance& instance,
                               const std::vector<LossSpec>& losses, std::size_t n, std::uint64_t seed);

std::string_view to_string(EvalMethod method);

std::string eval_csv_header();
std::string eval_csv_row(const AlgorithmSpec& spec, const EvalReport& report);

}  // namespace imab
