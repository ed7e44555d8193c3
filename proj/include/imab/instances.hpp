#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "imab/curves.hpp"
#include "imab/random.hpp"

namespace imab {

// k reward curves sharing one horizon T. Construction checks shape (k >= 2, shared T) but not
// monotonicity/concavity, so that malformed inputs can still be loaded and reported on.
class Instance {
public:
    explicit Instance(std::vector<RewardCurve> arms, std::string label = {});

    std::size_t k() const noexcept { return arms_.size(); }
    Pulls horizon() const noexcept { return horizon_; }
    const std::vector<RewardCurve>& arms() const noexcept { return arms_; }
    const RewardCurve& arm(std::size_t i) const { return arms_.at(i); }
    const std::string& label() const noexcept { return label_; }

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::vector<RewardCurve> arms_;
    Pulls horizon_;
    std::string label_;
};

struct ArmViolation {
    std::size_t arm;
    CurveValidity validity;
};

// Empty when every arm is monotone and concave.
std::vector<ArmViolation> find_violations(const Instance& instance);

// Throws DomainError naming the first offending arm and pull.
void require_valid(const Instance& instance);

double cee(const Instance& instance);

// One good arm power{m, beta}; the others follow it for s pulls and then stay flat.
Instance make_hard_family(std::size_t k, Pulls horizon, double m, double beta, Pulls s,
                          std::size_t good_index);

enum class Example { ex1, ex2, ex3, ex4 };

std::string_view to_string(Example which);
Example example_from_string(std::string_view name);

// Motivating instances with the best arm at index 0:
//   ex1: constant 1 vs min(t/T, 1/2)      ex2: t/T vs min(t/T, 1/k)
//   ex3: constant 1 vs t/T                ex4: t/T vs min(t/T, 1/sqrt(k))
Instance make_example(Example which, std::size_t k, Pulls horizon);

// Random monotone concave arms with final values in (0, max_final]; a mix of every curve kind.
Instance make_random_concave(std::size_t k, Pulls horizon, Rng& rng, double max_final = 1.0);

struct BestArm {
    double value;
    std::size_t arm;
};

// OPT_T: the largest single-arm cumulative reward sum_{n<=T} f_i(n), lowest index on ties.
BestArm opt_cumulative(const Instance& instance);

// The arm with the largest final value f_i(T), lowest index on ties.
BestArm best_terminal(const Instance& instance);

// F_i(T) for every arm.
std::vector<double> cumulative_totals(const Instance& instance);

enum class GapVariant { terminal, cumulative };

// Remaining-upside bound after n pulls: (T-n) gamma(n-1) for the terminal variant and
// (T-n)(T-n+1)/2 gamma(n-1) for the cumulative one, where gamma(n-1) = f(n) - f(n-1).
double remaining_upside(const RewardCurve& curve, Pulls n, GapVariant variant);

// h(eps) = min{n in 2..T : remaining_upside(n) <= eps}; nullopt when no such n exists.
std::optional<Pulls> terminal_budget(const RewardCurve& curve, double eps, GapVariant variant);

struct GapSide {
    double delta = 0.0;  // best value minus runner-up
    std::size_t best_arm = 0;
    std::vector<std::optional<Pulls>> budgets;  // h_i(delta / 3); nullopt means "never"
    std::optional<Pulls> budget_sum;            // nullopt when any budget is "never"
    std::map<Pulls, bool> gcc_holds_at;

    bool gcc(Pulls budget) const;
};

struct GapReport {
    GapSide terminal;    // gap on f_i(T)
    GapSide cumulative;  // gap on F_i(T)
};

GapReport gap_report(const Instance& instance, std::span<const Pulls> budget_queries = {});

struct WeightedInstance {
    double weight;
    Instance instance;

    friend bool operator==(const WeightedInstance&, const WeightedInstance&) = default;
};

enum class GeneratorFamily { hard, example, random_concave };

std::string_view to_string(GeneratorFamily family);
GeneratorFamily generator_family_from_string(std::string_view name);

// Parameters of a seeded instance generator. Hard-family draws pick the good arm uniformly.
struct GeneratorSpec {
    GeneratorFamily family = GeneratorFamily::hard;
    std::size_t k = 2;
    Pulls horizon = 1;
    double m = 1.0;
    double beta = 1.0;
    Pulls s = 1;
    Example example = Example::ex1;
    double max_final = 1.0;

    friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

Instance generate(const GeneratorSpec& spec, Rng& rng);

// Either an explicit weighted list (weights positive, summing to 1) or a seeded generator.
struct InstanceDistribution {
    std::vector<WeightedInstance> entries;
    std::optional<GeneratorSpec> generator;
    std::uint64_t seed = 0;

    // Throws DomainError when neither or both forms are present, or the weights are off.
    void check() const;

    // n independent draws: weighted sampling from entries, or generator draws, from the given seed.
    std::vector<Instance> draw(std::size_t n, std::uint64_t draw_seed) const;

    friend bool operator==(const InstanceDistribution&, const InstanceDistribution&) = default;
};

}  // namespace imab
