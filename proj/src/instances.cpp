#include "imab/instances.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imab/error.hpp"

namespace imab {

Instance::Instance(std::vector<RewardCurve> arms, std::string label)
    : arms_(std::move(arms)), horizon_(0), label_(std::move(label)) {
    if (arms_.size() < 2) throw DomainError("an instance needs k >= 2 arms");
    horizon_ = arms_.front().horizon();
    for (std::size_t i = 1; i < arms_.size(); ++i) {
        if (arms_[i].horizon() != horizon_)
            throw DomainError("arm " + std::to_string(i) + " has horizon " +
                              std::to_string(arms_[i].horizon()) + ", expected " +
                              std::to_string(horizon_));
    }
}

std::vector<ArmViolation> find_violations(const Instance& instance) {
    std::vector<ArmViolation> out;
    for (std::size_t i = 0; i < instance.k(); ++i) {
        auto validity = validate(instance.arm(i));
        if (!validity.ok()) out.push_back({i, validity});
    }
    return out;
}

void require_valid(const Instance& instance) {
    const auto violations = find_violations(instance);
    if (violations.empty()) return;
    const auto& first = violations.front();
    std::string what = first.validity.monotone ? "not concave" : "not monotone";
    throw DomainError("arm " + std::to_string(first.arm) + " is " + what + " at t=" +
                      std::to_string(first.validity.first_violation.value_or(0)));
}

double cee(const Instance& instance) {
    require_valid(instance);
    return cee(std::span<const RewardCurve>(instance.arms()));
}

Instance make_hard_family(std::size_t k, Pulls horizon, double m, double beta, Pulls s,
                          std::size_t good_index) {
    if (k < 2) throw DomainError("hard family needs k >= 2");
    if (horizon < 1) throw DomainError("hard family needs T >= 1");
    if (s < 1 || s > horizon) throw DomainError("hard family needs 1 <= s <= T");
    if (good_index >= k) throw DomainError("good arm index out of range");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("hard family needs beta in (0, 1]");
    std::vector<RewardCurve> arms;
    arms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        arms.push_back(i == good_index ? RewardCurve::power(m, beta, horizon)
                                       : RewardCurve::power_flat(m, beta, s, horizon));
    }
    return Instance(std::move(arms), "hard(k=" + std::to_string(k) + ",T=" + std::to_string(horizon) +
                                         ",s=" + std::to_string(s) + ",good=" +
                                         std::to_string(good_index) + ")");
}

std::string_view to_string(Example which) {
    switch (which) {
        case Example::ex1: return "ex1";
        case Example::ex2: return "ex2";
        case Example::ex3: return "ex3";
        case Example::ex4: return "ex4";
    }
    return "unknown";
}

Example example_from_string(std::string_view name) {
    for (auto which : {Example::ex1, Example::ex2, Example::ex3, Example::ex4}) {
        if (to_string(which) == name) return which;
    }
    throw DomainError("unknown example '" + std::string(name) + "'");
}

Instance make_example(Example which, std::size_t k, Pulls horizon) {
    if (k < 2) throw DomainError("examples need k >= 2");
    const double kd = static_cast<double>(k);
    RewardCurve best = RewardCurve::constant(1.0, horizon);
    RewardCurve other = RewardCurve::constant(1.0, horizon);
    switch (which) {
        case Example::ex1:
            best = RewardCurve::constant(1.0, horizon);
            other = RewardCurve::linear_cap(0.5, horizon);
            break;
        case Example::ex2:
            best = RewardCurve::power(1.0, 1.0, horizon);
            other = RewardCurve::linear_cap(1.0 / kd, horizon);
            break;
        case Example::ex3:
            best = RewardCurve::constant(1.0, horizon);
            other = RewardCurve::power(1.0, 1.0, horizon);
            break;
        case Example::ex4:
            best = RewardCurve::power(1.0, 1.0, horizon);
            other = RewardCurve::linear_cap(1.0 / std::sqrt(kd), horizon);
            break;
    }
    std::vector<RewardCurve> arms(k, other);
    arms[0] = best;
    return Instance(std::move(arms), std::string(to_string(which)) + "(k=" + std::to_string(k) +
                                         ",T=" + std::to_string(horizon) + ")");
}

namespace {

RewardCurve random_table(Pulls horizon, Rng& rng, double final_value) {
    const auto n = static_cast<std::size_t>(horizon);
    std::vector<double> steps(n);
    const double shape = rng.uniform(0.5, 3.0);
    for (auto& step : steps) step = std::pow(rng.uniform(), shape);
    std::sort(steps.begin(), steps.end(), std::greater<>());
    if (rng.uniform() < 0.5) {
        const auto flat_from = static_cast<std::size_t>(1 + rng.below(n));
        std::fill(steps.begin() + static_cast<std::ptrdiff_t>(flat_from), steps.end(), 0.0);
    }
    const double total = std::accumulate(steps.begin(), steps.end(), 0.0);
    if (total <= 0.0) return RewardCurve::constant(final_value, horizon);
    std::vector<double> values(n);
    double running = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        running += steps[t] * (final_value / total);
        values[t] = running;
    }
    return RewardCurve::table(std::move(values), horizon);
}

RewardCurve random_curve(Pulls horizon, Rng& rng, double max_final) {
    const double lo = 0.05 * max_final;
    switch (rng.below(5)) {
        case 0: return RewardCurve::power(rng.uniform(lo, max_final), rng.uniform(0.15, 1.0), horizon);
        case 1:
            return RewardCurve::power_flat(rng.uniform(lo, max_final), rng.uniform(0.15, 1.0),
                                           static_cast<Pulls>(1 + rng.below(horizon)), horizon);
        case 2: return RewardCurve::constant(rng.uniform(lo, max_final), horizon);
        case 3: return RewardCurve::linear_cap(rng.uniform(lo, std::min(1.0, max_final)), horizon);
        default: return random_table(horizon, rng, rng.uniform(lo, max_final));
    }
}

}  // namespace

Instance make_random_concave(std::size_t k, Pulls horizon, Rng& rng, double max_final) {
    if (k < 2) throw DomainError("random instances need k >= 2");
    if (!(max_final > 0.0)) throw DomainError("max_final must be positive");
    std::vector<RewardCurve> arms;
    arms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) arms.push_back(random_curve(horizon, rng, max_final));
    return Instance(std::move(arms), "random(k=" + std::to_string(k) + ",T=" + std::to_string(horizon) + ")");
}

std::vector<double> cumulative_totals(const Instance& instance) {
    std::vector<double> totals;
    totals.reserve(instance.k());
    for (const auto& arm : instance.arms()) {
        const auto values = arm.table_values();
        totals.push_back(std::accumulate(values.begin(), values.end(), 0.0));
    }
    return totals;
}

namespace {

BestArm argmax_lowest(std::span<const double> values) {
    BestArm best{values[0], 0};
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > best.value) best = {values[i], i};
    }
    return best;
}

std::vector<double> final_values(const Instance& instance) {
    std::vector<double> out;
    out.reserve(instance.k());
    for (const auto& arm : instance.arms()) out.push_back(arm.final_value());
    return out;
}

GapSide gap_side(const Instance& instance, std::span<const double> totals, GapVariant variant,
                 std::span<const Pulls> queries) {
    GapSide side;
    const BestArm best = argmax_lowest(totals);
    side.best_arm = best.arm;
    double runner_up = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < totals.size(); ++j) {
        if (j != best.arm) runner_up = std::max(runner_up, totals[j]);
    }
    side.delta = best.value - runner_up;
    const double eps = side.delta / 3.0;
    Pulls sum = 0;
    bool all_finite = true;
    for (const auto& arm : instance.arms()) {
        auto budget = terminal_budget(arm, eps, variant);
        side.budgets.push_back(budget);
        if (budget) sum += *budget;
        else all_finite = false;
    }
    if (all_finite) side.budget_sum = sum;
    for (Pulls query : queries) side.gcc_holds_at[query] = side.gcc(query);
    return side;
}

}  // namespace

BestArm opt_cumulative(const Instance& instance) {
    const auto totals = cumulative_totals(instance);
    return argmax_lowest(totals);
}

BestArm best_terminal(const Instance& instance) {
    const auto finals = final_values(instance);
    return argmax_lowest(finals);
}

double remaining_upside(const RewardCurve& curve, Pulls n, GapVariant variant) {
    if (n < 1 || n > curve.horizon()) throw DomainError("remaining_upside needs 1 <= n <= T");
    const double slope = curve(n) - curve(n - 1);
    const double rest = static_cast<double>(curve.horizon() - n);
    if (variant == GapVariant::terminal) return rest * slope;
    return rest * (rest + 1.0) / 2.0 * slope;
}

std::optional<Pulls> terminal_budget(const RewardCurve& curve, double eps, GapVariant variant) {
    for (Pulls n = 2; n <= curve.horizon(); ++n) {
        if (remaining_upside(curve, n, variant) <= eps) return n;
    }
    return std::nullopt;
}

bool GapSide::gcc(Pulls budget) const {
    return delta > 0.0 && budget_sum.has_value() && *budget_sum <= budget;
}

GapReport gap_report(const Instance& instance, std::span<const Pulls> budget_queries) {
    require_valid(instance);
    const auto finals = final_values(instance);
    const auto totals = cumulative_totals(instance);
    return {gap_side(instance, finals, GapVariant::terminal, budget_queries),
            gap_side(instance, totals, GapVariant::cumulative, budget_queries)};
}

std::string_view to_string(GeneratorFamily family) {
    switch (family) {
        case GeneratorFamily::hard: return "hard";
        case GeneratorFamily::example: return "example";
        case GeneratorFamily::random_concave: return "random_concave";
    }
    return "unknown";
}

GeneratorFamily generator_family_from_string(std::string_view name) {
    for (auto family : {GeneratorFamily::hard, GeneratorFamily::example, GeneratorFamily::random_concave}) {
        if (to_string(family) == name) return family;
    }
    throw DomainError("unknown generator family '" + std::string(name) + "'");
}

Instance generate(const GeneratorSpec& spec, Rng& rng) {
    switch (spec.family) {
        case GeneratorFamily::hard:
            return make_hard_family(spec.k, spec.horizon, spec.m, spec.beta, spec.s,
                                    static_cast<std::size_t>(rng.below(spec.k)));
        case GeneratorFamily::example: return make_example(spec.example, spec.k, spec.horizon);
        case GeneratorFamily::random_concave:
            return make_random_concave(spec.k, spec.horizon, rng, spec.max_final);
    }
    throw DomainError("unknown generator family");
}

void InstanceDistribution::check() const {
    if (entries.empty() == !generator.has_value())
        throw DomainError("a distribution holds either weighted entries or a generator");
    if (generator) return;
    double total = 0.0;
    for (const auto& entry : entries) {
        if (!(entry.weight > 0.0) || !std::isfinite(entry.weight))
            throw DomainError("entry weights must be positive");
        total += entry.weight;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw DomainError("entry weights sum to " + std::to_string(total) + ", expected 1");
}

std::vector<Instance> InstanceDistribution::draw(std::size_t n, std::uint64_t draw_seed) const {
    check();
    Rng rng(draw_seed);
    std::vector<Instance> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (generator) {
            out.push_back(generate(*generator, rng));
            continue;
        }
        const double u = rng.uniform();
        double acc = 0.0;
        std::size_t pick = entries.size() - 1;
        for (std::size_t j = 0; j < entries.size(); ++j) {
            acc += entries[j].weight;
            if (u < acc) {
                pick = j;
                break;
            }
        }
        out.push_back(entries[pick].instance);
    }
    return out;
}

}  // namespace imab
