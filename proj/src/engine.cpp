#include "imab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imab/error.hpp"
#include "imab/format.hpp"
#include "imab/parallel.hpp"

namespace imab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double terminal_default(const Instance& instance, const std::optional<double>& m) {
    return m ? *m : best_final_curve(instance).final_value();
}

void append(std::string& out, const char* name, double value) {
    if (!out.empty()) out += ';';
    out += name;
    out += '=';
    out += format_number(value);
}

double max_final(const Instance& instance) { return best_terminal(instance).value; }

struct RunOutcome {
    double reward = 0.0;
    double chosen_final = 0.0;
    bool best = false;
    std::vector<double> losses;
};

RunOutcome summarize(const EpisodeTrace& trace, const Instance& instance,
                     const std::vector<LossSpec>& losses) {
    RunOutcome out;
    out.reward = trace.reward;
    out.chosen_final = instance.arm(trace.chosen).final_value();
    out.best = out.chosen_final >= max_final(instance) - kCurveTolerance;
    out.losses.reserve(losses.size());
    for (const auto& spec : losses) out.losses.push_back(loss(trace, instance, spec));
    return out;
}

// Index-ordered reduction so that the reported means do not depend on the thread count.
EvalReport reduce(std::vector<RunOutcome> runs, const Instance& instance,
                  const std::vector<LossSpec>& losses, EvalMethod method) {
    EvalReport report;
    report.method = method;
    report.n = runs.size();
    report.losses = losses;
    const double n = static_cast<double>(runs.size());
    double reward = 0.0;
    double chosen = 0.0;
    double hits = 0.0;
    std::vector<double> loss_sum(losses.size(), 0.0);
    for (const auto& run : runs) {
        reward += run.reward;
        chosen += run.chosen_final;
        hits += run.best ? 1.0 : 0.0;
        for (std::size_t j = 0; j < losses.size(); ++j) loss_sum[j] += run.losses[j];
    }
    report.mean_reward = reward / n;
    report.mean_chosen_final = chosen / n;
    report.p_best_arm = hits / n;
    report.ratio = opt_cumulative(instance).value / report.mean_reward;
    for (double s : loss_sum) report.loss_means.push_back(s / n);

    double reward_sq = 0.0;
    std::vector<double> loss_sq(losses.size(), 0.0);
    for (const auto& run : runs) {
        reward_sq += (run.reward - report.mean_reward) * (run.reward - report.mean_reward);
        for (std::size_t j = 0; j < losses.size(); ++j) {
            const double d = run.losses[j] - report.loss_means[j];
            loss_sq[j] += d * d;
        }
    }
    report.reward_variance = reward_sq / n;
    if (method == EvalMethod::mc) {
        // sample standard deviation over sqrt(n); zero for a single run
        const double denom = n > 1.0 ? (n - 1.0) * n : 1.0;
        report.reward_std_error = n > 1.0 ? std::sqrt(reward_sq / denom) : 0.0;
        for (double s : loss_sq) report.loss_std_errors.push_back(n > 1.0 ? std::sqrt(s / denom) : 0.0);
    }
    return report;
}

}  // namespace

std::string algo_name(const AlgorithmSpec& spec) {
    return std::visit(overloaded{
                          [](const PtrrSpec&) { return std::string("ptrr"); },
                          [](const HybridSpec&) { return std::string("hybrid"); },
                          [](const CumulativeHybridSpec&) { return std::string("cumulative_hybrid"); },
                          [](const RegretHybridSpec&) { return std::string("regret_hybrid"); },
                          [](const EnvelopeGreedySpec&) { return std::string("envelope_greedy"); },
                          [](const DoublingSpec&) { return std::string("doubling_ptrr"); },
                      },
                      spec);
}

std::string spec_params(const AlgorithmSpec& spec) {
    std::string out;
    auto hybrid_like = [&out](double alpha, Pulls b, const std::optional<double>& m) {
        append(out, "alpha", alpha);
        append(out, "B", static_cast<double>(b));
        if (m) append(out, "m_terminal", *m);
    };
    std::visit(overloaded{
                   [&](const PtrrSpec& s) {
                       append(out, "alpha", s.alpha);
                       if (s.m) append(out, "m", *s.m);
                       if (s.tau) append(out, "tau", static_cast<double>(*s.tau));
                   },
                   [&](const HybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [&](const CumulativeHybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [&](const RegretHybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [](const EnvelopeGreedySpec&) {},
                   [&](const DoublingSpec& s) {
                       append(out, "alpha", s.alpha);
                       out += ";estimator=" + s.estimator;
                   },
               },
               spec);
    return out;
}

EpisodeTrace run_episode(const AlgorithmSpec& spec, const Instance& instance, const Permutation& order) {
    const Pulls horizon = instance.horizon();
    return std::visit(
        overloaded{
            [&](const PtrrSpec& s) {
                const double m = s.m ? *s.m : default_m(instance);
                const Pulls tau = s.tau ? *s.tau : default_tau(instance);
                return ptrr_run(instance, s.alpha, m, tau, order, horizon);
            },
            [&](const HybridSpec& s) {
                return hybrid_run(instance, s.alpha, s.budget_b, terminal_default(instance, s.m_terminal),
                                  order);
            },
            [&](const CumulativeHybridSpec& s) {
                return cumulative_hybrid_run(instance, s.alpha, s.budget_b,
                                             terminal_default(instance, s.m_terminal), order);
            },
            [&](const RegretHybridSpec& s) {
                return regret_hybrid_run(instance, s.alpha, s.budget_b,
                                         terminal_default(instance, s.m_terminal), order);
            },
            [&](const EnvelopeGreedySpec&) { return envelope_greedy_run(instance, horizon); },
            [&](const DoublingSpec& s) {
                Estimator estimator;
                if (s.estimator == "oracle") estimator = oracle_estimator(instance);
                else if (s.estimator == "round_robin_max") estimator = round_robin_max_estimator();
                else throw DomainError("unknown estimator '" + s.estimator + "'");
                return doubling_ptrr_run(instance, s.alpha, estimator, order);
            },
        },
        spec);
}

EpisodeTrace run_episode(const AlgorithmSpec& spec, const Instance& instance, std::uint64_t seed) {
    Rng rng(seed);
    return run_episode(spec, instance, shuffled_permutation(instance.k(), rng));
}

std::string_view to_string(LossKind kind) {
    switch (kind) {
        case LossKind::avg_regret: return "avg_regret";
        case LossKind::max_pull_regret: return "max_pull_regret";
        case LossKind::bai_failure: return "bai_failure";
    }
    return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
    for (auto kind : {LossKind::avg_regret, LossKind::max_pull_regret, LossKind::bai_failure}) {
        if (to_string(kind) == name) return kind;
    }
    throw DomainError("unknown loss '" + std::string(name) + "'");
}

double resolved_h_bound(const LossSpec& spec, const Instance& instance) {
    if (spec.h_bound) {
        if (!(*spec.h_bound > 0.0)) throw DomainError("loss bound H must be positive");
        return *spec.h_bound;
    }
    return spec.kind == LossKind::bai_failure ? 1.0 : max_final(instance);
}

double loss(const EpisodeTrace& trace, const Instance& instance, const LossSpec& spec) {
    const double h = resolved_h_bound(spec, instance);
    double value = 0.0;
    switch (spec.kind) {
        case LossKind::avg_regret:
            value = (opt_cumulative(instance).value - trace.reward) / static_cast<double>(instance.horizon());
            break;
        case LossKind::max_pull_regret: {
            double reached = 0.0;
            for (std::size_t i = 0; i < instance.k(); ++i) {
                reached = std::max(reached, instance.arm(i)(trace.arm_pulls[i]));
            }
            value = max_final(instance) - reached;
            break;
        }
        case LossKind::bai_failure:
            value = instance.arm(trace.chosen).final_value() < max_final(instance) - kCurveTolerance ? 1.0 : 0.0;
            break;
    }
    return std::clamp(value, 0.0, h);
}

std::vector<LossSpec> standard_losses() {
    return {{LossKind::avg_regret, std::nullopt},
            {LossKind::max_pull_regret, std::nullopt},
            {LossKind::bai_failure, std::nullopt}};
}

std::uint64_t factorial(std::size_t k) {
    std::uint64_t out = 1;
    for (std::size_t i = 2; i <= k; ++i) out *= i;
    return out;
}

Permutation nth_permutation(std::size_t k, std::uint64_t index) {
    if (index >= factorial(k)) throw DomainError("permutation index out of range");
    std::vector<std::size_t> pool(k);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Permutation out;
    out.reserve(k);
    for (std::size_t slot = k; slot > 0; --slot) {
        const std::uint64_t block = factorial(slot - 1);
        const auto pick = static_cast<std::size_t>(index / block);
        index %= block;
        out.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

EvalReport expected_metrics_exact(const AlgorithmSpec& spec, const Instance& instance,
                                  const std::vector<LossSpec>& losses, std::size_t k_max) {
    if (instance.k() > k_max)
        throw DomainError("exact evaluation enumerates k! orders and is limited to k <= " +
                          std::to_string(k_max) + "; use Monte Carlo for k = " +
                          std::to_string(instance.k()));
    const auto count = static_cast<std::size_t>(factorial(instance.k()));
    std::vector<RunOutcome> runs(count);
    parallel_for(count, [&](std::size_t i) {
        runs[i] = summarize(run_episode(spec, instance, nth_permutation(instance.k(), i)), instance, losses);
    });
    return reduce(std::move(runs), instance, losses, EvalMethod::exact);
}

EvalReport expected_metrics_mc(const AlgorithmSpec& spec, const Instance& instance,
                               const std::vector<LossSpec>& losses, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw DomainError("Monte Carlo needs n >= 1");
    Rng rng(seed);
    std::vector<Permutation> orders;
    orders.reserve(n);
    for (std::size_t i = 0; i < n; ++i) orders.push_back(shuffled_permutation(instance.k(), rng));
    std::vector<RunOutcome> runs(n);
    parallel_for(n, [&](std::size_t i) {
        runs[i] = summarize(run_episode(spec, instance, orders[i]), instance, losses);
    });
    return reduce(std::move(runs), instance, losses, EvalMethod::mc);
}

std::string_view to_string(EvalMethod method) { return method == EvalMethod::exact ? "exact" : "mc"; }

std::string eval_csv_header() {
    return "algo,variant-params,method,n,mean_reward,ratio,p_best_arm,loss_avg_regret,loss_max_pull_regret";
}

std::string eval_csv_row(const AlgorithmSpec& spec, const EvalReport& report) {
    auto loss_of = [&report](LossKind kind) {
        for (std::size_t j = 0; j < report.losses.size(); ++j) {
            if (report.losses[j].kind == kind) return format_number(report.loss_means[j]);
        }
        return std::string("nan");
    };
    std::string row = algo_name(spec);
    row += ',' + spec_params(spec);
    row += ',' + std::string(to_string(report.method));
    row += ',' + std::to_string(report.n);
    row += ',' + format_number(report.mean_reward);
    row += ',' + format_number(report.ratio);
    row += ',' + format_number(report.p_best_arm);
    row += ',' + loss_of(LossKind::avg_regret);
    row += ',' + loss_of(LossKind::max_pull_regret);
    return row;
}

}  // namespace imab
