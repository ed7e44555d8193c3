// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero when any criterion fails
// unless it is listed in kKnownFailures (documented in README.md).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "imab/algorithms.hpp"
#include "imab/engine.hpp"
#include "imab/instances.hpp"
#include "imab/theory.hpp"
#include "imab/tuning.hpp"

using namespace imab;

namespace {

// Tolerances pinned from the criteria text.
constexpr double kAreaSlack = 1e-9;       // criterion 3
constexpr double kGenerousSlack = 1e-9;   // criterion 4
constexpr double kEnvelopeSlack = 1e-9;   // criterion 5, relative, for summation rounding
constexpr double kGridStep = 1e-4;        // criterion 8
constexpr double kMinVarTol = 1e-9;       // criterion 10

// Criteria that cannot hold as stated; see README.md.
const std::set<int> kKnownFailures = {10, 11};

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ---------------------------------------------------------------- 1

Outcome upper_bound() {
    double worst = 1e300;
    std::string where;
    bool ok = true;
    for (double beta : {0.25, 0.5, 0.75, 1.0}) {
        for (long long k = 2; k <= 7; ++k) {
            const Pulls t = 64 * k;
            const auto inst = make_hard_family(static_cast<std::size_t>(k), t, 1.0, beta, t / 4, 0);
            const double alpha = std::min(1.0, beta + 0.05);
            const double m = static_cast<double>(t - k) / static_cast<double>(t) * best_final_curve(inst).final_value();
            const auto report = expected_metrics_exact(PtrrSpec{alpha, m, t - k}, inst, {});
            const double bound = ptrr_bound_factor(alpha, k) * opt_cumulative(inst).value;
            const double margin = report.mean_reward / bound;
            if (!(report.mean_reward > bound)) ok = false;
            if (margin < worst) {
                worst = margin;
                where = fmt("beta=%g k=%lld", beta, k);
            }
        }
    }
    return {ok, fmt("24 settings; smallest E[reward]/bound = %.3f at %s", worst, where.c_str())};
}

// ---------------------------------------------------------------- 2

Outcome never_drop() {
    Rng rng(2);
    int instances = 0;
    long failures = 0;
    long checks = 0;
    long dropped_in_run = 0;
    while (instances < 500) {
        const auto inst = test::random_instance(rng, 8, 200);
        const double beta = cee(inst);
        if (beta + 0.01 >= 1.0) continue;
        ++instances;
        const double alpha = rng.uniform(beta + 0.01, 1.0);
        const Pulls tau = default_tau(inst);
        const auto best_arm = best_terminal(inst).arm;
        const auto& best = inst.arm(best_arm);
        const double m_max =
            best.final_value() * std::pow(static_cast<double>(tau) / static_cast<double>(inst.horizon()), alpha);
        const double m = m_max * (1.0 - rng.uniform());  // (0, m_max]
        for (Pulls t = 0; t <= inst.horizon(); ++t) {
            ++checks;
            if (!keep_test(best(t), t, m, tau, alpha)) ++failures;
        }
        const auto trace = ptrr_run(inst, alpha, m, tau, shuffled_permutation(inst.k(), rng), inst.horizon());
        for (const auto& stop : trace.stops) {
            if (stop.arm == best_arm && stop.abandoned) ++dropped_in_run;
        }
    }
    return {failures == 0 && dropped_in_run == 0,
            fmt("500 instances, %ld keep-tests on the best arm, %ld failures, %ld abandonments in runs", checks,
                failures, dropped_in_run)};
}

// ---------------------------------------------------------------- 3

Outcome area_bound() {
    Rng rng(3);
    long events = 0;
    long failures = 0;
    double tightest = 1e300;
    for (int episode = 0; episode < 500; ++episode) {
        const auto inst = test::random_instance(rng, 8, 200);
        const double alpha = 1.0 - rng.uniform();
        const Pulls tau = default_tau(inst);
        const double m = default_m(inst);
        const auto trace = ptrr_run(inst, alpha, m, tau, shuffled_permutation(inst.k(), rng), inst.horizon());
        const double coeff = misc_bounds(alpha, 1, m, tau).area_coeff;
        for (const auto& stop : trace.stops) {
            if (!stop.abandoned) continue;
            ++events;
            const double need = coeff * std::pow(static_cast<double>(stop.t_stop - 1), alpha + 1.0);
            if (stop.accrued < need - kAreaSlack) ++failures;
            tightest = std::min(tightest, stop.accrued - need);
        }
    }
    return {failures == 0 && events > 0,
            fmt("500 episodes, %ld abandonments, %ld violations, min slack %.3g", events, failures, tightest)};
}

// ---------------------------------------------------------------- 4

// Per-arm counts and per-instance rewards of a deterministic policy on D_s plus the all-bad instance.
struct ScheduleEval {
    std::vector<Pulls> counts;  // on the all-bad instance
    double mean_reward = 0.0;   // over the k good-index instances
};

ScheduleEval evaluate_schedule(const std::function<EpisodeTrace(const Instance&)>& policy,
                               const std::vector<Instance>& family, const Instance& all_bad) {
    ScheduleEval out;
    out.counts = policy(all_bad).arm_pulls;
    double total = 0.0;
    for (const auto& inst : family) total += policy(inst).reward;
    out.mean_reward = total / static_cast<double>(family.size());
    return out;
}

EpisodeTrace round_robin(const Instance& inst) {
    EpisodeTrace trace;
    trace.arm_pulls.assign(inst.k(), 0);
    for (Pulls n = 0; n < inst.horizon(); ++n) {
        const auto arm = static_cast<std::size_t>(n) % inst.k();
        const Pulls t = ++trace.arm_pulls[arm];
        trace.reward += inst.arm(arm)(t);
        trace.pulls.push_back({n + 1, arm, t, inst.arm(arm)(t)});
    }
    return trace;
}

Outcome lower_bound_family() {
    bool ok = true;
    long schedules = 0;
    double worst_gap = 1e300;   // generous - mean, smallest
    double worst_ratio = 0.0;   // (generous/OPT) / (1.5 h(x*)), largest
    for (double beta : {0.5, 1.0}) {
        for (long long k : {4LL, 8LL}) {
            const auto lb = lb_params(beta, k);
            const Pulls t = 128;
            if (static_cast<double>(t) < lb.t_min) return {false, "T below T_min"};
            const auto s = static_cast<Pulls>(std::floor(lb.x_star * static_cast<double>(t)));
            const auto kk = static_cast<std::size_t>(k);
            std::vector<Instance> family;
            for (std::size_t g = 0; g < kk; ++g) family.push_back(make_hard_family(kk, t, 1.0, beta, s, g));
            std::vector<RewardCurve> bad(kk, RewardCurve::power_flat(1.0, beta, s, t));
            const Instance all_bad(bad, "all-bad");
            const double opt = hard_family_opt(1.0, beta, t);

            auto check = [&](const ScheduleEval& e) {
                ++schedules;
                const double gen = generous_value(e.counts, s, beta, k, 1.0, t);
                if (!(e.mean_reward <= gen + kGenerousSlack)) ok = false;
                if (!(gen / opt <= lb.ratio_bound + kGenerousSlack)) ok = false;
                worst_gap = std::min(worst_gap, gen - e.mean_reward);
                worst_ratio = std::max(worst_ratio, gen / opt / lb.ratio_bound);
            };

            // PTRR thresholds use the family's common f*(T) = 1 so the policy is the same on every draw.
            const double m = static_cast<double>(t - k) / static_cast<double>(t);
            std::vector<double> alphas{std::min(1.0, beta + 0.05)};
            if (alphas[0] != 1.0) alphas.push_back(1.0);
            for (double alpha : alphas) {
                Permutation order = identity_permutation(kk);
                do {
                    check(evaluate_schedule(
                        [&](const Instance& inst) { return ptrr_run(inst, alpha, m, t - k, order, t); }, family,
                        all_bad));
                } while (std::next_permutation(order.begin(), order.end()));
            }
            check(evaluate_schedule([&](const Instance& inst) { return envelope_greedy_run(inst, t); }, family,
                                    all_bad));
            check(evaluate_schedule(round_robin, family, all_bad));
        }
    }
    return {ok, fmt("%ld schedules; min (generous - mean) = %.4g; max (generous/OPT)/(1.5 h(x*)) = %.4f", schedules,
                    worst_gap, worst_ratio)};
}

// ---------------------------------------------------------------- 5

Outcome envelope_soundness() {
    Rng rng(5);
    long steps = 0;
    long violations = 0;
    auto bad = [](double lhs, double rhs) { return lhs > rhs + kEnvelopeSlack * (1.0 + std::abs(rhs)); };
    for (int trial = 0; trial < 500; ++trial) {
        const auto inst = test::random_instance(rng, 8, 200);
        const auto totals = cumulative_totals(inst);
        const auto order = shuffled_permutation(inst.k(), rng);
        const double mt = best_final_curve(inst).final_value();
        const auto terminal = [&](Pulls, std::span<const EnvelopeEntry> env) {
            ++steps;
            for (std::size_t i = 0; i < env.size(); ++i) {
                const double f = inst.arm(i).final_value();
                violations += bad(env[i].lower, f) || bad(f, env[i].upper);
            }
        };
        const auto cumulative = [&](Pulls, std::span<const EnvelopeEntry> env) {
            ++steps;
            for (std::size_t i = 0; i < env.size(); ++i) {
                violations += bad(env[i].lower, totals[i]) || bad(totals[i], env[i].upper);
            }
        };
        hybrid_run(inst, 1.0, inst.horizon(), mt, order, Envelope::terminal, terminal);
        hybrid_run(inst, 1.0, inst.horizon(), mt, order, Envelope::cumulative, cumulative);
    }
    return {violations == 0, fmt("500 instances, %ld envelope snapshots, %ld violations", steps, violations)};
}

// ---------------------------------------------------------------- 6

RewardCurve gcc_arm(Rng& rng, double final_value, Pulls t) {
    switch (rng.below(3)) {
        case 0: return RewardCurve::constant(final_value, t);
        case 1: {
            // power flattening early; scale so that the flat level equals final_value
            const double beta = rng.uniform(0.2, 1.0);
            const auto s = static_cast<Pulls>(1 + rng.below(static_cast<std::uint64_t>(std::max<Pulls>(1, t / 16))));
            const double m = final_value / std::pow(static_cast<double>(s) / static_cast<double>(t), beta);
            return RewardCurve::power_flat(m, beta, s, t);
        }
        default: {
            const auto reach = static_cast<Pulls>(1 + rng.below(static_cast<std::uint64_t>(std::max<Pulls>(1, t / 16))));
            std::vector<double> v(static_cast<std::size_t>(t));
            for (Pulls n = 1; n <= t; ++n) {
                v[static_cast<std::size_t>(n - 1)] =
                    final_value * static_cast<double>(std::min(n, reach)) / static_cast<double>(reach);
            }
            return RewardCurve::table(std::move(v), t);
        }
    }
}

Outcome gcc_commit() {
    Rng rng(6);
    int generated = 0;
    long runs = 0;
    long failures = 0;
    long drawn = 0;
    while (generated < 100) {
        ++drawn;
        const auto k = static_cast<std::size_t>(2 + rng.below(5));
        const auto t = static_cast<Pulls>(40 + rng.below(161));
        const double top = rng.uniform(0.5, 1.0);
        std::vector<RewardCurve> arms;
        const auto best = static_cast<std::size_t>(rng.below(k));
        for (std::size_t i = 0; i < k; ++i) {
            const double v = i == best ? top : rng.uniform(0.05, 0.9) * top;
            arms.push_back(gcc_arm(rng, v, t));
        }
        const Instance inst(std::move(arms));
        const std::vector<Pulls> queries{t / 2};
        const auto report = gap_report(inst, queries);
        const auto& side = report.terminal;
        if (!(side.delta > 0.0) || !side.budget_sum || *side.budget_sum > t / 2) continue;
        ++generated;
        const auto order = shuffled_permutation(k, rng);
        for (Pulls b = *side.budget_sum + 1; b <= t / 2; ++b) {
            ++runs;
            const auto trace = hybrid_run(inst, 1.0, b, top, order);
            if (!trace.commit_time || trace.chosen != side.best_arm) ++failures;
        }
    }
    return {failures == 0 && runs > 0,
            fmt("100 instances (%ld drawn), %ld (instance, B) runs, %ld without a correct stage-1 commit", drawn, runs,
                failures)};
}

// ---------------------------------------------------------------- 7

Outcome hybrid_fallback() {
    bool ok = true;
    std::string detail;
    for (Pulls t : {64, 128, 256}) {
        const auto inst = make_example(Example::ex2, 4, t);
        const auto report = expected_metrics_exact(HybridSpec{1.0, t / 2, std::nullopt}, inst, {});
        const double bound = misc_bounds(1.0, 4).hybrid_fallback * best_final_curve(inst).final_value();
        if (!(report.mean_chosen_final > bound)) ok = false;
        detail += fmt("T=%lld: E[f(T)]=%.4f vs %.3g; ", static_cast<long long>(t), report.mean_chosen_final, bound);
    }
    return {ok, detail};
}

// ---------------------------------------------------------------- 8

Outcome dual_complexity() {
    Rng rng(8);
    const LossSpec spec{LossKind::avg_regret, std::nullopt};
    long grid_points = 0;
    long mismatches = 0;
    long bound_breaks = 0;
    std::size_t max_ptrr = 0;
    std::size_t max_hybrid = 0;
    const int steps = static_cast<int>(std::lround(1.0 / kGridStep));
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = test::random_instance(rng, 4, 32);
        const auto order = shuffled_permutation(inst.k(), rng);
        const auto kt = inst.k() * static_cast<std::size_t>(inst.horizon());
        const double m = default_m(inst);
        const Pulls tau = default_tau(inst);
        const double mt = best_final_curve(inst).final_value();

        const auto ptrr = dual_profile_ptrr(inst, order, spec, m, tau);
        if (ptrr.trace_pieces > kt) ++bound_breaks;
        max_ptrr = std::max(max_ptrr, ptrr.trace_pieces);
        const auto hybrid = dual_profile_hybrid(inst, order, spec, mt);
        std::size_t hybrid_traces = 0;
        for (const auto& p : hybrid.per_budget) hybrid_traces += p.trace_pieces;
        if (hybrid_traces > kt * static_cast<std::size_t>(inst.horizon())) ++bound_breaks;
        max_hybrid = std::max(max_hybrid, hybrid_traces);

        for (int i = 1; i <= steps; ++i) {
            const double alpha = i * kGridStep;
            ++grid_points;
            const auto direct = loss(ptrr_run(inst, alpha, m, tau, order, inst.horizon()), inst, spec);
            mismatches += ptrr.value_at(alpha) != direct;
            for (Pulls b = 0; b <= inst.horizon(); ++b) {
                ++grid_points;
                const auto h = loss(hybrid_run(inst, alpha, b, mt, order), inst, spec);
                mismatches += hybrid.value_at(alpha, b) != h;
            }
        }
    }
    return {mismatches == 0 && bound_breaks == 0,
            fmt("100 instances, %ld grid points, %ld mismatches; piece bounds broken %ld times (max %zu ptrr, "
                "%zu hybrid traces)",
                grid_points, mismatches, bound_breaks, max_ptrr, max_hybrid)};
}

// ---------------------------------------------------------------- 9

Outcome uniform_convergence() {
    const std::size_t k = 3;
    const Pulls t = 24;
    const std::vector<Instance> support = {make_hard_family(k, t, 1.0, 0.3, 6, 0), make_example(Example::ex1, k, t),
                                           make_example(Example::ex3, k, t)};
    const std::vector<double> weights = {0.5, 0.3, 0.2};
    const LossSpec spec{LossKind::avg_regret, 1.0};
    const double eps = 0.2;
    const double delta = 0.2;
    const auto n = sample_complexity(1.0, eps, delta, static_cast<double>(k) * static_cast<double>(t), 1.0);

    // Every (instance, order) profile; the population is their weighted average.
    const auto perms = factorial(k);
    std::vector<std::vector<DualProfile>> profiles(support.size());
    std::vector<double> points;
    for (std::size_t i = 0; i < support.size(); ++i) {
        for (std::uint64_t p = 0; p < perms; ++p) {
            const auto& inst = support[i];
            profiles[i].push_back(dual_profile_ptrr(inst, nth_permutation(k, p), spec, default_m(inst),
                                                    default_tau(inst)));
            for (const auto& piece : profiles[i].back().pieces) points.push_back(piece.lo);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<double> population(points.size(), 0.0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        for (std::size_t i = 0; i < support.size(); ++i) {
            double sum = 0.0;
            for (const auto& prof : profiles[i]) sum += prof.value_at(points[j]);
            population[j] += weights[i] * sum / static_cast<double>(perms);
        }
    }
    const double pop_min = *std::min_element(population.begin(), population.end());
    auto population_at = [&](double alpha) {
        const auto it = std::upper_bound(points.begin(), points.end(), alpha);
        return population[static_cast<std::size_t>(it - points.begin()) - 1];
    };

    Rng rng(9);
    int good = 0;
    int erm_ok = 0;
    double worst_dev = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<DualProfile> sample;
        std::vector<double> empirical(points.size(), 0.0);
        for (std::uint64_t s = 0; s < n; ++s) {
            const double u = rng.uniform();
            std::size_t i = 0;
            for (double acc = weights[0]; i + 1 < weights.size() && u >= acc; acc += weights[++i]) {
            }
            const auto order = shuffled_permutation(k, rng);
            std::uint64_t index = 0;
            for (std::uint64_t p = 0; p < perms; ++p) {
                if (nth_permutation(k, p) == order) index = p;
            }
            sample.push_back(profiles[i][index]);
            for (std::size_t j = 0; j < points.size(); ++j) empirical[j] += sample.back().value_at(points[j]);
        }
        double dev = 0.0;
        for (std::size_t j = 0; j < points.size(); ++j) {
            dev = std::max(dev, std::abs(empirical[j] / static_cast<double>(n) - population[j]));
        }
        worst_dev = std::max(worst_dev, dev);
        if (dev <= eps) {
            ++good;
            const auto erm = erm_over_profiles(sample);
            if (population_at(erm.alpha_hat) <= pop_min + 2.0 * eps) ++erm_ok;
        }
    }
    const bool ok = good >= 160 && erm_ok == good;
    return {ok, fmt("N=%llu, %zu breakpoints; %d/200 trials within eps (need 160), ERM within 2eps in %d/%d; "
                    "worst deviation %.4f",
                    static_cast<unsigned long long>(n), points.size(), good, erm_ok, good, worst_dev)};
}

// ---------------------------------------------------------------- 10

Outcome numeric_lemmas() {
    long failures = 0;
    // balancing inequality
    long balance = 0;
    for (int a = 1; a <= 100; ++a) {
        const double alpha = a / 100.0;
        for (long long kp = 1; kp <= 1'000'000; ++kp) {
            ++balance;
            failures += !balance_check(kp, alpha).holds;
        }
    }
    const long after_balance = failures;

    // one-variable minimum against a 10^6-point grid
    Rng rng(10);
    double worst_min = 0.0;
    int closed_above_grid = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double u = rng.uniform(0.1, 10.0);
        const double v = rng.uniform(0.1, 10.0);
        const double p = rng.uniform(1.1, 3.0);
        const auto closed = one_var_min(u, v, p);
        double grid = 1e300;
        for (int i = 0; i <= 1'000'000; ++i) grid = std::min(grid, one_var_objective(u, v, p, i * 1e-6));
        const double diff = std::abs(grid - closed.value);
        worst_min = std::max(worst_min, diff);
        failures += diff > kMinVarTol;
        closed_above_grid += closed.value > grid + kMinVarTol;
    }
    const long after_min = failures;

    // recurrence against its closed form
    long cells = 0;
    for (double alpha : {0.3, 0.6, 1.0}) {
        for (long long kp = 1; kp <= 8; ++kp) {
            for (Pulls tp = 0; tp <= 200; ++tp) {
                ++cells;
                failures += recurrence_value(tp, kp, 1.0, 200, alpha) < recurrence_closed_form(tp, kp, 1.0, 200, alpha);
            }
        }
    }
    const long after_rec = failures;

    // rounding: h(a x*) / h(x*) <= 3/2
    double worst_round = 0.0;
    for (int b = 1; b <= 20; ++b) {
        const double beta = b / 20.0;
        for (long long k : {2LL, 3LL, 4LL, 8LL, 16LL, 64LL, 1024LL}) {
            const auto lb = lb_params(beta, k);
            for (int i = 0; i < 10'000; ++i) {
                const double a = 0.5 + 0.5 * i / 9'999.0;
                const double r = lb_h(a * lb.x_star, beta, k) / lb.h_at_x_star;
                worst_round = std::max(worst_round, r);
                failures += r > 1.5;
            }
        }
    }
    return {failures == 0,
            fmt("balance %ld checks/%ld fail; one_var_min worst |grid-closed| %.2g (%ld fail, closed form above the "
                "grid in %d); recurrence %ld cells/%ld fail; rounding max ratio %.4f (%ld fail)",
                balance, after_balance, worst_min, after_min - after_balance, closed_above_grid, cells,
                after_rec - after_min, worst_round, failures - after_rec)};
}

// ---------------------------------------------------------------- 11

Outcome motivating_examples() {
    const std::size_t k = 4;
    const Pulls t = 40;
    const auto ex1 = make_example(Example::ex1, k, t);
    // PTRR clause: P(f_chosen(T) <= f*(T)/2) >= 1 - 2/k by exact enumeration.
    // Hybrid clause: terminal Hybrid at B = T/2 commits to i* for every order.
    int half = 0;
    int commits_best = 0;
    int any_b_commits = 0;
    int cumulative_commits = 0;
    const auto perms = factorial(k);
    for (std::uint64_t p = 0; p < perms; ++p) {
        const auto order = nth_permutation(k, p);
        const auto trace = run_episode(PtrrSpec{1.0}, ex1, order);
        half += ex1.arm(trace.chosen).final_value() <= 0.5 * best_final_curve(ex1).final_value();
        const auto h = hybrid_run(ex1, 1.0, t / 2, 1.0, order);
        commits_best += h.commit_time.has_value() && h.chosen == 0;
        for (Pulls b = 0; b <= t; ++b) any_b_commits += hybrid_run(ex1, 1.0, b, 1.0, order).commit_time.has_value();
        const auto c = cumulative_hybrid_run(ex1, 1.0, t / 2, 1.0, order);
        cumulative_commits += c.commit_time.has_value() && c.chosen == 0;
    }
    const bool ptrr_ok = static_cast<double>(half) / static_cast<double>(perms) >= 1.0 - 2.0 / static_cast<double>(k);
    const bool hybrid_ok = commits_best == static_cast<int>(perms);

    // EnvelopeGreedy on ex2: T/k +- 1 pulls per arm, and the chosen arm's pulled value <= 2 f*(T)/k
    const auto ex2 = make_example(Example::ex2, k, t);
    const auto g = envelope_greedy_run(ex2, t);
    bool even = true;
    for (Pulls c : g.arm_pulls) even = even && std::abs(c - t / static_cast<Pulls>(k)) <= 1;
    const double pulled = ex2.arm(g.chosen)(g.arm_pulls[g.chosen]);
    const bool greedy_ok = even && pulled <= 2.0 * best_final_curve(ex2).final_value() / static_cast<double>(k);

    return {ptrr_ok && hybrid_ok && greedy_ok,
            fmt("ex1 PTRR P(half)=%d/%d [%s]; terminal Hybrid B=T/2 commits to i* in %d/%d [%s] "
                "(commits over all B in [0,T]: %d; cumulative Hybrid B=T/2: %d/%d); "
                "ex2 greedy pulls %lld,%lld,%lld,%lld chosen value %.3f [%s]",
                half, static_cast<int>(perms), ptrr_ok ? "ok" : "fail", commits_best, static_cast<int>(perms),
                hybrid_ok ? "ok" : "fail", any_b_commits, cumulative_commits, static_cast<int>(perms),
                static_cast<long long>(g.arm_pulls[0]), static_cast<long long>(g.arm_pulls[1]),
                static_cast<long long>(g.arm_pulls[2]), static_cast<long long>(g.arm_pulls[3]), pulled,
                greedy_ok ? "ok" : "fail")};
}

// ---------------------------------------------------------------- 12

Outcome doubling() {
    Rng rng(12);
    bool ok = true;
    int cases = 0;
    double worst = 1e300;
    for (std::size_t k : {2u, 4u}) {
        const auto kk = static_cast<Pulls>(k);
        for (Pulls t : {8 * kk + 1, 32 * kk}) {
            std::vector<Instance> instances;
            for (double beta : {0.5, 1.0}) instances.push_back(make_hard_family(k, t, 1.0, beta, std::max<Pulls>(1, t / 4), 0));
            for (auto ex : {Example::ex1, Example::ex2, Example::ex3, Example::ex4}) instances.push_back(make_example(ex, k, t));
            for (int r = 0; r < 10; ++r) instances.push_back(make_random_concave(k, t, rng));
            for (const auto& inst : instances) {
                const double bound = doubling_exploit_factor(1.0, static_cast<long long>(k)) * opt_cumulative(inst).value;
                double total = 0.0;
                const auto perms = factorial(k);
                for (std::uint64_t p = 0; p < perms; ++p) {
                    const auto trace = doubling_ptrr_run(inst, 1.0, oracle_estimator(inst), nth_permutation(k, p));
                    const CycleRecord* last = nullptr;
                    for (const auto& cycle : trace.cycles) {
                        if (cycle.completed()) last = &cycle;
                    }
                    total += last ? last->exploit.reward : 0.0;
                }
                const double mean = total / static_cast<double>(perms);
                ++cases;
                if (!(mean > bound)) ok = false;
                worst = std::min(worst, mean / bound);
            }
        }
    }
    return {ok, fmt("%d (instance, k, T) cases, alpha=1; smallest exploit reward / bound = %.1f", cases, worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"upper bound", upper_bound},
        {"never-drop", never_drop},
        {"area bound", area_bound},
        {"lower-bound family", lower_bound_family},
        {"envelope soundness", envelope_soundness},
        {"hybrid commit under GCC", gcc_commit},
        {"hybrid fallback", hybrid_fallback},
        {"dual complexity", dual_complexity},
        {"ERM and uniform convergence", uniform_convergence},
        {"numeric lemmas", numeric_lemmas},
        {"motivating examples", motivating_examples},
        {"doubling wrapper", doubling},
    };
    int unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        const auto start = std::chrono::steady_clock::now();
        const Outcome o = criteria[i].second();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool known = kKnownFailures.count(id) > 0;
        std::printf("criterion %2d %s: %s (%.1fs) %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                    o.detail.c_str());
        if (!o.pass && known) std::printf("             known failure, see README\n");
        if (!o.pass && !known) ++unexpected;
        if (o.pass && known) std::printf("             listed as a known failure but passed\n");
        std::fflush(stdout);
    }
    return unexpected == 0 ? 0 : 1;
}
