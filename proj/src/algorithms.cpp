#include "imab/algorithms.hpp"

#include <algorithm>
#include <cmath>

#include "imab/error.hpp"

namespace imab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Mutable per-episode state; every pull goes through here so the trace stays consistent.
class Episode {
public:
    Episode(const Instance& instance, EpisodeTrace& trace) : instance_(instance), trace_(trace) {
        trace_.arm_pulls.assign(instance.k(), 0);
    }

    const Instance& instance() const { return instance_; }
    EpisodeTrace& trace() { return trace_; }
    std::size_t k() const { return instance_.k(); }
    Pulls horizon() const { return instance_.horizon(); }
    Pulls time() const { return static_cast<Pulls>(trace_.pulls.size()); }
    Pulls count(std::size_t arm) const { return trace_.arm_pulls[arm]; }
    double value(std::size_t arm) const { return instance_.arm(arm)(count(arm)); }

    double pull(std::size_t arm) {
        if (time() >= horizon()) throw DomainError("episode horizon exceeded");
        const Pulls t = ++trace_.arm_pulls[arm];
        const double r = instance_.arm(arm)(t);
        trace_.reward += r;
        trace_.pulls.push_back({time() + 1, arm, t, r});
        return r;
    }

    std::size_t best_current() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < k(); ++i) {
            if (value(i) > value(best)) best = i;
        }
        return best;
    }

    StageRecord open_stage(std::string name, Pulls nominal) const {
        StageRecord stage;
        stage.name = std::move(name);
        stage.start = time();
        stage.nominal = nominal;
        stage.actual = std::min(nominal, horizon() - time());
        stage.reward = trace_.reward;
        return stage;
    }

    void close_stage(StageRecord& stage) {
        stage.reward = trace_.reward - stage.reward;
        trace_.stages.push_back(stage);
    }

private:
    const Instance& instance_;
    EpisodeTrace& trace_;
};

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
}

void check_order(const Permutation& order, std::size_t k) {
    if (!is_permutation_of(order, k)) throw DomainError("order is not a permutation of the arms");
}

void check_budget(Pulls budget, Pulls horizon, const char* name) {
    if (budget < 0 || budget > horizon)
        throw DomainError(std::string(name) + " must lie in [0, T]");
}

// PTRR on the curves shifted by the arms' current counts, for `nominal` pulls.
void ptrr_stage(Episode& ep, double alpha, double m, Pulls tau, const Permutation& order,
                StageRecord& stage, std::vector<KeepProbe>* probes = nullptr) {
    const Pulls end = stage.start + stage.actual;
    const std::vector<Pulls> offsets = ep.trace().arm_pulls;
    for (std::size_t arm : order) {
        if (ep.time() >= end) break;
        double accrued = 0.0;
        bool abandoned = false;
        Pulls shifted = 0;
        for (;;) {
            shifted = ep.count(arm) - offsets[arm];
            if (probes) probes->push_back({ep.value(arm), shifted, m, tau});
            if (!keep_test(ep.value(arm), shifted, m, tau, alpha)) {
                abandoned = true;
                break;
            }
            if (ep.time() >= end) break;
            accrued += ep.pull(arm);
        }
        ep.trace().stops.push_back({arm, shifted, abandoned, accrued});
    }
    if (ep.time() < end) {
        const std::size_t best = ep.best_current();
        while (ep.time() < end) ep.pull(best);
    }
}

double terminal_upper(const RewardCurve& f, Pulls t, Pulls horizon) {
    if (t == 0) return kInf;
    return f(t) + static_cast<double>(horizon - t) * (f(t) - f(t - 1));
}

struct EnvelopeArm {
    double lower = 0.0;
    double upper = kInf;
    double accumulated = 0.0;  // F_i(t_i)
};

void refresh(EnvelopeArm& e, const RewardCurve& f, Pulls t, Pulls horizon, Envelope kind) {
    if (kind == Envelope::terminal) {
        e.lower = f(t);
        e.upper = terminal_upper(f, t, horizon);
        return;
    }
    const double rest = static_cast<double>(horizon - t);
    e.lower = e.accumulated + rest * f(t);
    e.upper = t == 0 ? kInf : e.lower + rest * (rest + 1.0) / 2.0 * (f(t) - f(t - 1));
}

void envelope_greedy_stage(Episode& ep, StageRecord& stage) {
    const Pulls end = stage.start + stage.actual;
    const Pulls horizon = ep.horizon();
    std::vector<double> upper(ep.k(), kInf);
    while (ep.time() < end) {
        std::size_t pick = 0;
        for (std::size_t i = 1; i < ep.k(); ++i) {
            const double a = upper[i];
            const double b = upper[pick];
            const bool tied = (a == b) || std::abs(a - b) <= kCurveTolerance;
            if (tied ? ep.count(i) < ep.count(pick) : a > b) pick = i;
        }
        ep.pull(pick);
        upper[pick] = terminal_upper(ep.instance().arm(pick), ep.count(pick), horizon);
    }
}

Pulls stage_two_tau(Pulls horizon, Pulls budget_b, std::size_t k) {
    return std::max<Pulls>(1, horizon - budget_b - static_cast<Pulls>(k));
}

class PhaseExplorer final : public Explorer {
public:
    PhaseExplorer(Episode& ep, Pulls limit) : ep_(ep), end_(ep.time() + limit) {}

    std::size_t k() const override { return ep_.k(); }
    Pulls remaining() const override { return end_ - ep_.time(); }
    Pulls pulls_of(std::size_t arm) const override { return ep_.count(arm); }

    double pull(std::size_t arm) override {
        if (remaining() <= 0) throw DomainError("explore phase is spent");
        if (arm >= ep_.k()) throw DomainError("arm index out of range");
        return ep_.pull(arm);
    }

private:
    Episode& ep_;
    Pulls end_;
};

}  // namespace

bool keep_test(double f_value, Pulls t_i, double m, Pulls tau, double alpha) {
    if (t_i == 0) return true;
    const double threshold = m * std::pow(static_cast<double>(t_i) / static_cast<double>(tau), alpha);
    return f_value >= threshold - kKeepTolerance;
}

const RewardCurve& best_final_curve(const Instance& instance) {
    return instance.arm(best_terminal(instance).arm);
}

bool check_m(const Instance& instance, double m, double alpha, double c2) {
    if (!(c2 >= 1.0)) throw DomainError("c2 must be at least 1");
    check_alpha(alpha);
    const auto& best = best_final_curve(instance);
    const Pulls horizon = instance.horizon();
    const Pulls head = std::max<Pulls>(0, horizon - static_cast<Pulls>(instance.k()));
    const double lower = best(head) / c2;
    const double upper =
        best.final_value() * std::pow(static_cast<double>(head) / static_cast<double>(horizon), alpha);
    return m >= lower - kCurveTolerance && m <= upper + kCurveTolerance;
}

Pulls default_tau(const Instance& instance) {
    return std::max<Pulls>(1, instance.horizon() - static_cast<Pulls>(instance.k()));
}

double default_m(const Instance& instance) {
    return static_cast<double>(default_tau(instance)) / static_cast<double>(instance.horizon()) *
           best_final_curve(instance).final_value();
}

EpisodeTrace ptrr_run(const Instance& instance, double alpha, double m, Pulls tau,
                      const Permutation& order, Pulls budget, std::vector<KeepProbe>* probes) {
    check_alpha(alpha);
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("m must be positive");
    if (tau < 1) throw DomainError("tau must be at least 1");
    check_order(order, instance.k());
    check_budget(budget, instance.horizon(), "budget");
    EpisodeTrace trace;
    Episode ep(instance, trace);
    auto stage = ep.open_stage("ptrr", budget);
    ptrr_stage(ep, alpha, m, tau, order, stage, probes);
    ep.close_stage(stage);
    trace.chosen = ep.best_current();
    return trace;
}

EpisodeTrace hybrid_run(const Instance& instance, double alpha, Pulls budget_b, double m_terminal,
                        const Permutation& order, Envelope envelope, const EnvelopeObserver& observer,
                        std::vector<KeepProbe>* probes) {
    check_alpha(alpha);
    if (!(m_terminal > 0.0) || !std::isfinite(m_terminal))
        throw DomainError("m_terminal must be positive");
    check_order(order, instance.k());
    check_budget(budget_b, instance.horizon(), "B");

    EpisodeTrace trace;
    Episode ep(instance, trace);
    const Pulls horizon = instance.horizon();
    const std::size_t k = instance.k();
    std::vector<EnvelopeArm> env(k);
    std::vector<EnvelopeEntry> view(k);
    for (std::size_t i = 0; i < k; ++i) refresh(env[i], instance.arm(i), 0, horizon, envelope);

    auto stage1 = ep.open_stage("stage1", budget_b);
    std::optional<std::size_t> committed;
    for (;;) {
        if (observer) {
            for (std::size_t i = 0; i < k; ++i) view[i] = {ep.count(i), env[i].lower, env[i].upper};
            observer(ep.time(), view);
        }
        if (ep.time() >= budget_b) break;
        std::size_t lead = 0;
        for (std::size_t i = 1; i < k; ++i) {
            if (env[i].lower > env[lead].lower) lead = i;
        }
        double rival = -kInf;
        for (std::size_t j = 0; j < k; ++j) {
            if (j != lead) rival = std::max(rival, env[j].upper);
        }
        // The margin keeps rounding in the slopes from certifying ties (e.g. U = 1 - ulp on a linear arm).
        if (env[lead].lower > rival + kCurveTolerance) {
            committed = lead;
            break;
        }
        std::size_t pick = 0;
        double widest = env[0].upper - env[0].lower;
        for (std::size_t i = 1; i < k; ++i) {
            const double slack = env[i].upper - env[i].lower;
            if (slack > widest) {
                widest = slack;
                pick = i;
            }
        }
        env[pick].accumulated += ep.pull(pick);
        refresh(env[pick], instance.arm(pick), ep.count(pick), horizon, envelope);
    }
    stage1.nominal = budget_b;
    stage1.actual = ep.time() - stage1.start;
    ep.close_stage(stage1);

    if (committed) {
        trace.commit_time = ep.time();
        trace.final_stage = 1;
        auto exploit = ep.open_stage("exploit", horizon - ep.time());
        while (ep.time() < horizon) ep.pull(*committed);
        ep.close_stage(exploit);
        trace.chosen = *committed;
        return trace;
    }

    trace.final_stage = 2;
    const Pulls tau = stage_two_tau(horizon, budget_b, k);
    const double m = static_cast<double>(tau) / static_cast<double>(horizon) * m_terminal;
    auto stage2 = ep.open_stage("stage2", horizon - budget_b);
    ptrr_stage(ep, alpha, m, tau, order, stage2, probes);
    ep.close_stage(stage2);
    trace.chosen = ep.best_current();
    return trace;
}

EpisodeTrace envelope_greedy_run(const Instance& instance, Pulls budget) {
    check_budget(budget, instance.horizon(), "budget");
    EpisodeTrace trace;
    Episode ep(instance, trace);
    auto stage = ep.open_stage("greedy", budget);
    envelope_greedy_stage(ep, stage);
    ep.close_stage(stage);
    trace.chosen = ep.best_current();
    return trace;
}

EpisodeTrace regret_hybrid_run(const Instance& instance, double alpha, Pulls budget_b,
                               double m_terminal, const Permutation& order) {
    check_alpha(alpha);
    if (!(m_terminal > 0.0) || !std::isfinite(m_terminal))
        throw DomainError("m_terminal must be positive");
    check_order(order, instance.k());
    check_budget(budget_b, instance.horizon(), "B");
    EpisodeTrace trace;
    Episode ep(instance, trace);
    const Pulls horizon = instance.horizon();
    auto stage1 = ep.open_stage("stage1", budget_b);
    envelope_greedy_stage(ep, stage1);
    ep.close_stage(stage1);

    trace.final_stage = 2;
    const Pulls tau = stage_two_tau(horizon, budget_b, instance.k());
    const double m = static_cast<double>(tau) / static_cast<double>(horizon) * m_terminal;
    auto stage2 = ep.open_stage("stage2", horizon - budget_b);
    ptrr_stage(ep, alpha, m, tau, order, stage2);
    ep.close_stage(stage2);
    trace.chosen = ep.best_current();
    return trace;
}

Estimator round_robin_max_estimator() {
    return [](Explorer& explorer, Pulls) {
        double best = 0.0;
        for (std::size_t j = 0; explorer.remaining() > 0; ++j) {
            best = std::max(best, explorer.pull(j % explorer.k()));
        }
        return best;
    };
}

Estimator oracle_estimator(const Instance& instance) {
    const RewardCurve best = best_final_curve(instance);
    return [best](Explorer& explorer, Pulls tau_prime) {
        for (std::size_t j = 0; explorer.remaining() > 0; ++j) explorer.pull(j % explorer.k());
        return best(std::clamp<Pulls>(tau_prime, 0, best.horizon()));
    };
}

EpisodeTrace doubling_ptrr_run(const Instance& instance, double alpha, const Estimator& estimator,
                               const Permutation& order) {
    check_alpha(alpha);
    check_order(order, instance.k());
    const Pulls horizon = instance.horizon();
    const auto k = static_cast<Pulls>(instance.k());
    if (horizon <= 4 * k) throw DomainError("the doubling wrapper needs T > 4k");
    if (!estimator) throw DomainError("missing estimator");

    EpisodeTrace trace;
    Episode ep(instance, trace);
    for (Pulls length = 4 * k; ep.time() < horizon; length *= 2) {
        CycleRecord cycle;
        cycle.length = length;
        const Pulls half = length / 2;
        cycle.tau = half - k;

        cycle.explore = ep.open_stage("explore", half);
        PhaseExplorer explorer(ep, cycle.explore.actual);
        cycle.m_hat = estimator(explorer, cycle.tau);
        cycle.explore.actual = ep.time() - cycle.explore.start;
        ep.close_stage(cycle.explore);
        cycle.explore = trace.stages.back();

        cycle.m = cycle.m_hat / (2.0 * std::pow(16.0, alpha));
        cycle.exploit = ep.open_stage("exploit", half);
        ptrr_stage(ep, alpha, cycle.m, cycle.tau, order, cycle.exploit);
        ep.close_stage(cycle.exploit);
        cycle.exploit = trace.stages.back();
        trace.cycles.push_back(cycle);
    }
    trace.final_stage = 2;
    trace.chosen = ep.best_current();
    return trace;
}

}  // namespace imab
