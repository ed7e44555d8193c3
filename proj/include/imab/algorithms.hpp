#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imab/instances.hpp"
#include "imab/random.hpp"

namespace imab {

// Slack on the keep-test comparison; thresholds are computed with pow() and the linear arms of the
// motivating examples sit exactly on the threshold.
inline constexpr double kKeepTolerance = 1e-12;

struct PullRecord {
    Pulls time;       // global time of the pull, 1-based
    std::size_t arm;
    Pulls arm_pulls;  // the arm's own count after the pull
    double reward;

    friend bool operator==(const PullRecord&, const PullRecord&) = default;
};

// One arm visit by a PTRR stage: where it stopped (in the stage's shifted pull units), whether the
// keep-test failed there, and the reward the visit accrued.
struct StopEvent {
    std::size_t arm;
    Pulls t_stop;
    bool abandoned;
    double accrued;

    friend bool operator==(const StopEvent&, const StopEvent&) = default;
};

struct StageRecord {
    std::string name;
    Pulls start = 0;    // global time before the stage's first pull
    Pulls nominal = 0;  // length the stage asked for
    Pulls actual = 0;   // length after truncation by the global budget
    double reward = 0.0;

    friend bool operator==(const StageRecord&, const StageRecord&) = default;
};

struct CycleRecord {
    Pulls length = 0;  // T' for this cycle
    Pulls tau = 0;     // T'/2 - k
    double m_hat = 0.0;
    double m = 0.0;
    StageRecord explore;
    StageRecord exploit;

    bool completed() const noexcept { return exploit.actual == exploit.nominal; }

    friend bool operator==(const CycleRecord&, const CycleRecord&) = default;
};

struct EpisodeTrace {
    std::vector<PullRecord> pulls;
    std::vector<Pulls> arm_pulls;
    double reward = 0.0;
    std::size_t chosen = 0;  // the returned arm
    int final_stage = 1;
    std::optional<Pulls> commit_time;  // set when a hybrid certified its arm in stage 1
    std::vector<StopEvent> stops;      // R_alpha in visit order, for every PTRR stage
    std::vector<StageRecord> stages;
    std::vector<CycleRecord> cycles;   // doubling wrapper only

    friend bool operator==(const EpisodeTrace&, const EpisodeTrace&) = default;
};


// f_value >= m (t_i/tau)^alpha, always true at t_i = 0.
bool keep_test(double f_value, Pulls t_i, double m, Pulls tau, double alpha);

// The arm with the largest final value: f* for threshold defaults.
const RewardCurve& best_final_curve(const Instance& instance);

// (1/c2) f*(T-k) <= m <= f*(T) ((T-k)/T)^alpha
bool check_m(const Instance& instance, double m, double alpha, double c2);

// Defaults used when a spec leaves m or tau unset: tau = max(1, T-k), m = (tau/T) f*(T).
Pulls default_tau(const Instance& instance);
double default_m(const Instance& instance);

// One keep-test evaluation: shifted pull count and the value it was compared against.
struct KeepProbe {
    double value;
    Pulls pulls;
    double m;
    Pulls tau;
};

// When `probes` is set, every keep-test evaluation is appended to it in call order.
EpisodeTrace ptrr_run(const Instance& instance, double alpha, double m, Pulls tau,
                      const Permutation& order, Pulls budget, std::vector<KeepProbe>* probes = nullptr);

struct EnvelopeEntry {
    Pulls pulls;
    double lower;
    double upper;  // +inf while unpulled
};

// Called once per stage-1 step with every arm's envelope, before the commit check.
using EnvelopeObserver = std::function<void(Pulls time, std::span<const EnvelopeEntry>)>;

enum class Envelope { terminal, cumulative };

// Two-stage best-arm identification. Stage 1 pulls the widest envelope until one arm's lower bound
// clears every other upper bound by more than kCurveTolerance (commit) or B pulls are spent; stage 2 is PTRR on the shifted
// curves with tau' = max(1, T-B-k) and m' = (tau'/T) m_terminal.
EpisodeTrace hybrid_run(const Instance& instance, double alpha, Pulls budget_b, double m_terminal,
                        const Permutation& order, Envelope envelope = Envelope::terminal,
                        const EnvelopeObserver& observer = {}, std::vector<KeepProbe>* probes = nullptr);

inline EpisodeTrace cumulative_hybrid_run(const Instance& instance, double alpha, Pulls budget_b,
                                          double m_terminal, const Permutation& order,
                                          const EnvelopeObserver& observer = {}) {
    return hybrid_run(instance, alpha, budget_b, m_terminal, order, Envelope::cumulative, observer);
}

// Optimistic baseline: pull argmax U_i (terminal envelope) for `budget` pulls. U ties within
// kCurveTolerance go to the arm with fewer pulls, then the lower index.
EpisodeTrace envelope_greedy_run(const Instance& instance, Pulls budget);

// EnvelopeGreedy for B pulls, then PTRR for T-B pulls on shifted curves.
EpisodeTrace regret_hybrid_run(const Instance& instance, double alpha, Pulls budget_b,
                               double m_terminal, const Permutation& order);

// Pull access handed to a doubling estimator for one explore phase.
class Explorer {
public:
    virtual ~Explorer() = default;
    virtual std::size_t k() const = 0;
    virtual Pulls remaining() const = 0;
    virtual Pulls pulls_of(std::size_t arm) const = 0;
    // Pulls the arm and returns f_arm(t_arm); throws DomainError when the phase is spent.
    virtual double pull(std::size_t arm) = 0;
};

// Returns m-hat for the given tau'.
using Estimator = std::function<double(Explorer&, Pulls tau_prime)>;

// Explores round robin and returns the best reward observed.
Estimator round_robin_max_estimator();

// Test oracle: explores round robin but returns f*(tau') from the true best curve.
Estimator oracle_estimator(const Instance& instance);

// Cycles T' = 4k, 8k, ...: explore T'/2 pulls through the estimator, then PTRR for T'/2 pulls with
// tau' = T'/2 - k and m = m_hat / (2 * 16^alpha). Requires T > 4k; stops at T.
EpisodeTrace doubling_ptrr_run(const Instance& instance, double alpha, const Estimator& estimator,
                               const Permutation& order);

}  // namespace imab
