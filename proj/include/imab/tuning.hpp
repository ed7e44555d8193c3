#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "imab/algorithms.hpp"
#include "imab/engine.hpp"
#include "imab/instances.hpp"

namespace imab {

// A run of alpha values, closed at both ends in double precision, on which the loss is constant.
struct DualPiece {
    double lo;
    double hi;
    double loss;

    friend bool operator==(const DualPiece&, const DualPiece&) = default;
};

// Loss as a function of alpha over (0, 1] for one (instance, order) pair.
struct DualProfile {
    std::vector<DualPiece> pieces;  // ascending, adjacent equal losses merged
    std::size_t trace_pieces = 0;   // distinct episode traces before merging

    std::size_t piece_count() const noexcept { return pieces.size(); }
    // Interior piece starts.
    std::vector<double> breakpoints() const;
    double value_at(double alpha) const;
};

// Smallest positive double: the lower end of every alpha axis.
inline constexpr double kAlphaFloor = std::numeric_limits<double>::denorm_min();

// Runs the episode at alpha and records its keep-test probes.
using ProbedRun = std::function<EpisodeTrace(double alpha, std::vector<KeepProbe>* probes)>;

// Sweeps alpha upward: the trace at the current alpha stays valid until the nearest alpha at which
// one of its keep-tests flips, found by bisection on the double grid.
DualProfile sweep_alpha(const ProbedRun& run, const std::function<double(const EpisodeTrace&)>& loss_of);

DualProfile dual_profile_ptrr(const Instance& instance, const Permutation& order, const LossSpec& loss_spec,
                              double m, Pulls tau);

struct HybridDualProfile {
    std::vector<DualProfile> per_budget;  // index B = 0..T

    std::size_t piece_count() const noexcept;
    double value_at(double alpha, Pulls budget_b) const;
};

HybridDualProfile dual_profile_hybrid(const Instance& instance, const Permutation& order,
                                      const LossSpec& loss_spec, double m_terminal,
                                      Envelope envelope = Envelope::terminal);

enum class TuneFamily { ptrr_alpha, hybrid_alpha_B };

std::string_view to_string(TuneFamily family);
TuneFamily tune_family_from_string(std::string_view name);

struct TuneSample {
    Instance instance;
    Permutation order;
};

// Unset values use the per-instance defaults of the engine.
struct TuneParams {
    std::optional<double> m;
    std::optional<Pulls> tau;
    std::optional<double> m_terminal;
};

struct TuneResult {
    double alpha_hat = 1.0;
    std::optional<Pulls> b_hat;
    double loss = 0.0;
    std::size_t candidates = 0;
    std::vector<double> per_instance;
};

// Exact ERM over the continuum: candidates are every piece start and midpoint of every sample's
// profile. Ties go to the smaller alpha, then the smaller B.
TuneResult erm_tune(std::span<const TuneSample> samples, TuneFamily family, const LossSpec& loss_spec,
                    const TuneParams& params = {});

// Same, on profiles computed by the caller (one per sample).
TuneResult erm_over_profiles(std::span<const DualProfile> profiles);

// ceil(c (H/eps)^2 (ln Q + ln(1/delta)))
std::uint64_t sample_complexity(double h_bound, double eps, double delta, double q_bound, double c = 1.0);

}  // namespace imab
