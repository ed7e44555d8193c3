#include "imab/tuning.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "imab/error.hpp"

namespace imab {

namespace {

std::uint64_t bits_of(double x) { return std::bit_cast<std::uint64_t>(x); }
double from_bits(std::uint64_t b) { return std::bit_cast<double>(b); }

bool probe_passes(const KeepProbe& p, double alpha) { return keep_test(p.value, p.pulls, p.m, p.tau, alpha); }

// Smallest alpha in (lo, 1] where the probe's outcome differs from its outcome at lo, if any.
// The outcome is monotone in alpha, so comparing against alpha = 1 decides whether a flip exists.
std::optional<double> flip_point(const KeepProbe& p, double lo) {
    if (p.pulls == 0) return std::nullopt;
    const bool at_lo = probe_passes(p, lo);
    if (probe_passes(p, 1.0) == at_lo) return std::nullopt;
    std::uint64_t below = bits_of(lo);
    std::uint64_t above = bits_of(1.0);
    while (above - below > 1) {
        const std::uint64_t mid = below + (above - below) / 2;
        if (probe_passes(p, from_bits(mid)) == at_lo) below = mid;
        else above = mid;
    }
    return from_bits(above);
}

bool better(double loss, double alpha, Pulls b, double best_loss, double best_alpha, Pulls best_b) {
    if (loss != best_loss) return loss < best_loss;
    if (alpha != best_alpha) return alpha < best_alpha;
    return b < best_b;
}

}  // namespace

std::vector<double> DualProfile::breakpoints() const {
    std::vector<double> out;
    for (std::size_t j = 1; j < pieces.size(); ++j) out.push_back(pieces[j].lo);
    return out;
}

double DualProfile::value_at(double alpha) const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
    auto it = std::upper_bound(pieces.begin(), pieces.end(), alpha,
                               [](double a, const DualPiece& piece) { return a < piece.lo; });
    if (it == pieces.begin()) throw DomainError("alpha below the profile's first piece");
    return std::prev(it)->loss;
}

DualProfile sweep_alpha(const ProbedRun& run, const std::function<double(const EpisodeTrace&)>& loss_of) {
    DualProfile profile;
    std::vector<KeepProbe> probes;
    double lo = kAlphaFloor;
    for (;;) {
        probes.clear();
        const double value = loss_of(run(lo, &probes));
        ++profile.trace_pieces;
        double next = std::numeric_limits<double>::infinity();
        for (const auto& probe : probes) {
            if (auto flip = flip_point(probe, lo)) next = std::min(next, *flip);
        }
        const bool last = !std::isfinite(next);
        const double hi = last ? 1.0 : std::nextafter(next, 0.0);
        if (!profile.pieces.empty() && profile.pieces.back().loss == value) {
            profile.pieces.back().hi = hi;
        } else {
            profile.pieces.push_back({lo, hi, value});
        }
        if (last) break;
        lo = next;
    }
    return profile;
}

DualProfile dual_profile_ptrr(const Instance& instance, const Permutation& order, const LossSpec& loss_spec,
                              double m, Pulls tau) {
    return sweep_alpha(
        [&](double alpha, std::vector<KeepProbe>* probes) {
            return ptrr_run(instance, alpha, m, tau, order, instance.horizon(), probes);
        },
        [&](const EpisodeTrace& trace) { return loss(trace, instance, loss_spec); });
}

std::size_t HybridDualProfile::piece_count() const noexcept {
    std::size_t total = 0;
    for (const auto& profile : per_budget) total += profile.piece_count();
    return total;
}

double HybridDualProfile::value_at(double alpha, Pulls budget_b) const {
    if (budget_b < 0 || static_cast<std::size_t>(budget_b) >= per_budget.size())
        throw DomainError("B outside the profile");
    return per_budget[static_cast<std::size_t>(budget_b)].value_at(alpha);
}

HybridDualProfile dual_profile_hybrid(const Instance& instance, const Permutation& order,
                                      const LossSpec& loss_spec, double m_terminal, Envelope envelope) {
    HybridDualProfile out;
    for (Pulls b = 0; b <= instance.horizon(); ++b) {
        out.per_budget.push_back(sweep_alpha(
            [&](double alpha, std::vector<KeepProbe>* probes) {
                return hybrid_run(instance, alpha, b, m_terminal, order, envelope, {}, probes);
            },
            [&](const EpisodeTrace& trace) { return loss(trace, instance, loss_spec); }));
    }
    return out;
}

std::string_view to_string(TuneFamily family) {
    return family == TuneFamily::ptrr_alpha ? "ptrr_alpha" : "hybrid_alpha_B";
}

TuneFamily tune_family_from_string(std::string_view name) {
    if (name == "ptrr_alpha") return TuneFamily::ptrr_alpha;
    if (name == "hybrid_alpha_B") return TuneFamily::hybrid_alpha_B;
    throw DomainError("unknown tuning family '" + std::string(name) + "'");
}

TuneResult erm_over_profiles(std::span<const DualProfile> profiles) {
    if (profiles.empty()) throw DomainError("ERM needs at least one sample");
    std::vector<double> candidates;
    for (const auto& profile : profiles) {
        for (const auto& piece : profile.pieces) {
            candidates.push_back(piece.lo);
            candidates.push_back(piece.lo + (piece.hi - piece.lo) / 2.0);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Walk the candidates in ascending order with one cursor per profile.
    std::vector<std::size_t> cursor(profiles.size(), 0);
    TuneResult result;
    result.candidates = candidates.size();
    result.loss = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(profiles.size());
    for (double alpha : candidates) {
        double total = 0.0;
        for (std::size_t i = 0; i < profiles.size(); ++i) {
            const auto& pieces = profiles[i].pieces;
            while (cursor[i] + 1 < pieces.size() && pieces[cursor[i] + 1].lo <= alpha) ++cursor[i];
            total += pieces[cursor[i]].loss;
        }
        const double mean = total / n;
        if (mean < result.loss) {
            result.loss = mean;
            result.alpha_hat = alpha;
        }
    }
    for (const auto& profile : profiles) result.per_instance.push_back(profile.value_at(result.alpha_hat));
    return result;
}

TuneResult erm_tune(std::span<const TuneSample> samples, TuneFamily family, const LossSpec& loss_spec,
                    const TuneParams& params) {
    if (samples.empty()) throw DomainError("ERM needs at least one sample");
    for (const auto& sample : samples) require_valid(sample.instance);

    if (family == TuneFamily::ptrr_alpha) {
        std::vector<DualProfile> profiles;
        profiles.reserve(samples.size());
        for (const auto& s : samples) {
            const double m = params.m ? *params.m : default_m(s.instance);
            const Pulls tau = params.tau ? *params.tau : default_tau(s.instance);
            profiles.push_back(dual_profile_ptrr(s.instance, s.order, loss_spec, m, tau));
        }
        return erm_over_profiles(profiles);
    }

    const Pulls horizon = samples.front().instance.horizon();
    for (const auto& s : samples) {
        if (s.instance.horizon() != horizon)
            throw DomainError("tuning B needs every sample to share one horizon");
    }
    std::vector<HybridDualProfile> profiles;
    profiles.reserve(samples.size());
    for (const auto& s : samples) {
        const double m = params.m_terminal ? *params.m_terminal : best_final_curve(s.instance).final_value();
        profiles.push_back(dual_profile_hybrid(s.instance, s.order, loss_spec, m));
    }
    TuneResult best;
    best.loss = std::numeric_limits<double>::infinity();
    Pulls best_b = 0;
    std::size_t candidates = 0;
    for (Pulls b = 0; b <= horizon; ++b) {
        std::vector<DualProfile> slice;
        slice.reserve(profiles.size());
        for (const auto& p : profiles) slice.push_back(p.per_budget[static_cast<std::size_t>(b)]);
        TuneResult at_b = erm_over_profiles(slice);
        candidates += at_b.candidates;
        if (better(at_b.loss, at_b.alpha_hat, b, best.loss, best.alpha_hat, best_b)) {
            best = std::move(at_b);
            best_b = b;
        }
    }
    best.b_hat = best_b;
    best.candidates = candidates;
    return best;
}

std::uint64_t sample_complexity(double h_bound, double eps, double delta, double q_bound, double c) {
    if (!(h_bound > 0.0) || !(eps > 0.0) || !(delta > 0.0) || !(c > 0.0))
        throw DomainError("H, eps, delta and c must be positive");
    if (!(q_bound >= 1.0)) throw DomainError("Q must be at least 1");
    const double ratio = h_bound / eps;
    const double n = std::ceil(c * ratio * ratio * (std::log(q_bound) + std::log(1.0 / delta)));
    return static_cast<std::uint64_t>(std::max(1.0, n));
}

}  // namespace imab
