#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imab {

// Pull counts and horizons. Signed so that callers can pass negative values and get a domain error.
using Pulls = std::int64_t;

// Absolute slack used by every floating comparison on curve values.
inline constexpr double kCurveTolerance = 1e-12;

enum class CurveKind { power, power_flat, constant, linear_cap, table };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

// One arm's reward as a function of its own pull count, f(1..T), with f(0) = 0.
//
// Values are tabulated once at construction so evaluation is a lookup; the tabulated values are
// exactly what the closed forms produce in double precision.
class RewardCurve {
public:
    // m * (t/T)^beta
    static RewardCurve power(double m, double beta, Pulls horizon);
    // power(m, beta) up to pull s, then constant at its value at s
    static RewardCurve power_flat(double m, double beta, Pulls s, Pulls horizon);
    static RewardCurve constant(double c, Pulls horizon);
    // min(t/T, cap)
    static RewardCurve linear_cap(double cap, Pulls horizon);
    // values[t-1] = f(t); exactly `horizon` entries are required
    static RewardCurve table(std::vector<double> values, Pulls horizon);

    CurveKind kind() const noexcept { return kind_; }
    Pulls horizon() const noexcept { return horizon_; }

    double m() const noexcept { return m_; }
    double beta() const noexcept { return beta_; }
    Pulls breakpoint() const noexcept { return s_; }
    double level() const noexcept { return c_; }
    double cap() const noexcept { return cap_; }

    // f(t) for 0 <= t <= T; throws DomainError otherwise.
    double eval(Pulls t) const;

    // Unchecked f(t); the caller guarantees 0 <= t <= T.
    double operator()(Pulls t) const noexcept { return values_[static_cast<std::size_t>(t)]; }

    double final_value() const noexcept { return values_.back(); }

    // f(1..T)
    std::span<const double> table_values() const noexcept {
        return std::span<const double>(values_).subspan(1);
    }

    friend bool operator==(const RewardCurve&, const RewardCurve&) = default;

private:
    RewardCurve(CurveKind kind, Pulls horizon);

    CurveKind kind_;
    Pulls horizon_;
    double m_ = 0.0;
    double beta_ = 0.0;
    Pulls s_ = 0;
    double c_ = 0.0;
    double cap_ = 0.0;
    std::vector<double> values_;  // f(0..T)
};

struct CurveValidity {
    bool monotone = true;
    bool concave = true;
    // Smallest pull index t at which an increment breaks an invariant.
    std::optional<Pulls> first_violation;

    bool ok() const noexcept { return monotone && concave; }
};

// Never throws. Non-finite values count as violations of both properties.
CurveValidity validate(const RewardCurve& curve);

// f(t) >= f(T) (t/T)^beta for every t in 1..T. beta must lie in (0, 1].
bool satisfies_le(const RewardCurve& curve, double beta);

// Smallest exponent beta in [0, 1] for which the curve satisfies the lower envelope, i.e.
// sup_{t<T} ln(f(t)/f(T)) / ln(t/T) clamped to [0, 1]. Zero for flat or all-zero curves.
double envelope_exponent(const RewardCurve& curve);

// Concavity envelope exponent of a set of arms: the maximum per-arm exponent.
double cee(std::span<const RewardCurve> arms);

}  // namespace imab
