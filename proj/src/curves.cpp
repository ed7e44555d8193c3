#include "imab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imab/error.hpp"

namespace imab {
namespace {

void require_horizon(Pulls horizon) {
    if (horizon < 1) throw DomainError("curve horizon T must be >= 1, got " + std::to_string(horizon));
}

void require_finite_nonnegative(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
        throw DomainError(std::string("curve parameter ") + name + " must be finite and >= 0");
}

void require_exponent(double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("curve exponent beta must lie in (0, 1]");
}

double power_value(double m, double beta, Pulls t, Pulls horizon) {
    return m * std::pow(static_cast<double>(t) / static_cast<double>(horizon), beta);
}

}  // namespace

std::string_view to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::power: return "power";
        case CurveKind::power_flat: return "power_flat";
        case CurveKind::constant: return "constant";
        case CurveKind::linear_cap: return "linear_cap";
        case CurveKind::table: return "table";
    }
    return "unknown";
}

CurveKind curve_kind_from_string(std::string_view name) {
    for (auto kind : {CurveKind::power, CurveKind::power_flat, CurveKind::constant,
                      CurveKind::linear_cap, CurveKind::table}) {
        if (to_string(kind) == name) return kind;
    }
    throw DomainError("unknown curve kind '" + std::string(name) + "'");
}

RewardCurve::RewardCurve(CurveKind kind, Pulls horizon) : kind_(kind), horizon_(horizon) {
    require_horizon(horizon);
    values_.assign(static_cast<std::size_t>(horizon) + 1, 0.0);
}

RewardCurve RewardCurve::power(double m, double beta, Pulls horizon) {
    require_finite_nonnegative(m, "m");
    require_exponent(beta);
    RewardCurve curve(CurveKind::power, horizon);
    curve.m_ = m;
    curve.beta_ = beta;
    for (Pulls t = 1; t <= horizon; ++t) curve.values_[t] = power_value(m, beta, t, horizon);
    return curve;
}

RewardCurve RewardCurve::power_flat(double m, double beta, Pulls s, Pulls horizon) {
    require_finite_nonnegative(m, "m");
    require_exponent(beta);
    require_horizon(horizon);
    if (s < 1 || s > horizon) throw DomainError("power_flat breakpoint s must lie in [1, T]");
    RewardCurve curve(CurveKind::power_flat, horizon);
    curve.m_ = m;
    curve.beta_ = beta;
    curve.s_ = s;
    for (Pulls t = 1; t <= horizon; ++t)
        curve.values_[t] = power_value(m, beta, std::min(t, s), horizon);
    return curve;
}

RewardCurve RewardCurve::constant(double c, Pulls horizon) {
    require_finite_nonnegative(c, "c");
    RewardCurve curve(CurveKind::constant, horizon);
    curve.c_ = c;
    std::fill(curve.values_.begin() + 1, curve.values_.end(), c);
    return curve;
}

RewardCurve RewardCurve::linear_cap(double cap, Pulls horizon) {
    require_finite_nonnegative(cap, "cap");
    RewardCurve curve(CurveKind::linear_cap, horizon);
    curve.cap_ = cap;
    for (Pulls t = 1; t <= horizon; ++t)
        curve.values_[t] = std::min(static_cast<double>(t) / static_cast<double>(horizon), cap);
    return curve;
}

RewardCurve RewardCurve::table(std::vector<double> values, Pulls horizon) {
    require_horizon(horizon);
    if (static_cast<Pulls>(values.size()) != horizon)
        throw DomainError("table curve needs exactly T=" + std::to_string(horizon) + " values, got " +
                          std::to_string(values.size()));
    RewardCurve curve(CurveKind::table, horizon);
    std::copy(values.begin(), values.end(), curve.values_.begin() + 1);
    return curve;
}

double RewardCurve::eval(Pulls t) const {
    if (t < 0 || t > horizon_)
        throw DomainError("pull index " + std::to_string(t) + " outside [0, " + std::to_string(horizon_) +
                          "]");
    return values_[static_cast<std::size_t>(t)];
}

CurveValidity validate(const RewardCurve& curve) {
    CurveValidity report;
    auto flag = [&](Pulls t, bool monotone_broken, bool concave_broken) {
        if (monotone_broken) report.monotone = false;
        if (concave_broken) report.concave = false;
        if ((monotone_broken || concave_broken) && !report.first_violation) report.first_violation = t;
    };
    for (Pulls t = 1; t <= curve.horizon(); ++t) {
        const double here = curve(t);
        if (!std::isfinite(here)) {
            flag(t, true, true);
            continue;
        }
        const double prev = curve(t - 1);
        const double step = here - prev;
        flag(t, step < -kCurveTolerance, false);
        if (t >= 2) {
            const double prev_step = prev - curve(t - 2);
            flag(t, false, step > prev_step + kCurveTolerance);
        }
    }
    return report;
}

bool satisfies_le(const RewardCurve& curve, double beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("LE exponent beta must lie in (0, 1]");
    const double final_value = curve.final_value();
    const double horizon = static_cast<double>(curve.horizon());
    for (Pulls t = 1; t <= curve.horizon(); ++t) {
        const double floor = final_value * std::pow(static_cast<double>(t) / horizon, beta);
        if (curve(t) < floor - kCurveTolerance) return false;
    }
    return true;
}

double envelope_exponent(const RewardCurve& curve) {
    if (!validate(curve).ok()) throw DomainError("envelope exponent needs a monotone concave curve");
    const double final_value = curve.final_value();
    if (final_value <= 0.0) return 0.0;
    // The closed forms attain their exponent exactly; skip the floating sup for them.
    if (curve.kind() == CurveKind::power ||
        (curve.kind() == CurveKind::power_flat && curve.breakpoint() >= curve.horizon()))
        return curve.m() > 0.0 ? curve.beta() : 0.0;

    const double horizon = static_cast<double>(curve.horizon());
    double sup = 0.0;
    for (Pulls t = 1; t < curve.horizon(); ++t) {
        const double value = curve(t);
        if (value <= 0.0) return 1.0;
        if (value >= final_value) continue;
        const double ratio = std::log(value / final_value) / std::log(static_cast<double>(t) / horizon);
        sup = std::max(sup, ratio);
    }
    return std::clamp(sup, 0.0, 1.0);
}

double cee(std::span<const RewardCurve> arms) {
    double result = 0.0;
    for (const auto& arm : arms) result = std::max(result, envelope_exponent(arm));
    return result;
}

}  // namespace imab
