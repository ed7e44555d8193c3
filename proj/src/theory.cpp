#include "imab/theory.hpp"

#include <algorithm>
#include <limits>

#include "imab/error.hpp"

namespace imab {

namespace {

void check_unit_exponent(double x, const char* name) {
    if (!(x > 0.0 && x <= 1.0)) throw DomainError(std::string(name) + " must lie in (0, 1]");
}

void check_arms(long long k, long long min_k) {
    if (k < min_k) throw DomainError("k must be at least " + std::to_string(min_k));
}

}  // namespace

double gamma_of(double alpha) { return alpha / (alpha + 1.0); }

double ptrr_bound_factor(double alpha, long long k) {
    check_unit_exponent(alpha, "alpha");
    check_arms(k, 1);
    return 1.0 / (std::pow(2.0, alpha + 3.0) * (alpha + 1.0) *
                  std::pow(static_cast<double>(k + 1), gamma_of(alpha)));
}

LbParams lb_params(double beta, long long k) {
    check_unit_exponent(beta, "beta");
    check_arms(k, 2);
    const double kd = static_cast<double>(k);
    const double x_star = std::pow(kd * beta * (beta + 1.0), -1.0 / (beta + 1.0));
    const double h = (beta + 1.0) * (beta + 1.0) * std::pow(x_star, beta);
    return {x_star, h, 1.5 * h, 2.0 / x_star};
}

double lb_h(double x, double beta, long long k) {
    return 1.0 / (static_cast<double>(k) * x) + (beta + 1.0) * std::pow(x, beta);
}

double hard_family_opt(double m, double beta, Pulls horizon) {
    double total = 0.0;
    for (Pulls n = 1; n <= horizon; ++n) {
        total += m * std::pow(static_cast<double>(n) / static_cast<double>(horizon), beta);
    }
    return total;
}

double generous_value(std::span<const Pulls> schedule, Pulls s, double beta, long long k, double m,
                      Pulls horizon) {
    if (static_cast<long long>(schedule.size()) != k)
        throw DomainError("schedule needs one pull count per arm");
    Pulls total = 0;
    long long cleared = 0;
    for (Pulls pulls : schedule) {
        total += pulls;
        if (pulls >= s) ++cleared;
    }
    if (total > horizon) throw DomainError("schedule uses more than T pulls");
    const double share = static_cast<double>(cleared) / static_cast<double>(k);
    const double g_s =
        m * std::pow(static_cast<double>(std::min(s, horizon)) / static_cast<double>(horizon), beta);
    return share * hard_family_opt(m, beta, horizon) +
           (1.0 - share) * static_cast<double>(horizon) * g_s;
}

OneVarMin one_var_min(double u, double v, double p) {
    if (!(u > 0.0) || !(v > 0.0)) throw DomainError("u and v must be positive");
    if (!(p > 1.0)) throw DomainError("p must exceed 1");
    const double q = p - 1.0;
    const double a = std::pow(u, 1.0 / q);
    const double b = std::pow(v, 1.0 / q);
    const double value = std::pow(std::pow(u, -1.0 / q) + std::pow(v, -1.0 / q), -q);
    return {value, b / (a + b)};
}

double one_var_objective(double u, double v, double p, double y) {
    return u * std::pow(y, p) + v * std::pow(1.0 - y, p);
}

BalanceCheck balance_check(long long k_prime, double alpha) {
    check_unit_exponent(alpha, "alpha");
    check_arms(k_prime, 1);
    const double kp = static_cast<double>(k_prime);
    const double g = gamma_of(alpha);
    const double inner = std::pow(2.0 * std::pow(kp, g), 1.0 / alpha);
    const double lhs = 1.0 / kp + (1.0 - 1.0 / kp) * std::pow(1.0 + inner, -alpha);
    const double rhs = 1.0 / (2.0 * std::pow(kp + 1.0, g));
    return {lhs, rhs, lhs >= rhs};
}

double recurrence_value(Pulls tau_prime, long long k_prime, double m, Pulls tau, double alpha,
                        long long state_cap) {
    check_unit_exponent(alpha, "alpha");
    check_arms(k_prime, 1);
    if (tau < 1) throw DomainError("tau must be at least 1");
    if (tau_prime <= 0) return 0.0;
    if ((tau_prime + 1) * k_prime > state_cap)
        throw DomainError("recurrence state space of " + std::to_string((tau_prime + 1) * k_prime) +
                          " exceeds the cap; coarsen tau' or lower k'");

    const auto width = static_cast<std::size_t>(tau_prime + k_prime + 1);
    const double tau_d = static_cast<double>(tau);
    // benchmark[n] = sum_{s<=n} m (s/tau)^alpha, area[t] = m/((alpha+1) tau^alpha) t^(alpha+1)
    std::vector<double> benchmark(width, 0.0);
    std::vector<double> area(width, 0.0);
    const double coeff = m / ((alpha + 1.0) * std::pow(tau_d, alpha));
    for (std::size_t n = 1; n < width; ++n) {
        benchmark[n] = benchmark[n - 1] + m * std::pow(static_cast<double>(n) / tau_d, alpha);
        area[n] = coeff * std::pow(static_cast<double>(n), alpha + 1.0);
    }

    const auto cols = static_cast<std::size_t>(tau_prime + 1);
    std::vector<double> prev(cols, 0.0);
    std::vector<double> cur(cols, 0.0);
    for (std::size_t r = 1; r < cols; ++r) prev[r] = benchmark[r];
    for (long long kp = 2; kp <= k_prime; ++kp) {
        const double p_hit = 1.0 / static_cast<double>(kp);
        cur[0] = 0.0;
        for (std::size_t r = 1; r < cols; ++r) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t <= r; ++t) best = std::min(best, area[t] + prev[r - t]);
            cur[r] = p_hit * benchmark[r + static_cast<std::size_t>(kp)] + (1.0 - p_hit) * best;
        }
        std::swap(prev, cur);
    }
    return prev[cols - 1];
}

double recurrence_closed_form(Pulls tau_prime, long long k_prime, double m, Pulls tau, double alpha) {
    if (tau_prime <= 0) return 0.0;
    const double coeff = m / ((alpha + 1.0) * std::pow(static_cast<double>(tau), alpha));
    return coeff * std::pow(static_cast<double>(tau_prime), alpha + 1.0) /
           (2.0 * std::pow(static_cast<double>(k_prime + 1), gamma_of(alpha)));
}

MiscBounds misc_bounds(double alpha, long long k, double m, Pulls tau, double log_base) {
    check_unit_exponent(alpha, "alpha");
    check_arms(k, 1);
    if (tau < 1) throw DomainError("tau must be at least 1");
    if (!(log_base > 1.0)) throw DomainError("log base must exceed 1");
    const double spread = std::pow(static_cast<double>(k + 1), -gamma_of(alpha));
    const double log_term = std::log(128.0 * static_cast<double>(k)) / std::log(log_base);
    MiscBounds out;
    out.hybrid_fallback = spread / (std::pow(2.0, alpha + 7.0) * (alpha + 1.0));
    out.unknownT_factor = spread / (2048.0 * std::pow(16.0, alpha) * (alpha + 1.0) * log_term);
    out.area_coeff = m / ((alpha + 1.0) * std::pow(static_cast<double>(tau), alpha));
    return out;
}

double doubling_exploit_factor(double alpha, long long k) {
    check_unit_exponent(alpha, "alpha");
    check_arms(k, 1);
    return std::pow(static_cast<double>(k + 1), -gamma_of(alpha)) /
           (2048.0 * std::pow(16.0, alpha) * (alpha + 1.0));
}

std::vector<BoundReport> bound_table(double alpha, double beta, long long k, Pulls horizon) {
    std::vector<BoundReport> out;
    const double a = alpha;
    const double kd = static_cast<double>(k);
    out.push_back({"ptrr_bound_factor", {{"alpha", a}, {"k", kd}}, ptrr_bound_factor(a, k),
                   "1/(2^(alpha+3)(alpha+1)(k+1)^(alpha/(alpha+1)))"});
    const auto lb = lb_params(beta, k);
    out.push_back({"lb_x_star", {{"beta", beta}, {"k", kd}}, lb.x_star, "(k beta (beta+1))^(-1/(beta+1))"});
    out.push_back({"lb_h_at_x_star", {{"beta", beta}, {"k", kd}}, lb.h_at_x_star, "(beta+1)^2 x*^beta"});
    out.push_back({"lb_ratio_bound", {{"beta", beta}, {"k", kd}}, lb.ratio_bound, "(3/2) h(x*)"});
    out.push_back({"lb_T_min", {{"beta", beta}, {"k", kd}}, lb.t_min, "2/x*"});
    const Pulls tau = std::max<Pulls>(1, horizon - k);
    const auto misc = misc_bounds(a, k, 1.0, tau);
    out.push_back({"hybrid_fallback", {{"alpha", a}, {"k", kd}}, misc.hybrid_fallback,
                   "(k+1)^(-gamma)/(2^(alpha+7)(alpha+1))"});
    out.push_back({"unknownT_factor", {{"alpha", a}, {"k", kd}}, misc.unknownT_factor,
                   "(k+1)^(-gamma)/(2048 16^alpha (alpha+1) ln(128k))"});
    out.push_back({"area_coeff", {{"alpha", a}, {"m", 1.0}, {"tau", static_cast<double>(tau)}},
                   misc.area_coeff, "m/((alpha+1) tau^alpha)"});
    out.push_back({"balance_lhs_minus_rhs", {{"alpha", a}, {"k_prime", kd}},
                   balance_check(k, a).lhs - balance_check(k, a).rhs, "lhs - rhs"});
    out.push_back({"recurrence_value",
                   {{"tau_prime", static_cast<double>(tau)}, {"k_prime", kd}, {"m", 1.0},
                    {"tau", static_cast<double>(tau)}, {"alpha", a}},
                   recurrence_value(tau, k, 1.0, tau, a), "dynamic program"});
    out.push_back({"recurrence_closed_form",
                   {{"tau_prime", static_cast<double>(tau)}, {"k_prime", kd}, {"m", 1.0},
                    {"tau", static_cast<double>(tau)}, {"alpha", a}},
                   recurrence_closed_form(tau, k, 1.0, tau, a),
                   "m tau'^(alpha+1)/((alpha+1) tau^alpha 2 (k'+1)^gamma)"});
    return out;
}

}  // namespace imab
