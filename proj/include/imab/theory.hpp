#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "imab/curves.hpp"

namespace imab {

struct BoundReport {
    std::string name;
    std::vector<std::pair<std::string, double>> inputs;
    double value = 0.0;
    std::string formula;
};

// alpha / (alpha + 1)
double gamma_of(double alpha);

// 1 / (2^(alpha+3) (alpha+1) (k+1)^gamma): PTRR's guaranteed fraction of OPT_T.
double ptrr_bound_factor(double alpha, long long k);

struct LbParams {
    double x_star;
    double h_at_x_star;
    double ratio_bound;  // (3/2) h(x*)
    double t_min;        // 2 / x*
};

LbParams lb_params(double beta, long long k);

// h(x) = 1/(kx) + (beta+1) x^beta
double lb_h(double x, double beta, long long k);

// OPT_T of the hard family: sum_{n=1..T} m (n/T)^beta.
double hard_family_opt(double m, double beta, Pulls horizon);

// (A/k) OPT_T + (1 - A/k) T g(s) where A counts arms with at least s pulls and g(s) = m (min(s,T)/T)^beta.
double generous_value(std::span<const Pulls> schedule, Pulls s, double beta, long long k, double m,
                      Pulls horizon);

struct OneVarMin {
    double value;
    double argmin;
};

// min over y in [0,1] of u y^p + v (1-y)^p, in closed form.
OneVarMin one_var_min(double u, double v, double p);

double one_var_objective(double u, double v, double p, double y);

struct BalanceCheck {
    double lhs;
    double rhs;
    bool holds;
};

// 1/k' + (1 - 1/k') (1 + (2 k'^gamma)^(1/alpha))^(-alpha)  versus  1 / (2 (k'+1)^gamma)
BalanceCheck balance_check(long long k_prime, double alpha);

// Dynamic program for V(tau', k') with the pure power benchmark sum m (s/tau)^alpha. Throws
// DomainError when (tau'+1) k' exceeds state_cap.
double recurrence_value(Pulls tau_prime, long long k_prime, double m, Pulls tau, double alpha,
                        long long state_cap = 20'000'000);

// m / ((alpha+1) tau^alpha) * tau'^(alpha+1) / (2 (k'+1)^gamma)
double recurrence_closed_form(Pulls tau_prime, long long k_prime, double m, Pulls tau, double alpha);

struct MiscBounds {
    double hybrid_fallback;  // 1 / (2^(alpha+7) (alpha+1)) (k+1)^(-gamma)
    double unknownT_factor;  // 1 / (2048 16^alpha (alpha+1) log(128k)) (k+1)^(-gamma)
    double area_coeff;       // m / ((alpha+1) tau^alpha)
};

// log_base defaults to e.
MiscBounds misc_bounds(double alpha, long long k, double m = 1.0, Pulls tau = 1,
                       double log_base = std::exp(1.0));

// The unknown-horizon factor without the estimator's log(128k) success term.
double doubling_exploit_factor(double alpha, long long k);

// Every calculator evaluated at one parameter point, for the bounds table.
std::vector<BoundReport> bound_table(double alpha, double beta, long long k, Pulls horizon);

}  // namespace imab
