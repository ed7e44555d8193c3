#include <iostream>

#include <CLI11.hpp>

#include "imab/cli.hpp"

namespace {

void add_io(CLI::App* cmd, imab::RunConfig& c, bool needs_input) {
    auto* in = cmd->add_option("--in", c.input, "input instance or corpus JSON");
    if (needs_input) in->required();
    cmd->add_option("--out", c.output, "output file (stdout when omitted)");
    cmd->add_option("--seed", c.seed, "64-bit seed");
}

void add_algo(CLI::App* cmd, imab::RunConfig& c) {
    cmd->add_option("--algo", c.algo, "ptrr, hybrid, cumulative_hybrid, regret_hybrid, envelope_greedy, doubling_ptrr");
    cmd->add_option("--alpha", c.alpha, "threshold exponent in (0, 1]");
    cmd->add_option("--B", c.budget_b, "stage-1 budget (default T/2)");
    cmd->add_option("--m", c.m, "PTRR threshold scale, or the hybrids' terminal scale");
    cmd->add_option("--tau", c.tau, "PTRR time scale");
    cmd->add_option("--estimator", c.estimator, "doubling estimator: round_robin_max or oracle");
    cmd->add_option("--perm", c.permutation, "explicit arm order, e.g. 1,0,2");
}

void add_eval(CLI::App* cmd, imab::RunConfig& c) {
    cmd->add_flag("--exact", c.exact, "enumerate all k! orders");
    cmd->add_flag("--mc", c.mc, "Monte Carlo over --n seeded orders");
    cmd->add_option("--n", c.n, "Monte Carlo runs, or draws from a generator corpus");
    cmd->add_option("--loss", c.loss, "avg_regret, max_pull_regret or bai_failure");
    cmd->add_option("--H", c.h_bound, "loss bound");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"improving multi-armed bandits: generate, run, evaluate and tune"};
    app.require_subcommand(1);
    imab::RunConfig c;

    auto* gen = app.add_subcommand("gen", "generate an instance or corpus");
    add_io(gen, c, false);
    gen->add_option("--family", c.family, "hard, example or random_concave");
    gen->add_option("--example", c.example, "ex1..ex4");
    gen->add_option("--k", c.k, "arm count");
    gen->add_option("--T", c.horizon, "horizon");
    gen->add_option("--m", c.m, "reward scale");
    gen->add_option("--beta", c.beta, "exponent of the good arm");
    gen->add_option("--s", c.s, "flattening point of the bad arms (default T/4)");
    gen->add_option("--good", c.good, "index of the good arm (default 0)");
    gen->add_option("--max-final", c.max_final, "largest final value of random arms");
    gen->add_option("--count", c.count, "write a corpus of this many draws");

    auto* validate = app.add_subcommand("validate", "check monotonicity and concavity");
    add_io(validate, c, true);

    auto* run = app.add_subcommand("run", "run one episode and write its trace");
    add_io(run, c, true);
    add_algo(run, c);

    auto* eval = app.add_subcommand("eval", "expected metrics over arm orders");
    add_io(eval, c, true);
    add_algo(eval, c);
    add_eval(eval, c);

    auto* report = app.add_subcommand("report", "evaluate the standard algorithm suite over a corpus");
    add_io(report, c, true);
    add_algo(report, c);
    add_eval(report, c);

    auto* tune = app.add_subcommand("tune", "ERM over alpha (and B)");
    add_io(tune, c, true);
    tune->add_option("--family", c.tune_family, "ptrr_alpha or hybrid_alpha_B");
    tune->add_option("--n", c.n, "number of sampled (instance, order) pairs");
    tune->add_option("--loss", c.loss, "avg_regret, max_pull_regret or bai_failure");
    tune->add_option("--H", c.h_bound, "loss bound");
    tune->add_option("--m", c.m, "threshold scale");
    tune->add_option("--tau", c.tau, "PTRR time scale");

    auto* bounds = app.add_subcommand("bounds", "bound calculators as CSV");
    bounds->add_option("--out", c.output, "output file (stdout when omitted)");
    bounds->add_option("--alpha", c.alpha, "threshold exponent");
    bounds->add_option("--beta", c.beta, "hard-family exponent");
    bounds->add_option("--k", c.k, "arm count");
    bounds->add_option("--T", c.horizon, "horizon");
    bounds->add_option("--H", c.h_bound, "loss bound for sample complexity");
    bounds->add_option("--eps", c.eps, "accuracy");
    bounds->add_option("--delta", c.delta, "failure probability");
    bounds->add_option("--c", c.c, "sample complexity constant");
    bounds->add_option("--Q", c.q_bound, "dual complexity bound (default kT and kT^2)");

    auto* dual = app.add_subcommand("dual", "exact piecewise-constant loss over alpha");
    add_io(dual, c, true);
    add_algo(dual, c);
    dual->add_option("--loss", c.loss, "avg_regret, max_pull_regret or bai_failure");
    dual->add_option("--H", c.h_bound, "loss bound");

    CLI11_PARSE(app, argc, argv);
    c.command = app.get_subcommands().front()->get_name();
    return static_cast<int>(imab::execute(c, std::cout, std::cerr));
}
