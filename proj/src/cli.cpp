#include "imab/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "imab/engine.hpp"
#include "imab/error.hpp"
#include "imab/format.hpp"
#include "imab/serialize.hpp"
#include "imab/theory.hpp"
#include "imab/tuning.hpp"

namespace imab {

namespace {

// Thrown for a validation failure that maps to exit status 2.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Emitter {
public:
    Emitter(const RunConfig& config, std::ostream& out, std::ostream& err)
        : config_(config), out_(out), err_(err) {}

    void artifact(const std::string& content) {
        if (config_.output.empty()) {
            out_ << content;
        } else {
            write_text(config_.output, content);
        }
    }

    void summary(const std::string& line) { (config_.output.empty() ? err_ : out_) << line << "\n"; }

private:
    const RunConfig& config_;
    std::ostream& out_;
    std::ostream& err_;
};

void require_input(const RunConfig& config) {
    if (config.input.empty()) throw DomainError("--in is required for " + config.command);
    if (!std::filesystem::exists(config.input)) throw std::runtime_error("no such file: " + config.input);
}

Permutation parse_permutation(const std::string& text, std::size_t k) {
    Permutation out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(item, &used);
            if (used != item.size() || v < 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw DomainError("--perm: '" + item + "' is not an arm index");
        }
    }
    if (!is_permutation_of(out, k)) throw DomainError("--perm is not a permutation of 0.." + std::to_string(k - 1));
    return out;
}

Permutation order_for(const RunConfig& config, std::size_t k) {
    if (!config.permutation.empty()) return parse_permutation(config.permutation, k);
    Rng rng(config.seed);
    return shuffled_permutation(k, rng);
}

AlgorithmSpec make_spec(const RunConfig& config, const std::string& algo, const Instance& instance) {
    const Pulls b = config.budget_b.value_or(instance.horizon() / 2);
    if (algo == "ptrr") return PtrrSpec{config.alpha, config.m, config.tau};
    if (algo == "hybrid") return HybridSpec{config.alpha, b, config.m};
    if (algo == "cumulative_hybrid") return CumulativeHybridSpec{config.alpha, b, config.m};
    if (algo == "regret_hybrid") return RegretHybridSpec{config.alpha, b, config.m};
    if (algo == "envelope_greedy") return EnvelopeGreedySpec{};
    if (algo == "doubling_ptrr") return DoublingSpec{config.alpha, config.estimator};
    throw DomainError("--algo: unknown algorithm '" + algo + "'");
}

std::vector<LossSpec> losses_for(const RunConfig& config) {
    auto losses = standard_losses();
    if (config.h_bound) {
        const LossKind kind = loss_kind_from_string(config.loss);
        for (auto& spec : losses) {
            if (spec.kind == kind) spec.h_bound = config.h_bound;
        }
    }
    return losses;
}

EvalReport evaluate(const RunConfig& config, const AlgorithmSpec& spec, const Instance& instance) {
    const auto losses = losses_for(config);
    const bool use_mc = config.mc || (!config.exact && instance.k() > kMaxExactArms);
    if (config.exact && config.mc) throw DomainError("--exact and --mc are exclusive");
    if (use_mc) return expected_metrics_mc(spec, instance, losses, config.n, config.seed);
    return expected_metrics_exact(spec, instance, losses);
}

Instance single_instance(const RunConfig& config) {
    require_input(config);
    const auto distribution = load_instances(config.input);
    if (distribution.generator || distribution.entries.size() != 1)
        throw DomainError(config.input + " holds a corpus; this command needs a single instance");
    return distribution.entries.front().instance;
}

std::vector<WeightedInstance> corpus_entries(const RunConfig& config) {
    require_input(config);
    const auto distribution = load_instances(config.input);
    if (!distribution.generator) return distribution.entries;
    std::vector<WeightedInstance> out;
    const double w = 1.0 / static_cast<double>(config.n);
    for (auto& instance : distribution.draw(config.n, config.seed)) out.push_back({w, std::move(instance)});
    return out;
}

ExitCode cmd_gen(const RunConfig& config, Emitter& emit) {
    GeneratorSpec spec;
    spec.family = generator_family_from_string(config.family);
    spec.k = config.k;
    spec.horizon = config.horizon;
    spec.m = config.m.value_or(1.0);
    spec.beta = config.beta;
    spec.s = config.s.value_or(std::max<Pulls>(1, config.horizon / 4));
    spec.example = example_from_string(config.example);
    spec.max_final = config.max_final;

    Rng rng(config.seed);
    if (config.count) {
        if (*config.count == 0) throw DomainError("--count must be positive");
        InstanceDistribution corpus;
        const double w = 1.0 / static_cast<double>(*config.count);
        for (std::size_t i = 0; i < *config.count; ++i) corpus.entries.push_back({w, generate(spec, rng)});
        corpus.check();
        emit.artifact(dump_canonical(to_json(corpus)));
        emit.summary("gen: " + std::to_string(*config.count) + " " + config.family + " instances, k=" +
                     std::to_string(spec.k) + " T=" + std::to_string(spec.horizon));
        return ExitCode::ok;
    }
    Instance instance = spec.family == GeneratorFamily::hard
                            ? make_hard_family(spec.k, spec.horizon, spec.m, spec.beta, spec.s, config.good.value_or(0))
                            : generate(spec, rng);
    emit.artifact(dump_canonical(to_json(instance)));
    emit.summary("gen: " + instance.label() + " cee=" + format_number(cee(instance)));
    return ExitCode::ok;
}

ExitCode cmd_validate(const RunConfig& config, Emitter& emit) {
    require_input(config);
    const auto distribution = load_instances(config.input);
    if (distribution.generator) {
        emit.summary("validate: generator corpus " + config.input + " is well-formed");
        return ExitCode::ok;
    }
    std::size_t bad = 0;
    std::string report;
    for (std::size_t e = 0; e < distribution.entries.size(); ++e) {
        for (const auto& v : find_violations(distribution.entries[e].instance)) {
            ++bad;
            report += "instance " + std::to_string(e) + " arm " + std::to_string(v.arm) + ": " +
                      (!v.validity.monotone ? "not monotone" : "not concave") + " at t=" +
                      std::to_string(v.validity.first_violation.value_or(0)) + "\n";
        }
    }
    if (bad) {
        emit.artifact(report);
        throw InvalidInput("validate: " + std::to_string(bad) + " invalid arm(s) in " + config.input);
    }
    emit.summary("validate: " + std::to_string(distribution.entries.size()) + " instance(s) valid");
    return ExitCode::ok;
}

ExitCode cmd_run(const RunConfig& config, Emitter& emit) {
    const Instance instance = single_instance(config);
    require_valid(instance);
    const auto spec = make_spec(config, config.algo, instance);
    const auto trace = run_episode(spec, instance, order_for(config, instance.k()));
    Json j;
    j["algo"] = to_json(spec);
    j["trace"] = to_json(trace);
    emit.artifact(dump_canonical(j));
    std::string line = "run: " + algo_name(spec) + " reward=" + format_number(trace.reward) +
                       " chosen=" + std::to_string(trace.chosen) + " stage=" + std::to_string(trace.final_stage);
    if (trace.commit_time) line += " commit_time=" + std::to_string(*trace.commit_time);
    emit.summary(line);
    return ExitCode::ok;
}

ExitCode cmd_eval(const RunConfig& config, Emitter& emit) {
    const auto entries = corpus_entries(config);
    std::string csv = eval_csv_header() + "\n";
    for (const auto& entry : entries) {
        require_valid(entry.instance);
        const auto spec = make_spec(config, config.algo, entry.instance);
        csv += eval_csv_row(spec, evaluate(config, spec, entry.instance)) + "\n";
    }
    emit.artifact(csv);
    emit.summary("eval: " + config.algo + " over " + std::to_string(entries.size()) + " instance(s)");
    return ExitCode::ok;
}

ExitCode cmd_report(const RunConfig& config, Emitter& emit) {
    const auto entries = corpus_entries(config);
    const std::vector<std::string> suite = {"ptrr", "hybrid", "cumulative_hybrid", "regret_hybrid", "envelope_greedy"};
    std::string csv = "entry,weight," + eval_csv_header() + "\n";
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& instance = entries[e].instance;
        require_valid(instance);
        for (const auto& algo : suite) {
            const auto spec = make_spec(config, algo, instance);
            csv += std::to_string(e) + "," + format_number(entries[e].weight) + "," +
                   eval_csv_row(spec, evaluate(config, spec, instance)) + "\n";
        }
    }
    emit.artifact(csv);
    emit.summary("report: " + std::to_string(entries.size()) + " instance(s) x " + std::to_string(suite.size()) +
                 " algorithms");
    return ExitCode::ok;
}

ExitCode cmd_tune(const RunConfig& config, Emitter& emit) {
    require_input(config);
    const auto distribution = load_instances(config.input);
    const auto family = tune_family_from_string(config.tune_family);
    const auto instances = distribution.draw(config.n, config.seed);
    Rng order_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<TuneSample> samples;
    samples.reserve(instances.size());
    for (const auto& instance : instances) {
        samples.push_back({instance, shuffled_permutation(instance.k(), order_rng)});
    }
    const LossSpec loss_spec{loss_kind_from_string(config.loss), config.h_bound};
    TuneParams params;
    if (family == TuneFamily::ptrr_alpha) {
        params.m = config.m;
        params.tau = config.tau;
    } else {
        params.m_terminal = config.m;
    }
    const auto result = erm_tune(samples, family, loss_spec, params);
    emit.artifact(dump_canonical(to_json(result)));
    std::string line = "tune: alpha_hat=" + format_number(result.alpha_hat);
    if (result.b_hat) line += " B_hat=" + std::to_string(*result.b_hat);
    line += " loss=" + format_number(result.loss) + " over " + std::to_string(samples.size()) + " samples";
    emit.summary(line);
    return ExitCode::ok;
}

ExitCode cmd_bounds(const RunConfig& config, Emitter& emit) {
    std::string csv = "name,params,value\n";
    auto row = [&csv](const BoundReport& r) {
        std::string params;
        for (const auto& [key, value] : r.inputs) {
            if (!params.empty()) params += ';';
            params += key + "=" + format_number(value);
        }
        csv += r.name + "," + params + "," + format_number(r.value) + "\n";
    };
    const auto k = static_cast<long long>(config.k);
    for (const auto& r : bound_table(config.alpha, config.beta, k, config.horizon)) row(r);
    const double h = config.h_bound.value_or(1.0);
    const double kt = static_cast<double>(config.k) * static_cast<double>(config.horizon);
    const double q_ptrr = config.q_bound.value_or(kt);
    const double q_hybrid = config.q_bound.value_or(kt * static_cast<double>(config.horizon));
    std::vector<std::pair<std::string, double>> inputs = {
        {"H", h}, {"eps", config.eps}, {"delta", config.delta}, {"c", config.c}};
    auto with_q = [&inputs](double q) {
        auto out = inputs;
        out.emplace_back("Q", q);
        return out;
    };
    row({"sample_complexity_ptrr", with_q(q_ptrr),
         static_cast<double>(sample_complexity(h, config.eps, config.delta, q_ptrr, config.c)), ""});
    row({"sample_complexity_hybrid", with_q(q_hybrid),
         static_cast<double>(sample_complexity(h, config.eps, config.delta, q_hybrid, config.c)), ""});
    emit.artifact(csv);
    emit.summary("bounds: alpha=" + format_number(config.alpha) + " beta=" + format_number(config.beta) +
                 " k=" + std::to_string(config.k) + " T=" + std::to_string(config.horizon));
    return ExitCode::ok;
}

ExitCode cmd_dual(const RunConfig& config, Emitter& emit) {
    const Instance instance = single_instance(config);
    require_valid(instance);
    const auto order = order_for(config, instance.k());
    const LossSpec loss_spec{loss_kind_from_string(config.loss), config.h_bound};
    std::string csv = "B,alpha_lo,alpha_hi,loss\n";
    auto rows = [&csv](const std::string& b, const DualProfile& profile) {
        for (const auto& p : profile.pieces) {
            csv += b + "," + format_number(p.lo) + "," + format_number(p.hi) + "," + format_number(p.loss) + "\n";
        }
    };
    std::size_t pieces = 0;
    if (config.algo == "ptrr") {
        const auto profile = dual_profile_ptrr(instance, order, loss_spec, config.m.value_or(default_m(instance)),
                                               config.tau.value_or(default_tau(instance)));
        rows("", profile);
        pieces = profile.piece_count();
    } else if (config.algo == "hybrid" || config.algo == "cumulative_hybrid") {
        const auto envelope = config.algo == "hybrid" ? Envelope::terminal : Envelope::cumulative;
        const auto profile = dual_profile_hybrid(instance, order, loss_spec,
                                                 config.m.value_or(best_final_curve(instance).final_value()), envelope);
        for (std::size_t b = 0; b < profile.per_budget.size(); ++b) rows(std::to_string(b), profile.per_budget[b]);
        pieces = profile.piece_count();
    } else {
        throw DomainError("--algo: dual profiles exist for ptrr, hybrid and cumulative_hybrid");
    }
    emit.artifact(csv);
    emit.summary("dual: " + config.algo + " pieces=" + std::to_string(pieces));
    return ExitCode::ok;
}

}  // namespace

ExitCode execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Emitter emit(config, out, err);
    try {
        if (config.command == "gen") return cmd_gen(config, emit);
        if (config.command == "validate") return cmd_validate(config, emit);
        if (config.command == "run") return cmd_run(config, emit);
        if (config.command == "eval") return cmd_eval(config, emit);
        if (config.command == "report") return cmd_report(config, emit);
        if (config.command == "tune") return cmd_tune(config, emit);
        if (config.command == "bounds") return cmd_bounds(config, emit);
        if (config.command == "dual") return cmd_dual(config, emit);
        err << "unknown command '" << config.command << "'\n";
        return ExitCode::error;
    } catch (const InvalidInput& e) {
        err << e.what() << "\n";
        return ExitCode::invalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitCode::error;
    }
}

}  // namespace imab
