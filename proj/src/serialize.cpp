#include "imab/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "imab/error.hpp"
#include "imab/format.hpp"

namespace imab {

namespace {

bool is_scalar(const Json& j) { return !j.is_object() && !j.is_array(); }

void dump_scalar(const Json& j, std::string& out) {
    if (j.is_number_float()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) throw DomainError("cannot write a non-finite number to JSON");
        out += format_number(x);
    } else {
        out += j.dump();
    }
}

void dump_value(const Json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
    const std::string close_pad(static_cast<std::size_t>(depth) * 2, ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            dump_value(it.value(), depth + 1, out);
        }
        out += "\n" + close_pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), is_scalar);
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                dump_scalar(j[i], out);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_value(j[i], depth + 1, out);
        }
        out += "\n" + close_pad + "]";
    } else {
        dump_scalar(j, out);
    }
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return std::to_string(line) + ":" + std::to_string(column);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object()) throw ParseError("expected an object", where);
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"", where);
    return *it;
}

double number(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number()) throw ParseError(std::string("field \"") + key + "\" must be a number", where);
    return v.get<double>();
}

Pulls integer(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_number_integer()) throw ParseError(std::string("field \"") + key + "\" must be an integer", where);
    return v.get<Pulls>();
}

std::string text(const Json& j, const char* key, const std::string& where) {
    const Json& v = field(j, key, where);
    if (!v.is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string", where);
    return v.get<std::string>();
}

template <class Fn>
auto rethrow_domain(const std::string& where, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError& e) {
        throw ParseError(e.what(), where);
    }
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string dump_canonical(const Json& value) {
    std::string out;
    dump_value(value, 0, out);
    out += "\n";
    return out;
}

Json parse_json(std::string_view text_in, const std::string& source) {
    try {
        return Json::parse(text_in.begin(), text_in.end());
    } catch (const nlohmann::json::parse_error& e) {
        const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        std::string message = e.what();
        // drop the library's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix
        if (auto colon = message.find(": "); colon != std::string::npos) message = message.substr(colon + 2);
        throw ParseError(message, source + ":" + line_column(text_in, byte));
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

Json to_json(const RewardCurve& curve) {
    Json j;
    j["kind"] = std::string(to_string(curve.kind()));
    switch (curve.kind()) {
        case CurveKind::power:
            j["m"] = curve.m();
            j["beta"] = curve.beta();
            break;
        case CurveKind::power_flat:
            j["m"] = curve.m();
            j["beta"] = curve.beta();
            j["s"] = curve.breakpoint();
            break;
        case CurveKind::constant: j["c"] = curve.level(); break;
        case CurveKind::linear_cap: j["cap"] = curve.cap(); break;
        case CurveKind::table: {
            Json values = Json::array();
            for (double v : curve.table_values()) values.push_back(v);
            j["values"] = std::move(values);
            break;
        }
    }
    j["T"] = curve.horizon();
    return j;
}

RewardCurve curve_from_json(const Json& j, const std::string& where) {
    const std::string kind_name = text(j, "kind", where);
    const Pulls horizon = integer(j, "T", where);
    return rethrow_domain(where, [&] {
        switch (curve_kind_from_string(kind_name)) {
            case CurveKind::power: return RewardCurve::power(number(j, "m", where), number(j, "beta", where), horizon);
            case CurveKind::power_flat:
                return RewardCurve::power_flat(number(j, "m", where), number(j, "beta", where),
                                               integer(j, "s", where), horizon);
            case CurveKind::constant: return RewardCurve::constant(number(j, "c", where), horizon);
            case CurveKind::linear_cap: return RewardCurve::linear_cap(number(j, "cap", where), horizon);
            case CurveKind::table: {
                const Json& values = field(j, "values", where);
                if (!values.is_array()) throw ParseError("field \"values\" must be an array", where);
                std::vector<double> out;
                out.reserve(values.size());
                for (std::size_t i = 0; i < values.size(); ++i) {
                    if (!values[i].is_number())
                        throw ParseError("table value must be a number", where + ".values[" + std::to_string(i) + "]");
                    out.push_back(values[i].get<double>());
                }
                return RewardCurve::table(std::move(out), horizon);
            }
        }
        throw ParseError("unknown curve kind", where);
    });
}

Json to_json(const Instance& instance) {
    Json j;
    j["k"] = instance.k();
    j["T"] = instance.horizon();
    j["label"] = instance.label();
    Json arms = Json::array();
    for (const auto& arm : instance.arms()) arms.push_back(to_json(arm));
    j["arms"] = std::move(arms);
    return j;
}

Instance instance_from_json(const Json& j, const std::string& where) {
    const Pulls k = integer(j, "k", where);
    const Pulls horizon = integer(j, "T", where);
    std::string label;
    if (j.contains("label")) label = text(j, "label", where);
    const Json& arms = field(j, "arms", where);
    if (!arms.is_array()) throw ParseError("field \"arms\" must be an array", where);
    if (static_cast<Pulls>(arms.size()) != k)
        throw ParseError("k = " + std::to_string(k) + " but " + std::to_string(arms.size()) + " arms given", where);
    std::vector<RewardCurve> curves;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const std::string at = where + ".arms[" + std::to_string(i) + "]";
        curves.push_back(curve_from_json(arms[i], at));
        if (curves.back().horizon() != horizon)
            throw ParseError("arm horizon differs from the instance's T", at);
    }
    return rethrow_domain(where, [&] { return Instance(std::move(curves), label); });
}

Json to_json(const GeneratorSpec& spec) {
    Json j;
    j["family"] = std::string(to_string(spec.family));
    switch (spec.family) {
        case GeneratorFamily::hard:
            j["k"] = spec.k;
            j["T"] = spec.horizon;
            j["m"] = spec.m;
            j["beta"] = spec.beta;
            j["s"] = spec.s;
            break;
        case GeneratorFamily::example:
            j["example"] = std::string(to_string(spec.example));
            j["k"] = spec.k;
            j["T"] = spec.horizon;
            break;
        case GeneratorFamily::random_concave:
            j["k"] = spec.k;
            j["T"] = spec.horizon;
            j["max_final"] = spec.max_final;
            break;
    }
    return j;
}

GeneratorSpec generator_from_json(const Json& j, const std::string& where) {
    GeneratorSpec spec;
    spec.family = rethrow_domain(where, [&] { return generator_family_from_string(text(j, "family", where)); });
    const Pulls k = integer(j, "k", where);
    if (k < 2) throw ParseError("generator needs k >= 2", where);
    spec.k = static_cast<std::size_t>(k);
    spec.horizon = integer(j, "T", where);
    switch (spec.family) {
        case GeneratorFamily::hard:
            spec.m = number(j, "m", where);
            spec.beta = number(j, "beta", where);
            spec.s = integer(j, "s", where);
            break;
        case GeneratorFamily::example:
            spec.example = rethrow_domain(where, [&] { return example_from_string(text(j, "example", where)); });
            break;
        case GeneratorFamily::random_concave: spec.max_final = number(j, "max_final", where); break;
    }
    return spec;
}

Json to_json(const InstanceDistribution& distribution) {
    Json j;
    if (distribution.generator) {
        j["generator"] = to_json(*distribution.generator);
        j["seed"] = distribution.seed;
        return j;
    }
    Json entries = Json::array();
    for (const auto& entry : distribution.entries) {
        Json e;
        e["weight"] = entry.weight;
        e["instance"] = to_json(entry.instance);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

InstanceDistribution distribution_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError("expected an object", where);
    InstanceDistribution out;
    const bool has_entries = j.contains("entries");
    const bool has_generator = j.contains("generator");
    if (has_entries == has_generator)
        throw ParseError("a corpus holds exactly one of \"entries\" or \"generator\"", where);
    if (has_generator) {
        out.generator = generator_from_json(j.at("generator"), where + ".generator");
        if (j.contains("seed")) {
            const Json& seed = j.at("seed");
            if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<std::int64_t>() >= 0))
                throw ParseError("seed must be a non-negative integer", where);
            out.seed = seed.get<std::uint64_t>();
        }
    } else {
        const Json& entries = j.at("entries");
        if (!entries.is_array() || entries.empty()) throw ParseError("\"entries\" must be a non-empty array", where);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string at = where + ".entries[" + std::to_string(i) + "]";
            const double weight = number(entries[i], "weight", at);
            out.entries.push_back({weight, instance_from_json(field(entries[i], "instance", at), at + ".instance")});
        }
    }
    rethrow_domain(where, [&] {
        out.check();
        return 0;
    });
    return out;
}

Json to_json(const AlgorithmSpec& spec) {
    Json j;
    j["variant"] = algo_name(spec);
    auto hybrid_like = [&j](double alpha, Pulls b, const std::optional<double>& m) {
        j["alpha"] = alpha;
        j["B"] = b;
        if (m) j["m_terminal"] = *m;
    };
    std::visit(overloaded{
                   [&](const PtrrSpec& s) {
                       j["alpha"] = s.alpha;
                       if (s.m) j["m"] = *s.m;
                       if (s.tau) j["tau"] = *s.tau;
                   },
                   [&](const HybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [&](const CumulativeHybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [&](const RegretHybridSpec& s) { hybrid_like(s.alpha, s.budget_b, s.m_terminal); },
                   [](const EnvelopeGreedySpec&) {},
                   [&](const DoublingSpec& s) {
                       j["alpha"] = s.alpha;
                       j["estimator"] = s.estimator;
                   },
               },
               spec);
    return j;
}

AlgorithmSpec algorithm_from_json(const Json& j, const std::string& where) {
    const std::string variant = text(j, "variant", where);
    auto alpha = [&] { return j.contains("alpha") ? number(j, "alpha", where) : 1.0; };
    auto optional_number = [&](const char* key) -> std::optional<double> {
        if (!j.contains(key)) return std::nullopt;
        return number(j, key, where);
    };
    if (variant == "ptrr") {
        PtrrSpec s{alpha(), optional_number("m"), std::nullopt};
        if (j.contains("tau")) s.tau = integer(j, "tau", where);
        return s;
    }
    if (variant == "hybrid") return HybridSpec{alpha(), integer(j, "B", where), optional_number("m_terminal")};
    if (variant == "cumulative_hybrid")
        return CumulativeHybridSpec{alpha(), integer(j, "B", where), optional_number("m_terminal")};
    if (variant == "regret_hybrid")
        return RegretHybridSpec{alpha(), integer(j, "B", where), optional_number("m_terminal")};
    if (variant == "envelope_greedy") return EnvelopeGreedySpec{};
    if (variant == "doubling_ptrr") {
        DoublingSpec s{alpha(), "round_robin_max"};
        if (j.contains("estimator")) s.estimator = text(j, "estimator", where);
        return s;
    }
    throw ParseError("unknown algorithm variant \"" + variant + "\"", where);
}

Json to_json(const EpisodeTrace& trace) {
    Json j;
    j["reward"] = trace.reward;
    j["chosen"] = trace.chosen;
    j["final_stage"] = trace.final_stage;
    j["commit_time"] = trace.commit_time ? Json(*trace.commit_time) : Json(nullptr);
    j["arm_pulls"] = trace.arm_pulls;
    Json stops = Json::array();
    for (const auto& s : trace.stops) {
        stops.push_back(Json{{"arm", s.arm}, {"t_stop", s.t_stop}, {"abandoned", s.abandoned}, {"accrued", s.accrued}});
    }
    j["stops"] = std::move(stops);
    Json stages = Json::array();
    for (const auto& s : trace.stages) {
        stages.push_back(Json{{"name", s.name}, {"start", s.start}, {"nominal", s.nominal},
                              {"actual", s.actual}, {"reward", s.reward}});
    }
    j["stages"] = std::move(stages);
    if (!trace.cycles.empty()) {
        Json cycles = Json::array();
        for (const auto& c : trace.cycles) {
            cycles.push_back(Json{{"length", c.length}, {"tau", c.tau}, {"m_hat", c.m_hat}, {"m", c.m},
                                  {"explore_actual", c.explore.actual}, {"exploit_nominal", c.exploit.nominal},
                                  {"exploit_actual", c.exploit.actual}, {"exploit_reward", c.exploit.reward}});
        }
        j["cycles"] = std::move(cycles);
    }
    Json pulls = Json::array();
    for (const auto& p : trace.pulls) pulls.push_back(Json::array({p.time, p.arm, p.arm_pulls, p.reward}));
    j["pulls"] = std::move(pulls);
    return j;
}

Json to_json(const TuneResult& result) {
    Json j;
    j["alpha_hat"] = result.alpha_hat;
    if (result.b_hat) j["B_hat"] = *result.b_hat;
    j["loss"] = result.loss;
    j["candidates"] = result.candidates;
    j["per_instance"] = result.per_instance;
    return j;
}

void save_instance(const std::filesystem::path& path, const Instance& instance) {
    write_text(path, dump_canonical(to_json(instance)));
}

Instance load_instance(const std::filesystem::path& path) {
    const std::string source = path.string();
    return instance_from_json(parse_json(read_text(path), source), source);
}

void save_corpus(const std::filesystem::path& path, const InstanceDistribution& distribution) {
    distribution.check();
    write_text(path, dump_canonical(to_json(distribution)));
}

InstanceDistribution load_corpus(const std::filesystem::path& path) {
    const std::string source = path.string();
    return distribution_from_json(parse_json(read_text(path), source), source);
}

InstanceDistribution load_instances(const std::filesystem::path& path) {
    const std::string source = path.string();
    const Json j = parse_json(read_text(path), source);
    if (j.is_object() && j.contains("arms")) {
        InstanceDistribution out;
        out.entries.push_back({1.0, instance_from_json(j, source)});
        return out;
    }
    return distribution_from_json(j, source);
}

}  // namespace imab
