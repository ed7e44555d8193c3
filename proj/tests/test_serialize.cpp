#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "helpers.hpp"
#include "imab/error.hpp"
#include "imab/serialize.hpp"

using namespace imab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "imab_test_serialize";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("canonical dump") {
    Json j;
    j["b"] = 0.1;
    j["a"] = Json::array({1, 2.5, "x"});
    j["c"] = Json::object();
    j["c"]["n"] = Json::array({Json::object({{"z", 1}})});
    const auto text = dump_canonical(j);
    CHECK(text ==
          "{\n"
          "  \"b\": 0.10000000000000001,\n"
          "  \"a\": [1, 2.5, \"x\"],\n"
          "  \"c\": {\n"
          "    \"n\": [\n"
          "      {\n"
          "        \"z\": 1\n"
          "      }\n"
          "    ]\n"
          "  }\n"
          "}\n");
    Json bad;
    bad["x"] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(dump_canonical(bad), DomainError);
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_json("{\n  \"k\": 2,\n  oops\n}", "inst.json");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.where() == "inst.json:3:3");
    }
}

TEST_CASE("semantic errors carry a json path") {
    const auto j = parse_json(R"({"k": 2, "T": 3, "label": "", "arms": [
        {"kind": "constant", "c": 1, "T": 3}, {"kind": "constant", "T": 3}]})", "x");
    try {
        instance_from_json(j, "x");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.where() == "x.arms[1]");
        CHECK(std::string(e.what()).find("\"c\"") != std::string::npos);
    }
}

TEST_CASE("instance round trips, including table curves") {
    Rng rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = test::random_instance(rng, 5, 40);
        const auto text = dump_canonical(to_json(inst));
        const auto back = instance_from_json(parse_json(text, "mem"), "mem");
        CHECK(back == inst);
        CHECK(dump_canonical(to_json(back)) == text);
    }
    const auto ex1 = make_example(Example::ex1, 4, 40);
    const auto path = scratch("ex1.json");
    save_instance(path, ex1);
    CHECK(load_instance(path) == ex1);
}

TEST_CASE("corpus round trip and weight check") {
    InstanceDistribution d;
    d.entries.push_back({0.25, make_example(Example::ex1, 3, 12)});
    d.entries.push_back({0.75, make_example(Example::ex3, 3, 12)});
    const auto path = scratch("corpus.json");
    save_corpus(path, d);
    CHECK(load_corpus(path) == d);
    CHECK(load_instances(path) == d);

    InstanceDistribution g;
    g.generator = GeneratorSpec{GeneratorFamily::random_concave, 3, 20, 1.0, 1.0, 1, Example::ex1, 0.5};
    g.seed = 7;
    save_corpus(path, g);
    CHECK(load_corpus(path) == g);

    auto j = to_json(d);
    j["entries"][0]["weight"] = 0.3;
    write_text(path, dump_canonical(j));
    CHECK_THROWS_AS(load_corpus(path), ParseError);

    const auto single = scratch("single.json");
    save_instance(single, make_example(Example::ex2, 2, 8));
    const auto wrapped = load_instances(single);
    REQUIRE(wrapped.entries.size() == 1);
    CHECK(wrapped.entries[0].weight == 1.0);
}

TEST_CASE("algorithm specs round trip") {
    const std::vector<AlgorithmSpec> specs = {
        PtrrSpec{0.5, 0.7, 30},          PtrrSpec{1.0, std::nullopt, std::nullopt},
        HybridSpec{0.25, 10, 1.0},       CumulativeHybridSpec{1.0, 0, std::nullopt},
        RegretHybridSpec{0.75, 12, 2.0}, EnvelopeGreedySpec{},
        DoublingSpec{0.5, "oracle"}};
    for (const auto& spec : specs) {
        CHECK(algorithm_from_json(to_json(spec), "spec") == spec);
    }
    CHECK_THROWS_AS(algorithm_from_json(parse_json(R"({"variant": "ucb"})", "s"), "s"), ParseError);
}

TEST_CASE("trace and tune result serialize") {
    const auto inst = make_example(Example::ex1, 2, 6);
    const auto trace = ptrr_run(inst, 1.0, 0.5, 4, {1, 0}, 6);
    const auto j = to_json(trace);
    CHECK(j.at("reward").get<double>() == trace.reward);
    CHECK(j.at("pulls").size() == 6);
    TuneResult r;
    r.alpha_hat = 0.5;
    r.b_hat = 3;
    r.loss = 0.25;
    r.candidates = 4;
    r.per_instance = {0.25};
    const auto tj = to_json(r);
    CHECK(tj.at("alpha_hat").get<double>() == 0.5);
    CHECK(tj.at("B_hat").get<long long>() == 3);
    CHECK(tj.at("candidates").get<long long>() == 4);
}

TEST_CASE("missing files") {
    CHECK_THROWS(load_instance(scratch("nope.json")));
}
