#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "imab/algorithms.hpp"
#include "imab/curves.hpp"
#include "imab/engine.hpp"
#include "imab/instances.hpp"
#include "imab/tuning.hpp"

namespace imab {

using Json = nlohmann::ordered_json;

// Two-space indentation, objects in insertion order, arrays of scalars on one line, doubles with
// 17 significant digits. Throws DomainError on non-finite numbers.
std::string dump_canonical(const Json& value);

// Throws ParseError with "source:line:column" on malformed text.
Json parse_json(std::string_view text, const std::string& source);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

Json to_json(const RewardCurve& curve);
Json to_json(const Instance& instance);
Json to_json(const GeneratorSpec& spec);
Json to_json(const InstanceDistribution& distribution);
Json to_json(const AlgorithmSpec& spec);
Json to_json(const EpisodeTrace& trace);
Json to_json(const TuneResult& result);

// `where` prefixes error locations (a file name or JSON path).
RewardCurve curve_from_json(const Json& j, const std::string& where);
Instance instance_from_json(const Json& j, const std::string& where);
GeneratorSpec generator_from_json(const Json& j, const std::string& where);
InstanceDistribution distribution_from_json(const Json& j, const std::string& where);
AlgorithmSpec algorithm_from_json(const Json& j, const std::string& where);

void save_instance(const std::filesystem::path& path, const Instance& instance);
Instance load_instance(const std::filesystem::path& path);

// Corpus files; weights are checked on load.
void save_corpus(const std::filesystem::path& path, const InstanceDistribution& distribution);
InstanceDistribution load_corpus(const std::filesystem::path& path);

// Accepts an instance file (wrapped as a single entry of weight 1) or a corpus file.
InstanceDistribution load_instances(const std::filesystem::path& path);

}  // namespace imab
