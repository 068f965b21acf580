#pragma once

// Scenario configuration: a strict JSON schema where unknown keys are
// errors.  Parsing and serialization round-trip exactly.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "pct/errors.hpp"

namespace pct {

struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed_from = 0;
    std::uint64_t seed_to = 0;   // inclusive; 0/0 means "use scenario defaults"
    bool seeds_set = false;
    long ticks = 0;              // 0 means "use scenario default"
    nlohmann::json params = nlohmann::json::object();
    std::string out_dir;
};

inline void reject_unknown_keys(const nlohmann::json& object, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : object.items()) {
        if (!allowed.contains(key)) {
            throw config_error("config: unknown key '" + key + "' in " + where);
        }
    }
}

inline ScenarioConfig parse_config(const nlohmann::json& json) {
    if (!json.is_object()) {
        throw config_error("config: top level must be an object");
    }
    reject_unknown_keys(json, {"scenario", "seed", "seeds", "ticks", "params", "out_dir"},
                        "top level");
    ScenarioConfig config;
    if (!json.contains("scenario") || !json.at("scenario").is_string()) {
        throw config_error("config: missing required string field 'scenario'");
    }
    config.scenario = json.at("scenario").get<std::string>();
    if (json.contains("seed") && json.contains("seeds")) {
        throw config_error("config: 'seed' and 'seeds' are mutually exclusive");
    }
    if (json.contains("seed")) {
        if (!json.at("seed").is_number_unsigned()) {
            throw config_error("config: field 'seed' must be a non-negative integer");
        }
        config.seed_from = config.seed_to = json.at("seed").get<std::uint64_t>();
        config.seeds_set = true;
    }
    if (json.contains("seeds")) {
        const auto& seeds = json.at("seeds");
        if (!seeds.is_object()) {
            throw config_error("config: field 'seeds' must be an object {from, to}");
        }
        reject_unknown_keys(seeds, {"from", "to"}, "seeds");
        if (!seeds.contains("from") || !seeds.contains("to") ||
            !seeds.at("from").is_number_unsigned() || !seeds.at("to").is_number_unsigned()) {
            throw config_error("config: 'seeds' needs unsigned integer fields 'from' and 'to'");
        }
        config.seed_from = seeds.at("from").get<std::uint64_t>();
        config.seed_to = seeds.at("to").get<std::uint64_t>();
        if (config.seed_to < config.seed_from) {
            throw config_error("config: seeds.to must be >= seeds.from");
        }
        config.seeds_set = true;
    }
    if (json.contains("ticks")) {
        if (!json.at("ticks").is_number_integer() || json.at("ticks").get<long>() < 1) {
            throw config_error("config: field 'ticks' must be a positive integer");
        }
        config.ticks = json.at("ticks").get<long>();
    }
    if (json.contains("params")) {
        if (!json.at("params").is_object()) {
            throw config_error("config: field 'params' must be an object");
        }
        config.params = json.at("params");
    }
    if (json.contains("out_dir")) {
        if (!json.at("out_dir").is_string()) {
            throw config_error("config: field 'out_dir' must be a string");
        }
        config.out_dir = json.at("out_dir").get<std::string>();
    }
    return config;
}

inline nlohmann::json to_json(const ScenarioConfig& config) {
    nlohmann::json json;
    json["scenario"] = config.scenario;
    if (config.seeds_set) {
        if (config.seed_from == config.seed_to) {
            json["seed"] = config.seed_from;
        } else {
            json["seeds"] = {{"from", config.seed_from}, {"to", config.seed_to}};
        }
    }
    if (config.ticks > 0) json["ticks"] = config.ticks;
    if (!config.params.empty()) json["params"] = config.params;
    if (!config.out_dir.empty()) json["out_dir"] = config.out_dir;
    return json;
}

inline ScenarioConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("config: cannot open " + path.string());
    }
    nlohmann::json json;
    try {
        json = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& error) {
        throw config_error("config: " + path.string() + ": " + error.what());
    }
    return parse_config(json);
}

// Typed parameter access with defaults; unknown-key checks happen per
// scenario against its declared parameter set.
inline double param_number(const nlohmann::json& params, const std::string& key,
                           double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params.at(key).is_number()) {
        throw config_error("config: param '" + key + "' must be a number");
    }
    return params.at(key).get<double>();
}

inline long param_integer(const nlohmann::json& params, const std::string& key, long fallback) {
    if (!params.contains(key)) return fallback;
    if (!params.at(key).is_number_integer()) {
        throw config_error("config: param '" + key + "' must be an integer");
    }
    return params.at(key).get<long>();
}

inline std::vector<double> param_number_list(const nlohmann::json& params, const std::string& key,
                                             std::vector<double> fallback) {
    if (!params.contains(key)) return fallback;
    const auto& value = params.at(key);
    if (!value.is_array()) {
        throw config_error("config: param '" + key + "' must be an array of numbers");
    }
    std::vector<double> result;
    for (const auto& item : value) {
        if (!item.is_number()) {
            throw config_error("config: param '" + key + "' must contain only numbers");
        }
        result.push_back(item.get<double>());
    }
    return result;
}

}  // namespace pct
