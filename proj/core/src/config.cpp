#include "idealtally/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace idealtally {

namespace {

using nlohmann::json;

BigInt json_to_bigint(const json& v) {
    if (v.is_number_integer()) return BigInt(v.get<long long>());
    if (v.is_number_unsigned()) return BigInt(v.get<unsigned long long>());
    if (v.is_string()) return BigInt(v.get<std::string>());
    throw std::invalid_argument("field config: expected an integer (number or string)");
}

}  // namespace

FieldConfig parse_field_config(const std::string& json_text) {
    json j = json::parse(json_text);
    FieldConfig cfg;
    if (!j.contains("min_poly") || !j["min_poly"].is_array())
        throw std::invalid_argument("field config: min_poly array is required");
    for (const auto& c : j["min_poly"]) cfg.min_poly.push_back(json_to_bigint(c));
    if (j.contains("disc")) cfg.disc = json_to_bigint(j["disc"]);
    if (j.contains("regulator")) cfg.regulator = j["regulator"].get<double>();
    if (j.contains("class_number")) cfg.class_number = j["class_number"].get<std::int64_t>();
    if (j.contains("roots_of_unity")) cfg.roots_of_unity = j["roots_of_unity"].get<int>();
    if (j.contains("fundamental_units")) {
        for (const auto& unit : j["fundamental_units"]) {
            std::vector<BigInt> coords;
            for (const auto& c : unit) coords.push_back(json_to_bigint(c));
            cfg.fundamental_units.push_back(std::move(coords));
        }
    }
    if (j.contains("prime_overrides")) {
        for (const auto& [key, value] : j["prime_overrides"].items()) {
            std::uint64_t p = std::stoull(key);
            std::vector<std::pair<int, int>> factors;
            for (const auto& fe : value)
                factors.emplace_back(fe.at(0).get<int>(), fe.at(1).get<int>());
            cfg.prime_overrides[p] = std::move(factors);
        }
    }
    if (j.contains("embedding_precision"))
        cfg.embedding_precision = j["embedding_precision"].get<double>();
    if (j.contains("name")) cfg.name = j["name"].get<std::string>();
    return cfg;
}

FieldConfig load_field_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open field config: " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    FieldConfig cfg = parse_field_config(text);
    if (cfg.name.empty()) cfg.name = path.stem().string();
    return cfg;
}

std::string field_config_to_json(const FieldConfig& cfg) {
    json j;
    json poly = json::array();
    for (const auto& c : cfg.min_poly) poly.push_back(c.str());
    j["min_poly"] = poly;
    if (cfg.disc) j["disc"] = cfg.disc->str();
    if (cfg.regulator) j["regulator"] = *cfg.regulator;
    if (cfg.class_number) j["class_number"] = *cfg.class_number;
    if (cfg.roots_of_unity) j["roots_of_unity"] = *cfg.roots_of_unity;
    if (!cfg.fundamental_units.empty()) {
        json units = json::array();
        for (const auto& u : cfg.fundamental_units) {
            json coords = json::array();
            for (const auto& c : u) coords.push_back(c.str());
            units.push_back(coords);
        }
        j["fundamental_units"] = units;
    }
    if (!cfg.prime_overrides.empty()) {
        json overrides = json::object();
        for (const auto& [p, factors] : cfg.prime_overrides) {
            json list = json::array();
            for (auto [f, e] : factors) list.push_back(json::array({f, e}));
            overrides[std::to_string(p)] = list;
        }
        j["prime_overrides"] = overrides;
    }
    if (!cfg.name.empty()) j["name"] = cfg.name;
    return j.dump(2);
}

}  // namespace idealtally
