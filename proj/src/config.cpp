#include "jtd/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "jtd/measure.hpp"

namespace jtd {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
}

double number(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::array<double, 2> pair(const json& obj, const char* key, const std::string& where, bool required = true,
                           std::array<double, 2> fallback = {0.0, 0.0})
{
    if (!obj.contains(key)) {
        if (required) throw ConfigError(where + ": missing key \"" + key + "\"");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(where + "." + key + ": expected [state0, state1] numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

AssetParams parse_asset(const json& obj, const std::string& where)
{
    reject_unknown(obj, where, {"s0", "c", "sigma", "h"});
    AssetParams a;
    a.s0 = number(obj, "s0", where);
    a.c = pair(obj, "c", where);
    a.sigma = pair(obj, "sigma", where, false);
    a.h = pair(obj, "h", where, false);
    return a;
}

template <class T>
T integer(const json& obj, const char* key, const std::string& where, T fallback)
{
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(where + "." + key + ": expected a nonnegative integer");
    return static_cast<T>(v.get<unsigned long long>());
}

}  // namespace

ModelConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(doc, "config", {"lambda", "r", "asset1", "asset2", "measure", "controls"});

    ModelConfig cfg;
    cfg.market.lambda = pair(doc, "lambda", "config");
    cfg.market.r = pair(doc, "r", "config", false);
    if (!doc.contains("asset1")) throw ConfigError("config: missing key \"asset1\"");
    cfg.market.asset1 = parse_asset(doc.at("asset1"), "asset1");
    if (doc.contains("asset2")) cfg.market.asset2 = parse_asset(doc.at("asset2"), "asset2");

    if (doc.contains("measure")) {
        const json& m = doc.at("measure");
        reject_unknown(m, "measure", {"theta", "c_star", "sigma_star"});
        MeasureSpec spec;
        if (m.contains("theta")) {
            if (m.contains("c_star") || m.contains("sigma_star"))
                throw ConfigError("measure: give either theta or (c_star, sigma_star), not both");
            spec.theta = pair(m, "theta", "measure");
        } else {
            spec.shift = MeasureShift::from_drift_shift(pair(m, "c_star", "measure"),
                                                        pair(m, "sigma_star", "measure"), cfg.market.lambda);
        }
        cfg.measure = spec;
    }

    if (doc.contains("controls")) {
        const json& c = doc.at("controls");
        reject_unknown(c, "controls", {"quadrature_nodes", "tolerance", "seed", "n_paths", "chunk_size"});
        cfg.controls.quadrature_nodes = integer<int>(c, "quadrature_nodes", "controls", cfg.controls.quadrature_nodes);
        if (c.contains("tolerance")) cfg.controls.tolerance = number(c, "tolerance", "controls");
        cfg.controls.seed = integer<std::uint64_t>(c, "seed", "controls", cfg.controls.seed);
        cfg.controls.n_paths = integer<std::size_t>(c, "n_paths", "controls", cfg.controls.n_paths);
        cfg.controls.chunk_size = integer<std::size_t>(c, "chunk_size", "controls", cfg.controls.chunk_size);
        if (cfg.controls.quadrature_nodes < 1) throw ConfigError("controls.quadrature_nodes must be >= 1");
        if (cfg.controls.chunk_size < 1) throw ConfigError("controls.chunk_size must be >= 1");
        if (!(cfg.controls.tolerance > 0.0)) throw ConfigError("controls.tolerance must be positive");
    }
    return cfg;
}

ModelConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

MeasureShift resolve_measure(const MarketModel& market, const MeasureSpec& spec)
{
    if (spec.theta) return single_asset_measure_family(market, (*spec.theta)[0], (*spec.theta)[1]);
    if (spec.shift) return *spec.shift;
    throw ConfigError("measure: empty specification");
}

}  // namespace jtd
