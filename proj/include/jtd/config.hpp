#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "jtd/model.hpp"

namespace jtd {

/// Missing file, malformed JSON, or a schema violation in a model configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunControls {
    int quadrature_nodes = 256;
    double tolerance = 1e-12;
    std::uint64_t seed = 20090101;
    std::size_t n_paths = 100000;
    std::size_t chunk_size = 4096;
};

/// Measure specification in a config: either an explicit Girsanov shift or a member
/// (theta0, theta1) of the one-asset risk-neutral family.
struct MeasureSpec {
    std::optional<MeasureShift> shift;
    std::optional<std::array<double, 2>> theta;
};

struct ModelConfig {
    MarketModel market;
    std::optional<MeasureSpec> measure;
    RunControls controls;
};

/// Parses and schema-checks a config document. Unknown keys are rejected.
ModelConfig parse_config(const std::string& json_text);
ModelConfig load_config(const std::filesystem::path& path);

/// Resolves a MeasureSpec against the market (theta -> family member).
MeasureShift resolve_measure(const MarketModel& market, const MeasureSpec& spec);

}  // namespace jtd
