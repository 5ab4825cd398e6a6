#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochwave/solver.hpp"
#include "stochwave/weights.hpp"

namespace stochwave {

struct GridSpec {
    int M = 0;
    int N = 0;
    double T = 0.0;
};

/// One coefficient: a constant or a named preset field.
struct CoefficientSpec {
    std::optional<double> constant;
    std::string preset;  ///< used when `constant` is empty
};

/// Presets: "zero", "one", "sine" = sin(pi x), "decay" = exp(-t),
/// "bump" = 0.5 sin(pi x) (1 + t/T) / 2.
const std::vector<std::string>& coefficient_presets();

enum class DataKind { Zero, Sine, Random };

struct DataSpec {
    DataKind kind = DataKind::Zero;
    int mode = 1;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
};

struct DataSet {
    DataSpec y0, y1, g, f;
};

struct SweepSpec {
    std::string parameter;  ///< dotted name, e.g. "weight.s"
    std::vector<double> values;
};

struct OrderSpec {
    std::vector<int> levels;  ///< M per level, coarse to fine
    double dt_over_dx = 1.0;
};

struct IdentitySpec {
    int pairs = 1;
    std::uint64_t seed = 0;
};

/// Second dataset of a stability run. The pair is coupled only when its
/// master seed equals mc.master_seed.
struct PairSpec {
    DataSet data;
    std::optional<std::uint64_t> master_seed;
};

struct RunConfig {
    GridSpec grid;
    WeightParams weight;
    double kappa = 0.0;
    CoefficientSpec a, b, c, d;
    DataSet data;
    SourceMode g_mode = SourceMode::SpaceTime;
    int paths = 1;
    std::uint64_t master_seed = 0;
    unsigned threads = 1;
    std::optional<SweepSpec> sweep;
    std::optional<OrderSpec> order;
    IdentitySpec identities;
    std::optional<PairSpec> pair;
    std::string output_dir = "out";

    /// Effective configuration (after overrides) serialized with sorted keys.
    std::string canonical;
};

struct ConfigOverrides {
    std::optional<int> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
};

/// Strict parse: unknown keys, missing required keys (grid.M, grid.N,
/// grid.T) and type mismatches throw ConfigError with a JSON pointer.
RunConfig parse_config_text(const std::string& text, const ConfigOverrides& ov = {});
RunConfig parse_config(const std::string& path, const ConfigOverrides& ov = {});

/// Copy of `cfg` with one sweepable scalar replaced.
RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value);

Grid build_grid(const RunConfig& cfg);
WeightParams weight_params(const RunConfig& cfg);
SchemeCoefficients build_coefficients(const RunConfig& cfg, const Grid& grid);
ProblemData build_data(const DataSet& set, SourceMode g_mode, const Grid& grid);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace stochwave
