#include "stochwave/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stochwave/errors.hpp"
#include "stochwave/fields.hpp"

namespace stochwave {

using nlohmann::json;

const std::vector<std::string>& coefficient_presets()
{
    static const std::vector<std::string> names{"zero", "one", "sine", "decay", "bump"};
    return names;
}

namespace {

// Reader over one JSON object that remembers which keys were consumed.
class Obj {
public:
    Obj(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr))
    {
        if (!j_.is_object())
            throw ConfigError(where(), "expected an object");
    }

    std::string at(const std::string& key) const { return ptr_ + "/" + key; }
    std::string where() const { return ptr_.empty() ? "/" : ptr_; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& get(const std::string& key)
    {
        seen_.insert(key);
        if (!j_.contains(key))
            throw ConfigError(at(key), "missing required key");
        return j_.at(key);
    }

    double real(const std::string& key, std::optional<double> dflt = std::nullopt)
    {
        if (!has(key) && dflt)
            return *dflt;
        const json& v = get(key);
        if (!v.is_number())
            throw ConfigError(at(key), "type mismatch: expected a number, got " + type(v));
        return v.get<double>();
    }

    int integer(const std::string& key, std::optional<int> dflt = std::nullopt)
    {
        if (!has(key) && dflt)
            return *dflt;
        const json& v = get(key);
        if (!v.is_number_integer())
            throw ConfigError(at(key), "type mismatch: expected an integer, got " + type(v));
        const auto x = v.get<std::int64_t>();
        if (x < INT32_MIN || x > INT32_MAX)
            throw ConfigError(at(key), "integer out of range");
        return static_cast<int>(x);
    }

    std::uint64_t u64(const std::string& key, std::optional<std::uint64_t> dflt = std::nullopt)
    {
        if (!has(key) && dflt)
            return *dflt;
        const json& v = get(key);
        if (v.is_number_unsigned())
            return v.get<std::uint64_t>();
        if (v.is_number_integer())
            throw ConfigError(at(key), "expected a nonnegative integer");
        throw ConfigError(at(key), "type mismatch: expected an unsigned integer, got " + type(v));
    }

    std::string text(const std::string& key, std::optional<std::string> dflt = std::nullopt)
    {
        if (!has(key) && dflt)
            return *dflt;
        const json& v = get(key);
        if (!v.is_string())
            throw ConfigError(at(key), "type mismatch: expected a string, got " + type(v));
        return v.get<std::string>();
    }

    std::optional<Obj> child(const std::string& key, bool required = false)
    {
        if (!has(key)) {
            if (required)
                get(key);
            return std::nullopt;
        }
        return Obj(get(key), at(key));
    }

    /// Rejects every key that was never read.
    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(at(it.key()), "unknown key");
    }

    static std::string type(const json& v) { return v.type_name(); }

private:
    const json& j_;
    std::string ptr_;
    std::set<std::string> seen_;
};

CoefficientSpec parse_coefficient(Obj o)
{
    CoefficientSpec spec;
    if (o.has("constant") && o.has("preset"))
        throw ConfigError(o.where(), "give either constant or preset, not both");
    if (o.has("constant")) {
        spec.constant = o.real("constant");
        if (!std::isfinite(*spec.constant))
            throw ConfigError(o.at("constant"), "must be finite");
    } else if (o.has("preset")) {
        spec.preset = o.text("preset");
        const auto& names = coefficient_presets();
        if (std::find(names.begin(), names.end(), spec.preset) == names.end())
            throw ConfigError(o.at("preset"), "unknown preset '" + spec.preset + "'");
    } else {
        throw ConfigError(o.where(), "expected constant or preset");
    }
    o.finish();
    return spec;
}

DataSpec parse_data_spec(const json& j, const std::string& ptr)
{
    DataSpec spec;
    if (j.is_string()) {
        if (j.get<std::string>() != "zero")
            throw ConfigError(ptr, "only \"zero\" may be given as a string");
        return spec;
    }
    if (!j.is_object() || j.size() != 1)
        throw ConfigError(ptr, "expected one of {zero, sine, random}");
    const std::string kind = j.begin().key();
    const json& body = j.begin().value();
    const std::string bptr = ptr + "/" + kind;
    if (kind == "zero") {
        if (!(body.is_null() || (body.is_object() && body.empty())))
            throw ConfigError(bptr, "zero takes no parameters");
        return spec;
    }
    Obj o(body, bptr);
    if (kind == "sine") {
        spec.kind = DataKind::Sine;
        spec.mode = o.integer("mode", 1);
        spec.amplitude = o.real("amplitude", 1.0);
        if (spec.mode < 1)
            throw ConfigError(o.at("mode"), "mode must be >= 1");
    } else if (kind == "random") {
        spec.kind = DataKind::Random;
        spec.seed = o.u64("seed", 0);
        spec.amplitude = o.real("amplitude", 1.0);
    } else {
        throw ConfigError(bptr, "unknown data kind '" + kind + "'");
    }
    o.finish();
    return spec;
}

DataSet parse_dataset(Obj o)
{
    DataSet set;
    const std::pair<const char*, DataSpec*> fields[] = {
        {"y0", &set.y0}, {"y1", &set.y1}, {"g", &set.g}, {"f", &set.f}};
    for (auto [name, spec] : fields)
        if (o.has(name))
            *spec = parse_data_spec(o.get(name), o.at(name));
    o.finish();
    return set;
}

const std::vector<std::string>& sweepable()
{
    static const std::vector<std::string> names{
        "grid.M", "grid.N", "grid.T", "weight.s", "weight.lambda", "weight.beta",
        "weight.xstar", "weight.mconst", "weight.epsilon", "weight.dt_multiplier",
        "weight.kappa", "mc.paths", "coefficients.a", "coefficients.b",
        "coefficients.c", "coefficients.d"};
    return names;
}

void apply_overrides(json& j, const ConfigOverrides& ov)
{
    if (!j.is_object())
        return;
    if (ov.paths)
        j["mc"]["paths"] = *ov.paths;
    if (ov.seed)
        j["mc"]["master_seed"] = *ov.seed;
    if (ov.output_dir)
        j["output_dir"] = *ov.output_dir;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const ConfigOverrides& ov)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", std::string("invalid JSON: ") + e.what());
    }
    apply_overrides(j, ov);

    RunConfig cfg;
    Obj root(j, "");
    {
        Obj g = *root.child("grid", true);
        cfg.grid = {g.integer("M"), g.integer("N"), g.real("T")};
        g.finish();
        try {
            stochwave::build_grid(cfg.grid.M, cfg.grid.N, cfg.grid.T);
        } catch (const InvalidArgument& e) {
            throw ConfigError("/grid", e.what());
        }
    }
    if (auto w = root.child("weight")) {
        WeightParams& p = cfg.weight;
        p.s = w->real("s", p.s);
        p.lambda = w->real("lambda", p.lambda);
        p.beta = w->real("beta", p.beta);
        p.xstar = w->real("xstar", p.xstar);
        p.mconst = w->real("mconst", p.mconst);
        p.epsilon = w->real("epsilon", p.epsilon);
        p.dt_multiplier = w->real("dt_multiplier", p.dt_multiplier);
        cfg.kappa = w->real("kappa", 0.0);
        w->finish();
    }
    cfg.weight.T = cfg.grid.T;
    try {
        cfg.weight.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("/weight", e.what());
    }
    if (!std::isfinite(cfg.kappa))
        throw ConfigError("/weight/kappa", "must be finite");

    for (CoefficientSpec* c : {&cfg.a, &cfg.b, &cfg.c, &cfg.d})
        c->constant = 0.0;
    if (auto co = root.child("coefficients")) {
        const std::pair<const char*, CoefficientSpec*> names[] = {
            {"a", &cfg.a}, {"b", &cfg.b}, {"c", &cfg.c}, {"d", &cfg.d}};
        for (auto [name, spec] : names)
            if (auto o = co->child(name))
                *spec = parse_coefficient(*o);
        co->finish();
    }
    if (auto d = root.child("data"))
        cfg.data = parse_dataset(*d);
    if (root.has("g_mode")) {
        const std::string m = root.text("g_mode");
        if (m == "space_time")
            cfg.g_mode = SourceMode::SpaceTime;
        else if (m == "space_only")
            cfg.g_mode = SourceMode::SpaceOnly;
        else
            throw ConfigError("/g_mode", "expected space_time or space_only");
    }
    if (auto mc = root.child("mc")) {
        cfg.paths = mc->integer("paths", 1);
        cfg.master_seed = mc->u64("master_seed", 0);
        const int threads = mc->integer("threads", 1);
        if (threads < 0)
            throw ConfigError(mc->at("threads"), "must be >= 0");
        cfg.threads = static_cast<unsigned>(threads);
        if (cfg.paths < 1)
            throw ConfigError(mc->at("paths"), "paths must be >= 1");
        mc->finish();
    }
    if (auto sw = root.child("sweep")) {
        SweepSpec s;
        s.parameter = sw->text("parameter");
        const auto& names = sweepable();
        if (std::find(names.begin(), names.end(), s.parameter) == names.end())
            throw ConfigError(sw->at("parameter"), "not a sweepable scalar: " + s.parameter);
        const json& vals = sw->get("values");
        if (!vals.is_array() || vals.empty())
            throw ConfigError(sw->at("values"), "expected a nonempty array of numbers");
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i].is_number())
                throw ConfigError(sw->at("values") + "/" + std::to_string(i),
                                  "type mismatch: expected a number");
            s.values.push_back(vals[i].get<double>());
        }
        sw->finish();
        cfg.sweep = s;
    }
    if (auto od = root.child("order")) {
        OrderSpec o;
        const json& lv = od->get("levels");
        if (!lv.is_array())
            throw ConfigError(od->at("levels"), "expected an array of integers");
        for (std::size_t i = 0; i < lv.size(); ++i) {
            if (!lv[i].is_number_integer())
                throw ConfigError(od->at("levels") + "/" + std::to_string(i),
                                  "type mismatch: expected an integer");
            o.levels.push_back(lv[i].get<int>());
        }
        o.dt_over_dx = od->real("dt_over_dx", 1.0);
        if (!(o.dt_over_dx > 0.0))
            throw ConfigError(od->at("dt_over_dx"), "must be positive");
        od->finish();
        cfg.order = o;
    }
    if (auto id = root.child("identities")) {
        cfg.identities.pairs = id->integer("pairs", 1);
        cfg.identities.seed = id->u64("seed", 0);
        if (cfg.identities.pairs < 1)
            throw ConfigError(id->at("pairs"), "must be >= 1");
        id->finish();
    }
    if (auto pr = root.child("pair")) {
        PairSpec p;
        if (auto d = pr->child("data"))
            p.data = parse_dataset(*d);
        if (pr->has("master_seed"))
            p.master_seed = pr->u64("master_seed");
        pr->finish();
        cfg.pair = p;
    }
    cfg.output_dir = root.text("output_dir", cfg.output_dir);
    root.finish();

    cfg.canonical = j.dump();
    return cfg;
}

RunConfig parse_config(const std::string& path, const ConfigOverrides& ov)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("/", "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), ov);
}

RunConfig with_parameter(const RunConfig& cfg, const std::string& name, double value)
{
    RunConfig out = cfg;
    auto as_int = [&](const char* what) {
        if (value != std::floor(value))
            throw ConfigError("/sweep/values", std::string(what) + " needs integer values");
        return static_cast<int>(value);
    };
    if (name == "grid.M") out.grid.M = as_int("grid.M");
    else if (name == "grid.N") out.grid.N = as_int("grid.N");
    else if (name == "grid.T") { out.grid.T = value; out.weight.T = value; }
    else if (name == "weight.s") out.weight.s = value;
    else if (name == "weight.lambda") out.weight.lambda = value;
    else if (name == "weight.beta") out.weight.beta = value;
    else if (name == "weight.xstar") out.weight.xstar = value;
    else if (name == "weight.mconst") out.weight.mconst = value;
    else if (name == "weight.epsilon") out.weight.epsilon = value;
    else if (name == "weight.dt_multiplier") out.weight.dt_multiplier = value;
    else if (name == "weight.kappa") out.kappa = value;
    else if (name == "mc.paths") out.paths = as_int("mc.paths");
    else if (name == "coefficients.a") out.a = {value, ""};
    else if (name == "coefficients.b") out.b = {value, ""};
    else if (name == "coefficients.c") out.c = {value, ""};
    else if (name == "coefficients.d") out.d = {value, ""};
    else throw ConfigError("/sweep/parameter", "not a sweepable scalar: " + name);
    return out;
}

Grid build_grid(const RunConfig& cfg)
{
    return stochwave::build_grid(cfg.grid.M, cfg.grid.N, cfg.grid.T);
}

WeightParams weight_params(const RunConfig& cfg)
{
    WeightParams p = cfg.weight;
    p.T = cfg.grid.T;
    return p;
}

namespace {

GridFunction coefficient_field(const CoefficientSpec& spec, const Grid& grid)
{
    const IndexRange xs = grid.space(SpaceMesh::Closure);
    const IndexRange ts = grid.time(TimeMesh::PrimalClosure);
    if (spec.constant)
        return GridFunction::constant(grid, xs, ts, *spec.constant);
    const double T = grid.T();
    const double pi = std::numbers::pi;
    std::function<double(double, double)> f;
    if (spec.preset == "zero") f = [](double, double) { return 0.0; };
    else if (spec.preset == "one") f = [](double, double) { return 1.0; };
    else if (spec.preset == "sine") f = [pi](double x, double) { return std::sin(pi * x); };
    else if (spec.preset == "decay") f = [](double, double t) { return std::exp(-t); };
    else if (spec.preset == "bump")
        f = [pi, T](double x, double t) { return 0.25 * std::sin(pi * x) * (1.0 + t / T); };
    else
        throw ConfigError("/coefficients", "unknown preset '" + spec.preset + "'");
    return GridFunction::sample(grid, xs, ts, f);
}

GridFunction slice_data(const DataSpec& s, const Grid& grid)
{
    switch (s.kind) {
    case DataKind::Zero: return GridFunction::zeros(grid, grid.space(SpaceMesh::Closure));
    case DataKind::Sine: return sine_slice(grid, SpaceMesh::Closure, s.mode, s.amplitude);
    case DataKind::Random:
        return random_series_slice(grid, SpaceMesh::Closure, s.seed, s.amplitude);
    }
    return GridFunction::zeros(grid, grid.space(SpaceMesh::Closure));
}

GridFunction source_data(const DataSpec& s, SourceMode mode, const Grid& grid)
{
    const IndexRange xs = grid.space(SpaceMesh::Primal);
    const bool st = mode == SourceMode::SpaceTime;
    switch (s.kind) {
    case DataKind::Zero:
        return st ? GridFunction::zeros(grid, xs, grid.time(TimeMesh::Primal))
                  : GridFunction::zeros(grid, xs);
    case DataKind::Sine:
        return st ? sine_field(grid, s.mode, s.amplitude)
                  : sine_slice(grid, SpaceMesh::Primal, s.mode, s.amplitude);
    case DataKind::Random:
        return st ? random_series_field(grid, s.seed, s.amplitude)
                  : random_series_slice(grid, SpaceMesh::Primal, s.seed, s.amplitude);
    }
    return GridFunction::zeros(grid, xs);
}

}  // namespace

SchemeCoefficients build_coefficients(const RunConfig& cfg, const Grid& grid)
{
    return {coefficient_field(cfg.a, grid), coefficient_field(cfg.b, grid),
            coefficient_field(cfg.c, grid), coefficient_field(cfg.d, grid)};
}

ProblemData build_data(const DataSet& set, SourceMode g_mode, const Grid& grid)
{
    ProblemData data{slice_data(set.y0, grid), slice_data(set.y1, grid),
                     source_data(set.g, g_mode, grid), std::nullopt};
    if (set.f.kind != DataKind::Zero)
        data.f = source_data(set.f, SourceMode::SpaceTime, grid);
    return data;
}

std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace stochwave
