// Batch driver: one subcommand per experiment, JSON config in, CSV/JSON out.
//
//   stochwave <subcommand> --config <path> [--output-dir <path>] [--paths <int>] [--seed <u64>]
//
// Exit codes: 0 ok, 2 usage, 3 config, 4 numeric failure, 5 admissibility
// hard-fail, 6 statistical or identity test failed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stochwave/config.hpp"
#include "stochwave/csv.hpp"
#include "stochwave/errors.hpp"
#include "stochwave/estimator.hpp"
#include "stochwave/fields.hpp"
#include "stochwave/identities.hpp"

namespace fs = std::filesystem;
using namespace stochwave;

namespace {

enum Exit { kOk = 0, kUsage = 2, kConfig = 3, kNumeric = 4, kAdmissibility = 5, kTestFail = 6 };

constexpr double kIdentityTol = 1e-10;

class Outputs {
public:
    Outputs(const RunConfig& cfg, std::string subcommand)
        : dir_(cfg.output_dir), hash_(fnv1a(cfg.canonical)), sub_(std::move(subcommand))
    {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& body, long rows)
    {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << body;
        if (!out)
            throw std::runtime_error("cannot write " + (dir_ / name).string());
        files_.push_back({{"name", name}, {"rows", rows}});
    }

    void write_csv(const std::string& name, const std::string& body)
    {
        long lines = 0;
        for (char ch : body)
            lines += ch == '\n';
        write(name, body, lines - 1);
    }

    ~Outputs()
    {
        char hex[17];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash_));
        nlohmann::ordered_json m;
        m["subcommand"] = sub_;
        m["config_hash"] = std::string("fnv1a64:") + hex;
        m["files"] = files_;
        std::ofstream(dir_ / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
    }

private:
    fs::path dir_;
    std::uint64_t hash_;
    std::string sub_;
    nlohmann::ordered_json files_ = nlohmann::ordered_json::array();
};

int run_identities(const RunConfig& cfg)
{
    const Grid grid = build_grid(cfg);
    const IndexRange xs = grid.space(SpaceMesh::Closure);
    const IndexRange ts = grid.time(TimeMesh::Closure);
    ResidualTable worst;
    for (int p = 0; p < cfg.identities.pairs; ++p) {
        const std::uint64_t base = cfg.identities.seed + 2 * static_cast<std::uint64_t>(p);
        const GridFunction u = random_nodal(grid, xs, ts, base, 1.0);
        const GridFunction v = random_nodal(grid, xs, ts, base + 1, 1.0);
        const ResidualTable t = identity_residuals(u, v, grid);
        if (p == 0) {
            worst = t;
            continue;
        }
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            if (t.rows[i].residual && *t.rows[i].residual > worst.rows[i].residual.value_or(0.0))
                worst.rows[i].residual = t.rows[i].residual;
    }

    std::ostringstream csv;
    csv << "id,formula,residual,status\n";
    bool ok = true;
    for (const auto& r : worst.rows) {
        csv << r.id << ",\"" << r.formula << "\",";
        if (r.residual) {
            const bool pass = *r.residual <= kIdentityTol;
            ok = ok && pass;
            csv << format_real(*r.residual) << ',' << (pass ? "pass" : "fail") << '\n';
        } else {
            csv << ",skipped\n";
        }
    }
    Outputs out(cfg, "identities");
    out.write_csv("identities.csv", csv.str());
    std::cout << "identities: max residual " << format_real(worst.max_residual()) << " over "
              << cfg.identities.pairs << " pair(s)\n";
    return ok ? kOk : kTestFail;
}

int run_weights_order(const RunConfig& cfg)
{
    const WeightParams p = weight_params(cfg);
    OrderSpec spec;
    if (cfg.order) {
        spec = *cfg.order;
    } else {
        const Grid g = build_grid(cfg);
        spec.levels = {cfg.grid.M, 2 * cfg.grid.M + 1, 4 * cfg.grid.M + 3};
        spec.dt_over_dx = g.dt() / g.dx();
    }
    std::vector<Grid> levels;
    for (std::size_t i = 0; i < spec.levels.size(); ++i) {
        const int M = spec.levels[i];
        const double n = cfg.grid.T * (M + 1) / spec.dt_over_dx;
        const double nr = std::round(n);
        if (M < 1 || std::abs(n - nr) > 1e-9 * n || nr < 1)
            throw ConfigError("/order/levels/" + std::to_string(i),
                              "T (M+1) / dt_over_dx must be a positive integer");
        levels.push_back(stochwave::build_grid(M, static_cast<int>(nr), cfg.grid.T));
    }

    std::ostringstream summary, detail;
    summary << "expr,order,fit_residual\n";
    detail << "expr,level,M,dx,residual\n";
    for (AsymptoticExpr e : all_asymptotic_exprs()) {
        const OrderEstimate est = estimate_order(e, p, levels);
        summary << to_string(e) << ',' << format_real(est.order) << ','
                << format_real(est.fit_residual) << '\n';
        for (std::size_t i = 0; i < levels.size(); ++i)
            detail << to_string(e) << ',' << i << ',' << levels[i].M() << ','
                   << format_real(est.dx[i]) << ',' << format_real(est.residuals[i]) << '\n';
        std::cout << to_string(e) << ": order " << format_real(est.order) << "\n";
    }
    Outputs out(cfg, "weights-order");
    out.write_csv("weights_order.csv", summary.str());
    out.write_csv("weights_residuals.csv", detail.str());
    return kOk;
}

int run_simulate(const RunConfig& cfg)
{
    const Grid grid = build_grid(cfg);
    const ProblemData data = build_data(cfg.data, cfg.g_mode, grid);
    const Ensemble ens = run_ensemble(data, build_coefficients(cfg, grid), grid, cfg.paths,
                                      cfg.master_seed, cfg.threads);
    Outputs out(cfg, "simulate");
    for (std::size_t k = 0; k < ens.size(); ++k) {
        char tag[16];
        std::snprintf(tag, sizeof tag, "%04zu", k);
        const Trajectory& tr = ens.trajectories[k];
        const Observation obs = observe(tr, grid);
        std::ostringstream a, b, c;
        write_trajectory_csv(a, tr);
        write_flux_csv(b, obs);
        write_terminal_csv(c, obs);
        out.write_csv(std::string("trajectory_") + tag + ".csv", a.str());
        out.write_csv(std::string("flux_") + tag + ".csv", b.str());
        out.write_csv(std::string("terminal_") + tag + ".csv", c.str());
        if (tr.cfl_warning && k == 0)
            std::cerr << "warning: dt > dx, the explicit scheme is outside its CFL bound\n";
    }
    std::cout << "simulate: " << ens.size() << " path(s) on M=" << grid.M() << " N=" << grid.N()
              << "\n";
    return kOk;
}

CarlemanReport carleman_once(const RunConfig& cfg)
{
    const Grid grid = build_grid(cfg);
    const ProblemData data = build_data(cfg.data, cfg.g_mode, grid);
    const Ensemble ens = run_ensemble(data, build_coefficients(cfg, grid), grid, cfg.paths,
                                      cfg.master_seed, cfg.threads);
    return carleman_terms(ens, weight_params(cfg), data, grid, cfg.kappa);
}

int run_carleman(const RunConfig& cfg)
{
    const CarlemanReport rep = carleman_once(cfg);
    Outputs out(cfg, "carleman");
    out.write("carleman.json", to_json(rep), 1);
    std::ostringstream terms;
    write_terms_csv(terms, rep);
    out.write_csv("carleman_terms.csv", terms.str());
    bool hard_fail = !rep.admissibility.phi_positive;

    if (cfg.sweep) {
        std::ostringstream sw;
        sw << "parameter,value,term,mean,stderr\n";
        for (double v : cfg.sweep->values) {
            const CarlemanReport r = carleman_once(with_parameter(cfg, cfg.sweep->parameter, v));
            hard_fail = hard_fail || !r.admissibility.phi_positive;
            const std::string head = cfg.sweep->parameter + "," + format_real(v) + ",";
            for (int i = 0; i < 7; ++i)
                sw << head << 'L' << i + 1 << ',' << format_real(r.lhs[i].mean) << ','
                   << format_real(r.lhs[i].std_error) << '\n';
            for (int i = 0; i < 4; ++i)
                sw << head << 'R' << i + 1 << ',' << format_real(r.rhs[i].mean) << ','
                   << format_real(r.rhs[i].std_error) << '\n';
            sw << head << "ratio," << (r.ratio ? format_real(*r.ratio) : "") << ",\n";
        }
        out.write_csv("carleman_sweep.csv", sw.str());
    }

    std::cout << "carleman: ratio " << (rep.ratio ? format_real(*rep.ratio) : "undefined")
              << (rep.inadmissible ? " (outside the admissible regime)" : "") << "\n";
    if (hard_fail) {
        std::cerr << "error: the weight phi is not positive on the grid closure\n";
        return kAdmissibility;
    }
    return kOk;
}

int run_stability(const RunConfig& cfg)
{
    if (!cfg.pair)
        throw ConfigError("/pair", "missing required key");
    const Grid grid = build_grid(cfg);
    const SchemeCoefficients coeffs = build_coefficients(cfg, grid);
    const ProblemData a = build_data(cfg.data, cfg.g_mode, grid);
    const ProblemData b = build_data(cfg.pair->data, cfg.g_mode, grid);
    const Ensemble ea = run_ensemble(a, coeffs, grid, cfg.paths, cfg.master_seed, cfg.threads);
    const Ensemble eb = run_ensemble(b, coeffs, grid, cfg.paths,
                                     cfg.pair->master_seed.value_or(cfg.master_seed),
                                     cfg.threads);
    const StabilityReport rep = stability_terms(ea, eb, a, b, grid);
    Outputs out(cfg, "stability");
    out.write("stability.json", to_json(rep), 1);
    std::ostringstream terms;
    write_terms_csv(terms, rep);
    out.write_csv("stability_terms.csv", terms.str());
    std::cout << "stability: ratio " << (rep.ratio ? format_real(*rep.ratio) : "undefined")
              << "\n";
    return kOk;
}

int run_martingale(const RunConfig& cfg)
{
    const Grid grid = build_grid(cfg);
    const ProblemData data = build_data(cfg.data, cfg.g_mode, grid);
    const Ensemble ens = run_ensemble(data, build_coefficients(cfg, grid), grid, cfg.paths,
                                      cfg.master_seed, cfg.threads);
    const MCStatistic st = martingale_check(ens, grid);
    Outputs out(cfg, "martingale");
    out.write("martingale.json", to_json(st), 1);
    const bool pass = std::abs(st.mean) <= 4.0 * st.std_error;
    std::cout << "martingale: mean " << format_real(st.mean) << " stderr "
              << format_real(st.std_error) << (pass ? " (within 4 stderr)" : " (outside 4 stderr)")
              << "\n";
    return pass ? kOk : kTestFail;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-difference stochastic wave equation experiments"};
    app.require_subcommand(1);
    std::string config_path;
    std::optional<std::string> output_dir;
    std::optional<int> paths;
    std::optional<std::uint64_t> seed;

    const std::vector<std::pair<std::string, int (*)(const RunConfig&)>> commands = {
        {"identities", run_identities}, {"weights-order", run_weights_order},
        {"simulate", run_simulate},     {"carleman", run_carleman},
        {"stability", run_stability},   {"martingale", run_martingale}};
    for (const auto& [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--output-dir", output_dir, "overrides output_dir");
        sub->add_option("--paths", paths, "overrides mc.paths");
        sub->add_option("--seed", seed, "overrides mc.master_seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        const RunConfig cfg = parse_config(config_path, {paths, seed, output_dir});
        for (const auto& [name, fn] : commands)
            if (app.got_subcommand(name))
                return fn(cfg);
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::WeightOverflow:
        case ErrorCode::DegenerateOrder:
        case ErrorCode::SingularUpdate:
        case ErrorCode::BlowUp: return kNumeric;
        default: return kConfig;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
