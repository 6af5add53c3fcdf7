#include "vipv/comparator.hpp"
#include "vipv/drive_cycle.hpp"
#include "vipv/errors.hpp"
#include "vipv/inventory.hpp"
#include "vipv/json_io.hpp"
#include "vipv/lca.hpp"
#include "vipv/powertrain.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using vipv::Json;

struct RunConfig {
    vipv::VehicleParams params;
    vipv::CellSpec cell;
    vipv::PerformanceReqs reqs;
    double performance_ratio = 0.75;    // harmonization default
    double panel_lifetime_years = 30.0; // harmonization default
};

struct CommonOpts {
    std::string config_path;
    std::string inventory = "data/panel_cn_nl.inv";
    std::string factors = "data/gwp100.csv";
    std::string cycle = "data/wltp_class3.csv";
    std::string countries = "data/countries.csv";
    std::string out;
    std::vector<std::string> stage_overrides; // stage=REGION
};

RunConfig load_config(const std::string& path) {
    RunConfig cfg;
    if (path.empty()) return cfg;
    std::ifstream in(path);
    if (!in) throw vipv::ValidationError("cannot open config file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw vipv::ValidationError("config '" + path + "': " + e.what());
    }
    if (j.contains("params")) vipv::overlay_from_json(j["params"], cfg.params);
    if (j.contains("cell")) vipv::overlay_from_json(j["cell"], cfg.cell);
    if (j.contains("reqs")) vipv::overlay_from_json(j["reqs"], cfg.reqs);
    if (j.contains("performance_ratio")) cfg.performance_ratio = j["performance_ratio"];
    if (j.contains("panel_lifetime_years")) cfg.panel_lifetime_years = j["panel_lifetime_years"];
    return cfg;
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["params"] = vipv::to_json(cfg.params);
    j["cell"] = vipv::to_json(cfg.cell);
    j["reqs"] = vipv::to_json(cfg.reqs);
    j["performance_ratio"] = cfg.performance_ratio;
    j["panel_lifetime_years"] = cfg.panel_lifetime_years;
    return j;
}

Json provenance(const RunConfig& cfg, const std::vector<std::string>& input_files,
                const Json& overrides) {
    Json j;
    j["config"] = config_json(cfg);
    j["inputs"] = Json::object();
    for (const auto& path : input_files) j["inputs"][path] = vipv::file_checksum(path);
    if (!overrides.is_null()) j["overrides"] = overrides;
    return j;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw vipv::ValidationError("cannot write output file '" + out_path + "'");
    out << content;
}

void write_json(const std::string& out_path, const Json& j) {
    write_output(out_path, j.dump(2) + "\n");
}

std::map<std::string, std::string> stage_locations(const vipv::ProcessGraph& graph,
                                                   const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> locs;
    for (const auto& [id, a] : graph.activities)
        if (a.is_stage && !a.location.empty()) locs[id] = a.location;
    for (const auto& ov : overrides) {
        auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw vipv::ValidationError("--stage expects <stage-id>=<region>, got '" + ov + "'");
        locs[ov.substr(0, eq)] = ov.substr(eq + 1);
    }
    return locs;
}

std::vector<double> parse_range(const std::string& spec) {
    // "start:stop:step" (inclusive) or a comma-separated list
    std::vector<double> out;
    auto c1 = spec.find(':');
    try {
        if (c1 == std::string::npos) {
            std::stringstream in(spec);
            std::string tok;
            while (std::getline(in, tok, ',')) out.push_back(std::stod(tok));
        } else {
            auto c2 = spec.find(':', c1 + 1);
            if (c2 == std::string::npos) throw std::invalid_argument("expected start:stop:step");
            const double start = std::stod(spec.substr(0, c1));
            const double stop = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
            const double step = std::stod(spec.substr(c2 + 1));
            if (step <= 0.0) throw std::invalid_argument("step must be positive");
            const int n = static_cast<int>(std::floor((stop - start) / step + 1.5));
            for (int i = 0; i < n; ++i) out.push_back(start + i * step);
        }
    } catch (const std::exception& e) {
        throw vipv::ValidationError("bad range '" + spec + "': " + e.what());
    }
    if (out.empty()) throw vipv::ValidationError("empty range '" + spec + "'");
    return out;
}

vipv::CountryProfile pick_country(const CommonOpts& opts, const std::string& code) {
    auto profiles = vipv::load_country_profiles(opts.countries);
    auto it = profiles.find(code);
    if (it == profiles.end())
        throw vipv::ValidationError("country '" + code + "' not found in " + opts.countries);
    return it->second;
}

vipv::CompareContext make_context(const RunConfig& cfg, const CommonOpts& opts) {
    vipv::CompareContext ctx;
    ctx.graph = vipv::load_process_graph(opts.inventory);
    ctx.method = vipv::load_characterization_method(opts.factors);
    ctx.cycle = vipv::DriveCycle::load_csv(opts.cycle);
    ctx.params = cfg.params;
    ctx.cell = cfg.cell;
    ctx.reqs = cfg.reqs;
    return ctx;
}

int run_lca(const RunConfig& cfg, const CommonOpts& opts) {
    auto graph = vipv::load_process_graph(opts.inventory);
    auto method = vipv::load_characterization_method(opts.factors);
    auto locs = stage_locations(graph, opts.stage_overrides);
    auto resolved = vipv::resolve_region(graph, locs);
    auto x = vipv::cumulative_inventory(resolved, vipv::DemandVector::unit_root(resolved));
    auto impact = vipv::characterize(resolved, x, method);

    Json overrides = Json::object();
    for (const auto& [stage, region] : locs) overrides[stage] = region;
    Json j;
    j["provenance"] = provenance(cfg, {opts.inventory, opts.factors}, Json{{"stages", overrides}});
    j["result"] = vipv::to_json(impact);
    j["contributions"] = vipv::to_json(vipv::stage_contributions(impact));
    write_json(opts.out, j);
    return 0;
}

int run_design(const RunConfig& cfg, const CommonOpts& opts, bool bev,
               std::optional<double> k_hi_flag, const std::string& country,
               std::optional<double> panel_area) {
    double k_hi;
    if (k_hi_flag) k_hi = *k_hi_flag;
    else k_hi = pick_country(opts, country).k_hi;

    auto cycle = vipv::DriveCycle::load_csv(opts.cycle);
    std::optional<double> fix;
    if (bev) fix = 0.0;
    else if (panel_area) fix = *panel_area / cfg.cell.cell_area_m2;
    auto problem = vipv::build_design_problem(cycle, cfg.params, cfg.cell, cfg.reqs, k_hi, fix);
    auto result = vipv::solve_design(problem);

    Json overrides;
    overrides["k_hi"] = k_hi;
    overrides["bev"] = bev;
    Json j;
    j["provenance"] = provenance(cfg, {opts.cycle}, overrides);
    j["result"] = vipv::to_json(result);
    write_json(opts.out, j);
    return 0;
}

vipv::Scenario make_scenario(const vipv::CompareContext& ctx, const CommonOpts& opts,
                             const vipv::CountryProfile& profile, double lifetime_km,
                             std::optional<double> panel_area) {
    vipv::Scenario s;
    s.production_locations = stage_locations(ctx.graph, opts.stage_overrides);
    s.use_country = profile;
    s.lifetime_km = lifetime_km;
    s.panel_area_m2 = panel_area;
    return s;
}

int run_compare(const RunConfig& cfg, const CommonOpts& opts, const std::string& country,
                double lifetime_km, std::optional<double> panel_area) {
    auto ctx = make_context(cfg, opts);
    auto profile = pick_country(opts, country);
    auto scenario = make_scenario(ctx, opts, profile, lifetime_km, panel_area);
    auto result = vipv::compare(scenario, ctx);

    Json overrides;
    overrides["country"] = country;
    overrides["lifetime_km"] = lifetime_km;
    Json j;
    j["provenance"] =
        provenance(cfg, {opts.inventory, opts.factors, opts.cycle, opts.countries}, overrides);
    j["result"] = vipv::to_json(result);
    write_json(opts.out, j);
    return 0;
}

std::string csv_provenance(const RunConfig& cfg, const std::vector<std::string>& inputs) {
    std::string out = "# config " + config_json(cfg).dump() + "\n";
    for (const auto& path : inputs) out += "# input " + path + " " + vipv::file_checksum(path) + "\n";
    return out;
}

int run_sweep(const RunConfig& cfg, const CommonOpts& opts, const std::string& country,
              const std::string& areas_spec, const std::string& lifetimes_spec) {
    auto ctx = make_context(cfg, opts);
    auto profile = pick_country(opts, country);
    auto scenario = make_scenario(ctx, opts, profile, 150e3, std::nullopt);
    auto result =
        vipv::sweep(scenario, ctx, parse_range(areas_spec), parse_range(lifetimes_spec));
    write_output(opts.out,
                 csv_provenance(cfg, {opts.inventory, opts.factors, opts.cycle, opts.countries}) +
                     vipv::csv_sweep(result));
    return 0;
}

int run_map(const RunConfig& cfg, const CommonOpts& opts, double lifetime_km,
            std::optional<double> panel_area) {
    auto ctx = make_context(cfg, opts);
    auto profiles = vipv::load_country_profiles(opts.countries);
    std::vector<vipv::CountryProfile> list;
    for (const auto& [code, p] : profiles) list.push_back(p);
    auto scenario = make_scenario(ctx, opts, list.front(), lifetime_km, panel_area);
    auto rows = vipv::country_map(list, lifetime_km, scenario, ctx);
    write_output(opts.out,
                 csv_provenance(cfg, {opts.inventory, opts.factors, opts.cycle, opts.countries}) +
                     vipv::csv_country_map(rows));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Life-cycle emission comparison of solar-integrated vs battery electric vehicles"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "JSON config overlay for model parameters");

    auto* lca = app.add_subcommand("lca", "Cradle-to-gate impact of 1 m2 of panel");
    lca->add_option("--inventory", opts.inventory, "Inventory file");
    lca->add_option("--factors", opts.factors, "Characterization factor CSV");
    lca->add_option("--stage", opts.stage_overrides, "Stage relocation <stage-id>=<region>");
    lca->add_option("--out", opts.out, "Output JSON path (default stdout)");

    auto* design = app.add_subcommand("design", "Optimal powertrain sizing over a drive cycle");
    bool bev = false;
    std::optional<double> k_hi_flag;
    std::string country = "NL";
    std::optional<double> panel_area;
    design->add_option("--cycle", opts.cycle, "Drive cycle CSV (t_s,v_mps)");
    design->add_flag("--bev", bev, "Conventional BEV baseline (no panel)");
    design->add_option("--khi", k_hi_flag, "Horizontal irradiation coefficient in [0,1]");
    design->add_option("--country", country, "Country code for k_HI lookup");
    design->add_option("--countries", opts.countries, "Country profile CSV");
    design->add_option("--panel-area", panel_area, "Pin the panel area in m2");
    design->add_option("--out", opts.out, "Output JSON path (default stdout)");

    auto* compare = app.add_subcommand("compare", "VIPV vs BEV life-cycle comparison");
    double lifetime_km = 150e3;
    compare->add_option("--inventory", opts.inventory, "Inventory file");
    compare->add_option("--factors", opts.factors, "Characterization factor CSV");
    compare->add_option("--cycle", opts.cycle, "Drive cycle CSV");
    compare->add_option("--countries", opts.countries, "Country profile CSV");
    compare->add_option("--country", country, "Country of use");
    compare->add_option("--lifetime", lifetime_km, "Vehicle lifetime in km");
    compare->add_option("--panel-area", panel_area, "Pin the panel area in m2");
    compare->add_option("--stage", opts.stage_overrides, "Stage relocation <stage-id>=<region>");
    compare->add_option("--out", opts.out, "Output JSON path (default stdout)");

    auto* sweep = app.add_subcommand("sweep", "Panel-area x lifetime sensitivity grid");
    std::string areas_spec = "0:3:0.5";
    std::string lifetimes_spec = "0:300000:25000";
    sweep->add_option("--inventory", opts.inventory, "Inventory file");
    sweep->add_option("--factors", opts.factors, "Characterization factor CSV");
    sweep->add_option("--cycle", opts.cycle, "Drive cycle CSV");
    sweep->add_option("--countries", opts.countries, "Country profile CSV");
    sweep->add_option("--country", country, "Country of use");
    sweep->add_option("--areas", areas_spec, "Panel areas, start:stop:step or list");
    sweep->add_option("--lifetimes", lifetimes_spec, "Lifetimes in km, start:stop:step or list");
    sweep->add_option("--stage", opts.stage_overrides, "Stage relocation <stage-id>=<region>");
    sweep->add_option("--out", opts.out, "Output CSV path (default stdout)");

    auto* map = app.add_subcommand("map", "Per-country comparison table");
    map->add_option("--inventory", opts.inventory, "Inventory file");
    map->add_option("--factors", opts.factors, "Characterization factor CSV");
    map->add_option("--cycle", opts.cycle, "Drive cycle CSV");
    map->add_option("--countries", opts.countries, "Country profile CSV");
    map->add_option("--lifetime", lifetime_km, "Vehicle lifetime in km");
    map->add_option("--panel-area", panel_area, "Pin the panel area in m2");
    map->add_option("--stage", opts.stage_overrides, "Stage relocation <stage-id>=<region>");
    map->add_option("--out", opts.out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
        RunConfig cfg = load_config(opts.config_path);
        if (lca->parsed()) return run_lca(cfg, opts);
        if (design->parsed())
            return run_design(cfg, opts, bev, k_hi_flag, country, panel_area);
        if (compare->parsed()) return run_compare(cfg, opts, country, lifetime_km, panel_area);
        if (sweep->parsed()) return run_sweep(cfg, opts, country, areas_spec, lifetimes_spec);
        if (map->parsed()) return run_map(cfg, opts, lifetime_km, panel_area);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    } catch (const vipv::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const vipv::SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
