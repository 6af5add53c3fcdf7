#include "vipv/inventory.hpp"
#include "vipv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vipv {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Whitespace tokenizer with support for double-quoted strings.
std::vector<std::string> tokenize(const std::string& line, const std::string& ctx) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size() || line[i] == '#') break;
        if (line[i] == '"') {
            size_t end = line.find('"', i + 1);
            if (end == std::string::npos)
                throw ValidationError(ctx + ": unterminated quoted string");
            out.push_back(line.substr(i + 1, end - i - 1));
            i = end + 1;
        } else {
            size_t end = i;
            while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])))
                ++end;
            out.push_back(line.substr(i, end - i));
            i = end;
        }
    }
    return out;
}

double parse_number(const std::string& tok, const std::string& ctx) {
    const char* s = tok.c_str();
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0')
        throw ValidationError(ctx + ": expected a number, got '" + tok + "'");
    if (!std::isfinite(v))
        throw ValidationError(ctx + ": non-finite amount '" + tok + "' rejected");
    return v;
}

} // namespace

const Activity& ProcessGraph::activity(const std::string& id) const {
    auto it = activities.find(id);
    if (it == activities.end())
        throw ValidationError("unknown activity '" + id + "'");
    return it->second;
}

bool ProcessGraph::is_electricity_slot(const std::string& id) const {
    if (electricity_placeholder_ids.count(id)) return true;
    auto it = activities.find(id);
    return it != activities.end() && it->second.is_generated;
}

Activity make_mix_activity(const ElectricityMix& mix) {
    Activity a;
    a.id = "electricity-" + mix.region;
    a.name = "Grid electricity, " + mix.region;
    a.location = mix.region;
    a.unit = "kWh";
    a.is_generated = true;
    a.biosphere_outputs.push_back({"co2", mix.intensity_g_per_kwh / 1000.0});
    return a;
}

ProcessGraph parse_process_graph(const std::string& text, const std::string& origin) {
    ProcessGraph g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::string section;
    Activity* current = nullptr;

    auto ctx = [&]() { return origin + ":" + std::to_string(lineno); };

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line, ctx());
        if (toks.empty()) continue;

        if (toks[0].front() == '[') {
            if (toks[0].back() != ']')
                throw ValidationError(ctx() + ": malformed section header '" + toks[0] + "'");
            section = toks[0].substr(1, toks[0].size() - 2);
            current = nullptr;
            if (section != "substances" && section != "activities" && section != "mixes" &&
                section != "countries")
                throw ValidationError(ctx() + ": unknown section '" + section + "'");
            continue;
        }
        if (section.empty())
            throw ValidationError(ctx() + ": content before any section header");

        if (section == "substances") {
            if (toks.size() < 2)
                throw ValidationError(ctx() + ": substance needs <id> <name>");
            if (g.substances.count(toks[0]))
                throw ValidationError(ctx() + ": duplicate substance id '" + toks[0] + "'");
            g.substances[toks[0]] = {toks[0], toks[1]};
        } else if (section == "mixes") {
            if (toks[0] == "tech") {
                if (toks.size() != 3)
                    throw ValidationError(ctx() + ": tech needs <id> <gCO2eq/kWh>");
                double v = parse_number(toks[2], ctx());
                if (v < 0)
                    throw ValidationError(ctx() + ": negative tech intensity for '" + toks[1] + "'");
                g.tech_intensities[toks[1]] = v;
            } else if (toks[0] == "mix") {
                if (toks.size() < 3)
                    throw ValidationError(ctx() + ": mix needs <region> <tech>=<share>...");
                ElectricityMix mix;
                mix.region = toks[1];
                if (g.mixes.count(mix.region))
                    throw ValidationError(ctx() + ": duplicate mix for region '" + mix.region + "'");
                double sum = 0.0;
                for (size_t i = 2; i < toks.size(); ++i) {
                    auto eq = toks[i].find('=');
                    if (eq == std::string::npos)
                        throw ValidationError(ctx() + ": expected <tech>=<share>, got '" + toks[i] + "'");
                    std::string tech = toks[i].substr(0, eq);
                    double share = parse_number(toks[i].substr(eq + 1), ctx());
                    if (!g.tech_intensities.count(tech))
                        throw ValidationError(ctx() + ": mix '" + mix.region +
                                              "' references unknown tech '" + tech + "'");
                    if (share < 0.0 || share > 1.0)
                        throw ValidationError(ctx() + ": share for '" + tech + "' outside [0,1]");
                    mix.shares.emplace_back(tech, share);
                    mix.intensity_g_per_kwh += share * g.tech_intensities[tech];
                    sum += share;
                }
                if (std::abs(sum - 1.0) > 1e-9)
                    throw ValidationError(ctx() + ": mix '" + mix.region + "' shares sum to " +
                                          fmt_num(sum) + ", expected 1");
                g.mixes[mix.region] = mix;
            } else {
                throw ValidationError(ctx() + ": expected 'tech' or 'mix'");
            }
        } else if (section == "activities") {
            if (toks[0] == "activity") {
                if (toks.size() < 3)
                    throw ValidationError(ctx() + ": activity needs <id> <name> [attrs]");
                Activity a;
                a.id = toks[1];
                a.name = toks[2];
                for (size_t i = 3; i < toks.size(); ++i) {
                    const std::string& t = toks[i];
                    if (t.rfind("unit=", 0) == 0) a.unit = t.substr(5);
                    else if (t.rfind("location=", 0) == 0) a.location = t.substr(9);
                    else if (t == "stage") a.is_stage = true;
                    else if (t == "root") a.is_root = true;
                    else if (t == "placeholder") a.is_placeholder = true;
                    else
                        throw ValidationError(ctx() + ": unknown activity attribute '" + t + "'");
                }
                if (a.unit.empty())
                    throw ValidationError(ctx() + ": activity '" + a.id + "' has no unit");
                if (g.activities.count(a.id))
                    throw ValidationError(ctx() + ": duplicate activity id '" + a.id + "'");
                if (a.is_placeholder) g.electricity_placeholder_ids.insert(a.id);
                current = &(g.activities[a.id] = a);
            } else if (toks[0] == "input") {
                if (!current)
                    throw ValidationError(ctx() + ": 'input' outside an activity block");
                if (toks.size() != 4)
                    throw ValidationError(ctx() + ": input needs <activity-id> <amount> <unit>");
                double amt = parse_number(toks[2], ctx());
                if (amt < 0)
                    throw ValidationError(ctx() + ": negative technosphere amount in activity '" +
                                          current->id + "'");
                current->technosphere_inputs.push_back({toks[1], amt, toks[3]});
            } else if (toks[0] == "emission") {
                if (!current)
                    throw ValidationError(ctx() + ": 'emission' outside an activity block");
                if (toks.size() != 3)
                    throw ValidationError(ctx() + ": emission needs <substance-id> <kg>");
                current->biosphere_outputs.push_back({toks[1], parse_number(toks[2], ctx())});
            } else {
                throw ValidationError(ctx() + ": expected 'activity', 'input' or 'emission'");
            }
        } else if (section == "countries") {
            if (toks.size() != 5)
                throw ValidationError(ctx() +
                                      ": country needs <code> <gCO2/kWh> <k_hi> <kWh/m2/yr> <light-h>");
            CountryProfile p;
            p.country = toks[0];
            p.carbon_intensity_g_per_kwh = parse_number(toks[1], ctx());
            p.k_hi = parse_number(toks[2], ctx());
            p.annual_insolation_kwh_m2_yr = parse_number(toks[3], ctx());
            p.daily_light_hours = parse_number(toks[4], ctx());
            if (p.k_hi < 0.0 || p.k_hi > 1.0)
                throw ValidationError(ctx() + ": k_hi outside [0,1] for '" + p.country + "'");
            if (p.carbon_intensity_g_per_kwh < 0.0)
                throw ValidationError(ctx() + ": negative carbon intensity for '" + p.country + "'");
            g.countries[p.country] = p;
        }
    }

    // Materialize regional electricity activities so references to them resolve.
    for (const auto& [region, mix] : g.mixes) {
        Activity a = make_mix_activity(mix);
        if (!g.activities.count(a.id)) g.activities[a.id] = a;
    }

    // Closure and root checks.
    int roots = 0;
    for (const auto& [id, a] : g.activities) {
        if (a.is_root) {
            ++roots;
            g.root_id = id;
        }
        for (const auto& in : a.technosphere_inputs)
            if (!g.activities.count(in.activity_id))
                throw ValidationError(origin + ": activity '" + id +
                                      "' references unknown activity '" + in.activity_id + "'");
        for (const auto& em : a.biosphere_outputs)
            if (!g.substances.count(em.substance_id))
                throw ValidationError(origin + ": activity '" + id +
                                      "' references unknown substance '" + em.substance_id + "'");
    }
    if (roots == 0) throw ValidationError(origin + ": no root activity");
    if (roots > 1) throw ValidationError(origin + ": multiple root activities");
    return g;
}

ProcessGraph load_process_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open inventory file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_process_graph(buf.str(), path);
}

std::string serialize_process_graph(const ProcessGraph& g) {
    std::ostringstream out;
    out << "[substances]\n";
    for (const auto& [id, s] : g.substances)
        out << id << " \"" << s.name << "\"\n";

    if (!g.tech_intensities.empty() || !g.mixes.empty()) {
        out << "\n[mixes]\n";
        for (const auto& [id, v] : g.tech_intensities)
            out << "tech " << id << " " << fmt_num(v) << "\n";
        for (const auto& [region, mix] : g.mixes) {
            out << "mix " << region;
            auto shares = mix.shares;
            std::sort(shares.begin(), shares.end());
            for (const auto& [tech, share] : shares)
                out << " " << tech << "=" << fmt_num(share);
            out << "\n";
        }
    }

    out << "\n[activities]\n";
    for (const auto& [id, a] : g.activities) {
        if (a.is_generated) continue;
        out << "activity " << id << " \"" << a.name << "\" unit=" << a.unit;
        if (!a.location.empty()) out << " location=" << a.location;
        if (a.is_stage) out << " stage";
        if (a.is_root) out << " root";
        if (a.is_placeholder) out << " placeholder";
        out << "\n";
        auto inputs = a.technosphere_inputs;
        std::sort(inputs.begin(), inputs.end(),
                  [](const auto& x, const auto& y) { return x.activity_id < y.activity_id; });
        for (const auto& in : inputs)
            out << "  input " << in.activity_id << " " << fmt_num(in.amount) << " " << in.unit
                << "\n";
        auto ems = a.biosphere_outputs;
        std::sort(ems.begin(), ems.end(),
                  [](const auto& x, const auto& y) { return x.substance_id < y.substance_id; });
        for (const auto& em : ems)
            out << "  emission " << em.substance_id << " " << fmt_num(em.amount_kg) << "\n";
    }

    if (!g.countries.empty()) {
        out << "\n[countries]\n";
        for (const auto& [code, p] : g.countries)
            out << code << " " << fmt_num(p.carbon_intensity_g_per_kwh) << " " << fmt_num(p.k_hi)
                << " " << fmt_num(p.annual_insolation_kwh_m2_yr) << " "
                << fmt_num(p.daily_light_hours) << "\n";
    }
    return out.str();
}

ProcessGraph resolve_region(const ProcessGraph& graph,
                            const std::map<std::string, std::string>& stage_locations,
                            const std::map<std::string, ElectricityMix>& mixes) {
    ProcessGraph out = graph;
    for (const auto& [stage_id, region] : stage_locations) {
        auto it = out.activities.find(stage_id);
        if (it == out.activities.end())
            throw ValidationError("resolve_region: unknown stage '" + stage_id + "'");
        const ElectricityMix* mix = nullptr;
        if (auto mit = mixes.find(region); mit != mixes.end()) mix = &mit->second;
        else if (auto git = graph.mixes.find(region); git != graph.mixes.end()) mix = &git->second;
        if (!mix)
            throw ValidationError("resolve_region: unknown region '" + region + "'");

        Activity mix_act = make_mix_activity(*mix);
        out.activities[mix_act.id] = mix_act;

        Activity& stage = it->second;
        stage.location = region;
        for (auto& in : stage.technosphere_inputs)
            if (graph.is_electricity_slot(in.activity_id) || out.is_electricity_slot(in.activity_id))
                in.activity_id = mix_act.id;
    }
    return out;
}

ProcessGraph resolve_region(const ProcessGraph& graph,
                            const std::map<std::string, std::string>& stage_locations) {
    return resolve_region(graph, stage_locations, graph.mixes);
}

ProcessGraph resolve_default_regions(const ProcessGraph& graph) {
    std::map<std::string, std::string> locations;
    for (const auto& [id, a] : graph.activities)
        if (a.is_stage && !a.location.empty()) locations[id] = a.location;
    return resolve_region(graph, locations);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        // trim
        size_t b = field.find_first_not_of(" \t\r");
        size_t e = field.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
    }
    return out;
}

} // namespace

std::map<std::string, CountryProfile> load_country_profiles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open country profile file '" + path + "'");
    std::map<std::string, CountryProfile> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string ctx = path + ":" + std::to_string(lineno);
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv_line(line);
        if (lineno == 1 && !f.empty() && f[0] == "country") continue; // header
        if (f.size() != 5)
            throw ValidationError(ctx + ": expected 5 columns, got " + std::to_string(f.size()));
        CountryProfile p;
        p.country = f[0];
        p.carbon_intensity_g_per_kwh = parse_number(f[1], ctx);
        p.k_hi = parse_number(f[2], ctx);
        p.annual_insolation_kwh_m2_yr = parse_number(f[3], ctx);
        p.daily_light_hours = parse_number(f[4], ctx);
        if (p.k_hi < 0.0 || p.k_hi > 1.0)
            throw ValidationError(ctx + ": k_hi outside [0,1]");
        if (p.carbon_intensity_g_per_kwh < 0.0)
            throw ValidationError(ctx + ": negative carbon intensity");
        out[p.country] = p;
    }
    if (out.empty()) throw ValidationError(path + ": no country rows");
    return out;
}

CharacterizationMethod load_characterization_method(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open characterization file '" + path + "'");
    CharacterizationMethod m;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string ctx = path + ":" + std::to_string(lineno);
        if (line.empty() || line[0] == '#') continue;
        auto f = split_csv_line(line);
        if (lineno == 1 && !f.empty() && f[0] == "substance") continue;
        if (f.size() != 2)
            throw ValidationError(ctx + ": expected 2 columns");
        m.factors[f[0]] = parse_number(f[1], ctx);
    }
    auto co2 = m.factors.find("co2");
    if (co2 == m.factors.end() || co2->second != 1.0)
        throw ValidationError(path + ": characterization factor for 'co2' must be exactly 1");
    return m;
}

} // namespace vipv
