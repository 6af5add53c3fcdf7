#include <doctest.h>

#include "oracles.hpp"
#include "vipv/errors.hpp"
#include "vipv/inventory.hpp"
#include "vipv/lca.hpp"

#include <chrono>
#include <cmath>
#include <random>

using namespace vipv;

namespace {

ProcessGraph chain_graph() {
    return parse_process_graph(R"([substances]
co2 "CO2"
[activities]
activity a "A" unit=kg root stage
  input b 2 kg
  emission co2 0.5
activity b "B" unit=kg
  emission co2 1
)",
                               "chain");
}

CharacterizationMethod gwp_unit() {
    CharacterizationMethod m;
    m.factors["co2"] = 1.0;
    return m;
}

} // namespace

TEST_CASE("cumulative_inventory: two-node chain") {
    ProcessGraph g = chain_graph();
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    CHECK(x.at("a") == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x.at("b") == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("cumulative_inventory: self-loop is a geometric series") {
    ProcessGraph g = parse_process_graph(R"([activities]
activity a "A" unit=kg root
  input a 0.01 kg
)",
                                         "loop");
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    CHECK(x.at("a") == doctest::Approx(1.0 / 0.99).epsilon(1e-13));
}

TEST_CASE("cumulative_inventory: linear in demand, zero demand is zero") {
    ProcessGraph g = chain_graph();
    DemandVector d;
    d.entries["a"] = 3.0;
    auto x3 = cumulative_inventory(g, d);
    auto x1 = cumulative_inventory(g, DemandVector::unit_root(g));
    CHECK(x3.at("b") == doctest::Approx(3.0 * x1.at("b")).epsilon(1e-13));

    DemandVector zero;
    auto x0 = cumulative_inventory(g, zero);
    CHECK(x0.at("a") == 0.0);
    CHECK(x0.at("b") == 0.0);
}

TEST_CASE("cumulative_inventory: non-productive system rejected") {
    ProcessGraph g = parse_process_graph(R"([activities]
activity a "A" unit=kg root
  input a 2 kg
)",
                                         "bad");
    CHECK_THROWS_WITH_AS(cumulative_inventory(g, DemandVector::unit_root(g)),
                         doctest::Contains("non-productive"), SolveError);
}

TEST_CASE("cumulative_inventory: matches independent oracles") {
    std::mt19937 rng(20240817);
    const auto t0 = std::chrono::steady_clock::now();

    SUBCASE("200 random acyclic graphs vs back-substitution") {
        for (int k = 0; k < 200; ++k) {
            ProcessGraph g = oracles::random_acyclic(rng);
            DemandVector d = DemandVector::unit_root(g);
            auto got = cumulative_inventory(g, d);
            auto want = oracles::topo_solve(g, d.entries);
            for (const auto& [id, v] : want) {
                const double scale = std::max(std::abs(v), 1.0);
                REQUIRE(std::abs(got.at(id) - v) <= 1e-12 * scale);
            }
        }
    }
    SUBCASE("50 cyclic graphs vs truncated power series") {
        for (int k = 0; k < 50; ++k) {
            ProcessGraph g = oracles::random_cyclic(rng);
            DemandVector d = DemandVector::unit_root(g);
            auto got = cumulative_inventory(g, d);
            auto want = oracles::series_solve(g, d.entries);
            for (const auto& [id, v] : want) {
                const double scale = std::max(std::abs(v), 1.0);
                REQUIRE(std::abs(got.at(id) - v) <= 1e-9 * scale);
            }
        }
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 5.0);
}

TEST_CASE("characterize: factors scale masses") {
    // 2 kg of a substance with factor 3 characterizes to 6 kg CO2eq
    ProcessGraph g = parse_process_graph(R"([substances]
sf6 "SF6"
[activities]
activity a "A" unit=kg root
  emission sf6 2
)",
                                         "f");
    CharacterizationMethod m;
    m.factors["co2"] = 1.0;
    m.factors["sf6"] = 3.0;
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    ImpactResult r = characterize(g, x, m);
    CHECK(r.total_kgco2e_per_m2 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(r.per_substance.at("sf6") == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("characterize: missing factor names the substance") {
    ProcessGraph g = parse_process_graph(R"([substances]
pfc "PFC"
[activities]
activity a "A" unit=kg root
  emission pfc 1
)",
                                         "f");
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    CHECK_THROWS_WITH_AS(characterize(g, x, gwp_unit()), doctest::Contains("pfc"),
                         ValidationError);
}

TEST_CASE("characterize: single stage absorbs its chain, share 1") {
    ProcessGraph g = chain_graph(); // a is the only stage, b supports it
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    ImpactResult r = characterize(g, x, gwp_unit());
    CHECK(r.per_stage.size() == 1);
    CHECK(r.per_stage.at("a") == doctest::Approx(r.total_kgco2e_per_m2).epsilon(1e-12));
    auto contrib = stage_contributions(r);
    REQUIRE(contrib.size() == 1);
    CHECK(contrib[0].share == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("characterize: unresolved placeholder rejected") {
    ProcessGraph g = parse_process_graph(R"([substances]
co2 "CO2"
[activities]
activity a "A" unit=kg root
  input grid 1 kWh
activity grid "Electricity, region TBD" unit=kWh placeholder
)",
                                         "f");
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    CHECK_THROWS_WITH_AS(characterize(g, x, gwp_unit()), doctest::Contains("placeholder"),
                         ValidationError);
}

TEST_CASE("characterize: transport share counts tkm chains") {
    ProcessGraph g = parse_process_graph(R"([substances]
co2 "CO2"
[activities]
activity a "A" unit=kg root
  input ship 10 tkm
  emission co2 9
activity ship "Freight" unit=tkm
  emission co2 0.1
)",
                                         "f");
    auto x = cumulative_inventory(g, DemandVector::unit_root(g));
    ImpactResult r = characterize(g, x, gwp_unit());
    CHECK(r.total_kgco2e_per_m2 == doctest::Approx(10.0).epsilon(1e-13));
    CHECK(r.transport_share == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("bundled fixture: totals, attribution and regional monotonicity") {
    const std::string dir = VIPV_DATA_DIR;
    ProcessGraph g = load_process_graph(dir + "/panel_cn_nl.inv");
    CharacterizationMethod m = load_characterization_method(dir + "/gwp100.csv");

    ProcessGraph cn = resolve_default_regions(g);
    auto x = cumulative_inventory(cn, DemandVector::unit_root(cn));
    ImpactResult r = characterize(cn, x, m);
    CHECK(r.total_kgco2e_per_m2 == doctest::Approx(118.0).epsilon(1e-6));
    CHECK(r.transport_share == doctest::Approx(0.0081).epsilon(1e-6));

    // attribution is exact: stage contributions sum back to the total
    double sum = 0.0;
    for (const auto& [s, kg] : r.per_stage) sum += kg;
    CHECK(sum == doctest::Approx(r.total_kgco2e_per_m2).epsilon(1e-12));

    // moving all production stages to the cleaner NL mix lowers the total
    std::map<std::string, std::string> to_nl;
    for (const auto& [id, a] : g.activities)
        if (a.is_stage) to_nl[id] = "NL";
    ProcessGraph nl = resolve_region(g, to_nl);
    auto xn = cumulative_inventory(nl, DemandVector::unit_root(nl));
    ImpactResult rn = characterize(nl, xn, m);
    CHECK(rn.total_kgco2e_per_m2 < r.total_kgco2e_per_m2);
}

TEST_CASE("harmonize_per_kwh") {
    CountryProfile nl;
    nl.annual_insolation_kwh_m2_yr = 1116.0;

    const double density = 4.88 / 0.0243; // bundled cell, ~200.8 W/m2
    CHECK(density / 1000.0 == doctest::Approx(0.2008).epsilon(1e-3));

    SUBCASE("exactly linear in the per-m2 impact") {
        const double h1 = harmonize_per_kwh(118.0, density, nl, 0.75, 30.0);
        const double h2 = harmonize_per_kwh(236.0, density, nl, 0.75, 30.0);
        CHECK(h2 == 2.0 * h1);
    }
    SUBCASE("bundled constants map 118 kg/m2 to ~23.4 g/kWh") {
        const double g_per_kwh = 1000.0 * harmonize_per_kwh(118.0, density, nl, 0.75, 30.0);
        CHECK(g_per_kwh == doctest::Approx(23.4).epsilon(0.004));
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(harmonize_per_kwh(118.0, 0.0, nl, 0.75, 30.0), ValidationError);
        CountryProfile dark;
        CHECK_THROWS_AS(harmonize_per_kwh(118.0, density, dark, 0.75, 30.0), ValidationError);
    }
}
