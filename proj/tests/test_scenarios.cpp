#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "casimir/errors.hpp"
#include "casimir/scenarios.hpp"

using namespace casimir;

namespace {
const Material kAu = material_preset("Au");
const Material kAl = material_preset("Al");
}  // namespace

TEST(TemperatureDifference, PositiveAndAntisymmetric) {
    const PlateSystem sys(kAu, kAu, 200e-9);
    const auto forward = temperature_difference(sys, 300.0, 350.0);
    const auto backward = temperature_difference(sys, 350.0, 300.0);
    EXPECT_GT(forward.delta, 0.0);
    EXPECT_EQ(forward.delta, forward.f_low_T - forward.f_high_T);
    EXPECT_EQ(backward.delta, -forward.delta);
    EXPECT_EQ(forward.relative, forward.delta / forward.f_low_T);
}

TEST(TemperatureDifference, RejectsDegenerateTemperatures) {
    const PlateSystem sys(kAu, kAu, 200e-9);
    EXPECT_THROW(temperature_difference(sys, 300.0, 300.0), DomainError);
    EXPECT_THROW(temperature_difference(sys, 0.0, 300.0), DomainError);
}

TEST(TemperatureDifference, SolverFailureTaggedWithTemperature) {
    SolverOptions opts;
    opts.ceiling_factor = 1e-4;
    try {
        temperature_difference(PlateSystem(kAu, kAu, 1e-6), 1.0, 300.0, opts);
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(e.context().find("T = 1 K"), std::string::npos) << e.what();
        EXPECT_NE(e.context().find("Au-Au"), std::string::npos);
    }
}

TEST(RelativeCorrection, PositiveAndBoundedOnGrid) {
    const GapGrid grid{50e-9, 1.7e-6, GapSpacing::logarithmic, 20};
    const auto gaps = grid.values();
    const auto curve = relative_correction_curve({kAl, kAu}, gaps, 300.0, 350.0);
    ASSERT_EQ(curve.size(), 20u);
    for (const auto& r : curve) {
        EXPECT_GT(r.delta, 0.0) << r.gap;
        EXPECT_GT(r.relative, 0.0);
        EXPECT_LT(r.relative, 0.2);
    }
    EXPECT_GT(curve.back().relative, curve.front().relative);
}

TEST(GapGrid, LinearAndLogarithmic) {
    const auto lin = GapGrid{100e-9, 300e-9, GapSpacing::linear, 3}.values();
    ASSERT_EQ(lin.size(), 3u);
    EXPECT_DOUBLE_EQ(lin[1], 200e-9);
    const auto lg = GapGrid{10e-9, 1000e-9, GapSpacing::logarithmic, 3}.values();
    EXPECT_NEAR(lg[1], 100e-9, 1e-20);
    EXPECT_EQ(lg.front(), 10e-9);
    EXPECT_EQ(lg.back(), 1000e-9);
    EXPECT_EQ(GapGrid({5e-8, 1e-6, GapSpacing::linear, 1}).values().size(), 1u);
    EXPECT_THROW(GapGrid({0.0, 1e-6, GapSpacing::linear, 3}).values(), DomainError);
    EXPECT_THROW(GapGrid({1e-8, 1e-6, GapSpacing::linear, 0}).values(), DomainError);
}

TEST(Sweep, SingletonMatchesDirectPressure) {
    SweepSpec spec{{400e-9}, {300.0}, {{kAu, kAl}}};
    const auto table = sweep(spec);
    ASSERT_EQ(table.rows.size(), 1u);
    const auto direct = casimir_pressure(PlateSystem(kAu, kAl, 400e-9), ThermalState(300.0));
    EXPECT_EQ(table.rows[0].pressure_Pa, std::abs(direct.pressure));
    EXPECT_EQ(table.rows[0].m_used, direct.m_used);
    EXPECT_EQ(table.rows[0].pair, "Au-Al");
    EXPECT_NEAR(table.rows[0].tm_share + table.rows[0].te_share, 1.0, 1e-14);
}

TEST(Sweep, OrderedAndDecreasingInGap) {
    SweepSpec spec{{200e-9, 50e-9, 100e-9}, {350.0, 300.0}, {{kAu, kAu}}};
    const auto rows = sweep(spec).rows;
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].temperature_K, 300.0);
    EXPECT_EQ(rows[3].temperature_K, 350.0);
    for (int block : {0, 3}) {
        EXPECT_EQ(rows[block].gap_m, 50e-9);
        EXPECT_GT(rows[block].pressure_Pa, rows[block + 1].pressure_Pa);
        EXPECT_GT(rows[block + 1].pressure_Pa, rows[block + 2].pressure_Pa);
    }
}

TEST(Sweep, AluminiumPairIsStrongest) {
    SweepSpec spec{{100e-9}, {300.0}, preset_pairs()};
    const auto rows = sweep(spec).rows;
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].pair, "Al-Al");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[0].pressure_Pa, rows[i].pressure_Pa) << rows[i].pair;
}

TEST(Sweep, DeterministicAndThreadIndependent) {
    SweepSpec spec{GapGrid{60e-9, 900e-9, GapSpacing::logarithmic, 4}.values(), {300.0, 350.0}, preset_pairs()};
    const auto first = sweep(spec);
    const auto second = sweep(spec);
    const auto threaded = sweep(spec, {}, 3);
    EXPECT_EQ(first.rows, second.rows);
    EXPECT_EQ(first.rows, threaded.rows);
}

TEST(Sweep, CsvRoundTripKeepsTwelveDigits) {
    SweepSpec spec{{75e-9, 1.3e-6}, {300.0}, {{kAu, kAl}, {kAl, kAl}}};
    const auto table = sweep(spec);
    std::stringstream buffer;
    write_sweep_csv(buffer, table);
    EXPECT_NE(buffer.str().find("# constants:"), std::string::npos);
    const auto rows = read_sweep_csv(buffer);
    ASSERT_EQ(rows.size(), table.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = table.rows[i];
        EXPECT_EQ(a.pair, b.pair);
        EXPECT_EQ(a.material_1, b.material_1);
        EXPECT_EQ(a.m_used, b.m_used);
        for (auto [x, y] : {std::pair{a.gap_m, b.gap_m}, {a.temperature_K, b.temperature_K},
                            {a.pressure_Pa, b.pressure_Pa}, {a.tm_share, b.tm_share}})
            EXPECT_NEAR(x, y, 1e-12 * std::abs(y));
        EXPECT_NEAR(a.te_share, b.te_share, 1e-12);
    }
}

TEST(Sweep, CsvReaderRejectsMalformedRows) {
    std::istringstream wrong_header("a,b\n");
    EXPECT_THROW(read_sweep_csv(wrong_header), ParseError);
    std::istringstream short_row(
        "pair,material_1,material_2,gap_m,temperature_K,pressure_Pa,tm_share,te_share,m_used\nAu-Au,Au,Au,1e-7\n");
    EXPECT_THROW(read_sweep_csv(short_row), ParseError);
}

TEST(Sweep, InvalidSpecAndCellFailure) {
    EXPECT_THROW(sweep(SweepSpec{{}, {300.0}, preset_pairs()}), DomainError);
    EXPECT_THROW(sweep(SweepSpec{{1e-7}, {-3.0}, preset_pairs()}), DomainError);
    const Material narrow = Material::tabulated("narrow", PermittivityTable({{1e15, 50.0}, {1e16, 2.0}}));
    try {
        sweep(SweepSpec{{1e-7}, {300.0}, {{narrow, kAu}}});
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(e.context().find("narrow-Au"), std::string::npos);
    }
}

TEST(GroupOrdering, GroupMeansOrdered) {
    for (double a : {100e-9, 2e-6}) {
        const auto groups = group_ordering(a, 300.0);
        ASSERT_EQ(groups.size(), 3u);
        EXPECT_EQ(groups[0].members.size(), 1u);
        EXPECT_EQ(groups[1].members.size(), 2u);
        EXPECT_EQ(groups[2].members.size(), 3u);
        EXPECT_GT(groups[0].mean, groups[1].mean) << a;
        EXPECT_GT(groups[1].mean, groups[2].mean) << a;
    }
}

TEST(GroupOrdering, SinglePairAndCanonicalLabels) {
    const std::vector<std::pair<std::string, std::string>> one{{"cu", "AL"}};
    const auto groups = group_ordering(500e-9, 300.0, one);
    ASSERT_EQ(groups.size(), 1u);
    EXPECT_EQ(groups[0].name, "II");
    ASSERT_EQ(groups[0].members.size(), 1u);
    EXPECT_EQ(groups[0].members[0].pair, "Al-Cu");
}

TEST(GroupOrdering, RejectsCustomMaterials) {
    const std::vector<std::pair<std::string, std::string>> custom{{"Au", "Ag"}};
    EXPECT_THROW(group_ordering(500e-9, 300.0, custom), UnsupportedError);
}
