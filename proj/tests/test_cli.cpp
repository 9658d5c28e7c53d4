#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "casimir/cli.hpp"
#include "casimir/scenarios.hpp"

using namespace casimir::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "casimir");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path;
}

}  // namespace

TEST(Units, Lengths) {
    EXPECT_DOUBLE_EQ(parse_length("200nm"), 200e-9);
    EXPECT_DOUBLE_EQ(parse_length("1.5um"), 1.5e-6);
    EXPECT_DOUBLE_EQ(parse_length("3e-6m"), 3e-6);
    EXPECT_DOUBLE_EQ(parse_length("2 mm"), 2e-3);
    EXPECT_THROW(parse_length("0nm"), UsageError);
    EXPECT_THROW(parse_length("200"), UsageError);
    EXPECT_THROW(parse_length("200pc"), UsageError);
    EXPECT_THROW(parse_length("nm"), UsageError);
}

TEST(Units, TemperaturesAndFrequencies) {
    EXPECT_DOUBLE_EQ(parse_temperature("300K"), 300.0);
    EXPECT_DOUBLE_EQ(parse_temperature("350"), 350.0);
    EXPECT_THROW(parse_temperature("300C"), UsageError);
    EXPECT_THROW(parse_temperature("-1K"), UsageError);
    EXPECT_DOUBLE_EQ(parse_frequency("9.0eV"), 9.0 * 1.519e15);
    EXPECT_DOUBLE_EQ(parse_frequency("35meV"), 0.035 * 1.519e15);
    EXPECT_DOUBLE_EQ(parse_frequency("1e14rad/s"), 1e14);
    EXPECT_THROW(parse_frequency("9"), UsageError);
}

TEST(Units, GapGrids) {
    const auto grid = parse_gaps("50nm:3um:log:60");
    ASSERT_EQ(grid.size(), 60u);
    EXPECT_DOUBLE_EQ(grid.front(), 50e-9);
    EXPECT_DOUBLE_EQ(grid.back(), 3e-6);
    EXPECT_EQ(parse_gaps("100nm,200nm").size(), 2u);
    EXPECT_THROW(parse_gaps("50nm:3um:cubic:5"), UsageError);
    EXPECT_THROW(parse_gaps("50nm:3um:lin"), UsageError);
    EXPECT_THROW(parse_gaps("50nm:3um:lin:x"), UsageError);
}

TEST(Cli, PressureAuAuAtOneMicron) {
    const auto r = invoke({"pressure", "--pair", "Au,Au", "--gap", "1um", "--temp", "300K"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const auto pos = r.out.find("|F| = ");
    ASSERT_NE(pos, std::string::npos);
    const double mpa = std::stod(r.out.substr(pos + 6));
    EXPECT_NEAR(mpa, 0.96, 0.03 * 0.96);
    EXPECT_NE(r.out.find("mPa"), std::string::npos);
}

TEST(Cli, PressureCsvHasNoMilliPascal) {
    const auto r = invoke({"pressure", "--pair", "Al,Cu", "--gap", "300nm", "--temp", "300", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(r.out.find("mPa"), std::string::npos);
    std::istringstream in(r.out);
    const auto rows = casimir::read_sweep_csv(in);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].pair, "Al-Cu");
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({"pressure", "--pair", "Au,Au", "--gap", "0nm", "--temp", "300K"}).code, kExitUsage);
    EXPECT_EQ(invoke({"pressure", "--pair", "Au,Au", "--gap", "1um", "--temp", "300K", "--bogus"}).code, kExitUsage);
    EXPECT_EQ(invoke({}).code, kExitUsage);
    const auto unknown = invoke({"pressure", "--pair", "Au,Ag", "--gap", "1um", "--temp", "300K"});
    EXPECT_EQ(unknown.code, kExitUsage);
    EXPECT_NE(unknown.err.find("--pair"), std::string::npos);
    EXPECT_EQ(invoke({"pressure", "--pair", "Au", "--gap", "1um", "--temp", "300K"}).code, kExitUsage);
    EXPECT_EQ(invoke({"sweep", "--pair", "Au,Au", "--pairs", "Al,Al", "--gaps", "1um", "--temps", "300"}).code,
              kExitUsage);
    EXPECT_EQ(invoke({"diff", "--pair", "Au,Au", "--gaps", "1um", "--temps", "300"}).code, kExitUsage);
    EXPECT_EQ(invoke({"pressure", "--pair", "Au,Au", "--gap", "1um", "--temp", "300K", "--format", "xml"}).code,
              kExitUsage);
}

TEST(Cli, ComputationErrorExitsTwo) {
    const auto table = temp_file("casimir_narrow.csv", "zeta_rad_per_s,eps\n1e15,50\n1e16,2\n");
    const auto r = invoke({"pressure", "--table", "N:" + table.string(), "--pair", "N,Au", "--gap", "1um",
                           "--temp", "300K"});
    EXPECT_EQ(r.code, kExitComputation);
    EXPECT_NE(r.err.find("zeta"), std::string::npos);
}

TEST(Cli, HelpForEverySubcommand) {
    for (const char* sub : {"pressure", "sweep", "diff", "materials", "import-table"}) {
        const auto r = invoke({sub, "--help"});
        EXPECT_EQ(r.code, kExitOk) << sub;
        EXPECT_FALSE(r.out.empty()) << sub;
    }
    EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Cli, DiffCsvAuAu200nm) {
    const auto r = invoke({"diff", "--pair", "Au,Au", "--gaps", "200nm", "--temps", "300,350", "--format", "csv"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream in(r.out);
    std::string line, data;
    int data_rows = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) { header = true; continue; }
        data = line;
        ++data_rows;
    }
    ASSERT_EQ(data_rows, 1);
    std::vector<std::string> fields;
    std::stringstream ss(data);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    ASSERT_EQ(fields.size(), 10u);
    EXPECT_NEAR(std::stod(fields[8]), 2.0e-3, 0.15 * 2.0e-3);
}

TEST(Cli, SweepCsvParsesUnderSchema) {
    const auto r = invoke({"sweep", "--pairs", "Au,Au", "Al,Cu", "--gaps", "100nm:400nm:lin:3", "--temps", "300,350",
                           "--format", "csv", "--jobs", "2"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::istringstream in(r.out);
    const auto rows = casimir::read_sweep_csv(in);
    EXPECT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows.front().pair, "Au-Au");
    EXPECT_EQ(rows.back().pair, "Al-Cu");
}

TEST(Cli, SweepTextAllPresets) {
    const auto r = invoke({"sweep", "--pairs", "all", "--gaps", "1um", "--temps", "300"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_NE(r.out.find("Cu-Cu"), std::string::npos);
}

TEST(Cli, CustomDrudeMaterialAndOutputFile) {
    const auto out = std::filesystem::temp_directory_path() / "casimir_cli_out.csv";
    std::filesystem::remove(out);
    const auto r = invoke({"pressure", "--drude", "Ag:9.0eV:21meV", "--pair", "Ag,Au", "--gap", "500nm", "--temp",
                           "300K", "--format", "csv", "--output", out.string()});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    std::ifstream in(out);
    const auto rows = casimir::read_sweep_csv(in);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].material_1, "Ag");
    EXPECT_EQ(invoke({"pressure", "--drude", "Ag:9.0eV:0meV", "--pair", "Ag,Au", "--gap", "500nm", "--temp", "300K"})
                  .code,
              kExitUsage);
}

TEST(Cli, TableWithFallback) {
    std::ostringstream csv;
    csv << "zeta_rad_per_s,eps\n";
    const casimir::DrudeParams au(9.0 * 1.519e15, 0.035 * 1.519e15);
    for (double z = 1e13; z <= 1e17; z *= 10.0) csv << z << ',' << casimir::drude_eps(z, au) << '\n';
    const auto path = temp_file("casimir_au_table.csv", csv.str());
    const auto tab = invoke({"pressure", "--table", "AuT:" + path.string() + ":Au", "--pair", "AuT,AuT", "--gap",
                             "1um", "--temp", "300K", "--format", "csv"});
    const auto ref = invoke({"pressure", "--pair", "Au,Au", "--gap", "1um", "--temp", "300K", "--format", "csv"});
    ASSERT_EQ(tab.code, kExitOk) << tab.err;
    ASSERT_EQ(ref.code, kExitOk) << ref.err;
    std::istringstream a(tab.out), b(ref.out);
    const double tabulated = casimir::read_sweep_csv(a).at(0).pressure_Pa;
    const double analytic = casimir::read_sweep_csv(b).at(0).pressure_Pa;
    EXPECT_NEAR(tabulated, analytic, 0.01 * analytic);
}

TEST(Cli, MaterialsListing) {
    const auto r = invoke({"materials"});
    ASSERT_EQ(r.code, kExitOk);
    for (const char* name : {"Au", "Cu", "Al"}) EXPECT_NE(r.out.find(name), std::string::npos);
    EXPECT_NE(r.out.find("11.5"), std::string::npos);
    const auto csv = invoke({"materials", "--format", "csv"});
    EXPECT_NE(csv.out.find("name,model,omega_p_rad_per_s,nu_rad_per_s"), std::string::npos);
}

TEST(Cli, ImportTable) {
    const auto good = temp_file("casimir_good.csv", "# data\nzeta_rad_per_s,eps\n1e12,1e6\n1e13,1e4\n1e14,1e2\n");
    const auto ok = invoke({"import-table", good.string()});
    EXPECT_EQ(ok.code, kExitOk) << ok.err;
    EXPECT_NE(ok.out.find("3 points"), std::string::npos);

    const auto bad = temp_file("casimir_bad.csv", "zeta_rad_per_s,eps\n1e12,100\n1e13,50\n5e12,20\n");
    const auto fail = invoke({"import-table", bad.string()});
    EXPECT_EQ(fail.code, kExitComputation);
    EXPECT_NE(fail.err.find("row 3"), std::string::npos);

    EXPECT_EQ(invoke({"import-table", "/nonexistent/table.csv"}).code, kExitComputation);
}
