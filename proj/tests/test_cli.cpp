#include "cli_app.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace symtherm;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("symtherm-cli-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++c;
    return c;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = scratch(::testing::UnitTest::GetInstance()->current_test_info()->name());
        ::setenv("SYMTHERM_CACHE_DIR", (dir_ / "cache").c_str(), 1);
    }
    void TearDown() override {
        ::unsetenv("SYMTHERM_CACHE_DIR");
        fs::remove_all(dir_);
    }
    fs::path dir_;
};

} // namespace

TEST_F(CliTest, ComboQueries) {
    EXPECT_EQ(run_cli({"combo", "dim", "--shape", "2,1"}).out, "2\n");
    EXPECT_EQ(run_cli({"combo", "kostka", "--shape", "2,1", "--content", "1,1,1"}).out, "2\n");
    EXPECT_EQ(run_cli({"combo", "schur", "--shape", "2,1", "--d", "2"}).out, "2\n");
    EXPECT_EQ(run_cli({"combo", "sector-dim", "--shape", "2,1"}).out, "3\n");
    EXPECT_EQ(run_cli({"combo", "count", "--n", "4", "--d", "4"}).out, "5\n");
    EXPECT_EQ(run_cli({"combo", "partitions", "--n", "4", "--d", "2"}).out, "(4)\n(3,1)\n(2,2)\n");
    EXPECT_EQ(run_cli({"combo", "rate", "--x", "0.5,0.5"}).out, format_double(std::log(2.0)) + "\n");
    const BigInt big = binomial(50, 20) - binomial(50, 19);
    EXPECT_EQ(run_cli({"combo", "dim", "--shape", "30,20"}).out, big.str() + "\n");
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
    EXPECT_EQ(run_cli({"combo", "dim", "--shape", "1,2"}).code, 2);
    EXPECT_EQ(run_cli({"combo", "dim", "--bogus"}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({}).code, 2);
    const auto r = run_cli({"potential", "--n", "10", "--beta", "-1", "--no-cache"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("beta"), std::string::npos);
    EXPECT_EQ(run_cli({"potential", "--n", "10", "--method", "magic", "--no-cache"}).code, 2);
    EXPECT_EQ(run_cli({"oracle", "--n", "20"}).code, 2);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, UnwritableOutputExitsOneWithPath) {
    const auto target = (dir_ / "missing" / "sub" / "out.csv").string();
    const auto r = run_cli({"potential", "--n", "6", "--method", "analytic", "--out", target});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find(target), std::string::npos);
}

TEST_F(CliTest, PotentialCsvLayout) {
    const auto r = run_cli({"potential", "--n", "12", "--alpha", "1", "--omega", "0.5", "--beta", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = parse_csv(r.out);
    EXPECT_EQ(table.header,
              (std::vector<std::string>{"l", "f_exact", "f_asymptotic", "f_analytic", "s", "e_numeric", "e_analytic"}));
    ASSERT_EQ(table.rows.size(), 7u);
    EXPECT_EQ(table.rows.front()[0], 0.0);
    EXPECT_NEAR(*table.rows.front()[4], std::log(2.0), 1e-15);
    EXPECT_NE(r.err.find("sectors"), std::string::npos); // progress goes to stderr only
}

TEST_F(CliTest, PotentialMissingMethodsLeaveEmptyFields) {
    const auto r = run_cli({"potential", "--n", "4", "--method", "analytic"});
    ASSERT_EQ(r.code, 0);
    const auto table = parse_csv(r.out);
    for (const auto& row : table.rows) {
        EXPECT_FALSE(row[1].has_value());
        EXPECT_FALSE(row[2].has_value());
        EXPECT_TRUE(row[3].has_value());
    }
}

TEST_F(CliTest, PaperConstantAddsColumns) {
    const auto r = run_cli({"potential", "--n", "8", "--method", "analytic", "--paper-constant"});
    ASSERT_EQ(r.code, 0);
    const auto table = parse_csv(r.out);
    EXPECT_EQ(table.header.size(), 9u);
    EXPECT_EQ(table.header[7], "f_analytic_printed");
}

TEST_F(CliTest, CsvRoundTripAndDeterminism) {
    const auto a = dir_ / "a.csv", b = dir_ / "b.csv";
    const auto sa = dir_ / "a.svg", sb = dir_ / "b.svg";
    ASSERT_EQ(run_cli({"potential", "--n", "40", "--out", a.string(), "--svg", sa.string()}).code, 0);
    ASSERT_EQ(run_cli({"potential", "--n", "40", "--threads", "3", "--out", b.string(), "--svg", sb.string()}).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_EQ(slurp(sa), slurp(sb));

    const auto table = read_csv(a);
    const ModelParams p{40, 0.5, 1.0, 2.0};
    const auto curve = potential_curve(p, CurveMethod::exact, attainable_l_grid(40));
    const auto asymptotic =
        potential_curve(compute_sector_spectra(40, 0.5, 1.0), 2.0, CurveMethod::asymptotic, attainable_l_grid(40));
    ASSERT_EQ(table.rows.size(), curve.points.size());
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        EXPECT_EQ(table.rows[i][0], curve.points[i].l);
        EXPECT_EQ(table.rows[i][1], curve.points[i].f);
        EXPECT_EQ(table.rows[i][5], asymptotic.points[i].e); // ground-state energy rate
    }
    const auto svg = slurp(sa);
    EXPECT_EQ(count(svg, "<polyline"), 3u);
    for (const char* m : {"exact", "asymptotic", "analytic"}) EXPECT_NE(svg.find(std::string(">") + m + "<"), std::string::npos);
}

TEST_F(CliTest, CsvWriterEdgeCases) {
    EXPECT_EQ(to_csv(potential_table({})), "l,f_exact,f_asymptotic,f_analytic,s,e_numeric,e_analytic\r\n");
    PotentialSet single;
    single.analytic = potential_curve({1, 0.5, 1.0, 2.0}, CurveMethod::analytic, std::vector<double>{0.5});
    EXPECT_EQ(potential_table(single).rows.size(), 1u);
    ThermoCurve at_zero{CurveMethod::analytic, {2, 0.5, 1.0, 2.0}, {}};
    at_zero.points = potential_curve({2, 0.5, 1.0, 2.0}, CurveMethod::analytic, std::vector<double>{0.0}).points;
    PotentialSet zero_set;
    zero_set.analytic = at_zero;
    const auto row = potential_table(zero_set).rows.at(0);
    EXPECT_EQ(row[4], std::log(2.0));

    CsvTable awkward{{"a", "b", "c"}, {{-0.0, std::nullopt, 1e-300}, {0.1 + 0.2, 123456789.125, std::nullopt}}};
    const auto back = parse_csv(to_csv(awkward));
    EXPECT_EQ(back.rows, awkward.rows);
    EXPECT_EQ(to_csv(awkward).substr(7, 10), "0,,1e-300\r");
}

TEST_F(CliTest, SvgShapes) {
    ThermoCurve two{CurveMethod::analytic, {2, 0.5, 1.0, 2.0}, {{0.0, -1.0, 0, 0}, {0.5, -0.5, 0, 0}}};
    const auto svg = potential_svg(std::vector<ThermoCurve>{two});
    EXPECT_EQ(count(svg, "<polyline"), 1u);
    const auto pos = svg.find("points=\"");
    ASSERT_NE(pos, std::string::npos);
    const auto end = svg.find('"', pos + 8);
    EXPECT_EQ(count(svg.substr(pos + 8, end - pos - 8), ","), 2u);

    const std::vector<double> betas{0.5, 1.0}, alphas{-1.0, 1.0};
    const auto pts = phase_diagram(betas, alphas, 0.5, 10, CurveMethod::analytic);
    EXPECT_EQ(count(phase_svg(pts, 2, 2), "class=\"cell\""), 4u);
    EXPECT_THROW(potential_svg(std::vector<ThermoCurve>{}), DomainError);
}

TEST_F(CliTest, PhaseTableOneRowPerGridPoint) {
    const auto out = dir_ / "phase.csv";
    const auto svg = dir_ / "phase.svg";
    const auto r = run_cli({"phase", "--n", "20", "--alpha-min", "1", "--alpha-max", "1", "--alpha-count", "1",
                            "--beta-min", "0.2", "--beta-max", "3.2", "--beta-count", "61", "--method", "exact",
                            "--out", out.string(), "--svg", svg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = read_csv(out);
    EXPECT_EQ(table.header, (std::vector<std::string>{"beta", "alpha", "l_star", "f_star", "s_star", "e_star"}));
    EXPECT_EQ(table.rows.size(), 61u);
    EXPECT_EQ(count(slurp(svg), "class=\"cell\""), 61u);
}

TEST_F(CliTest, ConfigFilePrecedence) {
    const auto cfg = dir_ / "run.json";
    std::ofstream(cfg) << R"({"n": 6, "method": "analytic", "beta": 1.0})";
    const auto from_file = parse_csv(run_cli({"potential", "--config", cfg.string()}).out);
    EXPECT_EQ(from_file.rows.size(), 4u);
    const auto overridden = parse_csv(run_cli({"potential", "--config", cfg.string(), "--n", "10"}).out);
    EXPECT_EQ(overridden.rows.size(), 6u);

    std::ofstream(cfg) << R"({"n": 6, "colour": "blue"})";
    EXPECT_EQ(run_cli({"potential", "--config", cfg.string()}).code, 2);
}

TEST_F(CliTest, EntropyFromBlockFile) {
    const auto blocks = dir_ / "blocks.json";
    std::ofstream(blocks) << R"([
        {"lambda": [1, 1], "p": 0.5, "dim": "1", "deg": "1", "spectrum": [1.0]},
        {"lambda": [2], "p": 0.5, "dim": "1", "deg": "3", "spectrum": [0.5, 0.5]}
    ])";
    const auto r = run_cli({"entropy", "--blocks", blocks.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_NEAR(j["total"].get<double>(), std::log(2.0) + 0.5 * std::log(2.0), 1e-15);
    EXPECT_TRUE(j["bounds_ok"].get<bool>());
    EXPECT_EQ(j["block_slack"].size(), 2u);

    std::ofstream(blocks) << R"([{"lambda": [2], "p": 0.4, "dim": "1", "deg": "1", "spectrum": [1.0]}])";
    const auto bad = run_cli({"entropy", "--blocks", blocks.string()});
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("block weights not normalized"), std::string::npos);
}

TEST_F(CliTest, OracleCommand) {
    const auto r = run_cli({"oracle", "--n", "6", "--alpha", "1", "--omega", "0.5", "--beta", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(count(r.out, "PASS "), 5u);
    EXPECT_EQ(count(r.out, "FAIL "), 0u);
}

TEST_F(CliTest, CacheWarmRunAndClear) {
    const auto cold = run_cli({"potential", "--n", "30", "--method", "exact"});
    ASSERT_EQ(cold.code, 0);
    const auto inspect = run_cli({"cache", "inspect"});
    EXPECT_NE(inspect.out.find("records 16"), std::string::npos) << inspect.out;
    const auto warm = run_cli({"potential", "--n", "30", "--method", "exact"});
    EXPECT_EQ(cold.out, warm.out);
    EXPECT_EQ(run_cli({"cache", "clear"}).out, "removed 16\n");
    EXPECT_NE(run_cli({"cache", "--dir", (dir_ / "cache").string(), "inspect"}).out.find("records 0"), std::string::npos);

    run_cli({"potential", "--n", "30", "--method", "exact", "--no-cache"});
    EXPECT_NE(run_cli({"cache", "inspect"}).out.find("records 0"), std::string::npos);
}
