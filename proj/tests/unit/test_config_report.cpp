#include "foliation/config.hpp"
#include "foliation/csv.hpp"
#include "foliation/parallel.hpp"
#include "foliation/report.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <sstream>

using namespace foliation;

TEST(Config, DefaultsEchoBack)
{
    const auto cfg = parse_config("");
    EXPECT_EQ(cfg.format, "csv");
    EXPECT_EQ(cfg.samples_per_scale, 8000);
    EXPECT_DOUBLE_EQ(cfg.theta_min, 0.1);
    EXPECT_FALSE(cfg.seed);
    const std::string echo = cfg.echo();
    EXPECT_NE(echo.find("# theta_min = 0.10000000000000001\n"), std::string::npos);
    EXPECT_NE(echo.find("# seed = none\n"), std::string::npos);
}

TEST(Config, OverridesAndComments)
{
    const auto cfg = parse_config("# a run\n[run]\nscenario = E1.4  # inline\nseed = 7\n\n[transversal]\ntheta_min = 0.2\n[scan]\ngrid = 5\n");
    EXPECT_EQ(cfg.scenario, "E1.4");
    EXPECT_EQ(*cfg.seed, 7u);
    EXPECT_DOUBLE_EQ(cfg.theta_min, 0.2);
    EXPECT_EQ(cfg.grid, 5);
    EXPECT_NE(cfg.echo().find("# theta_min = 0.20000000000000001\n"), std::string::npos);
}

TEST(Config, Errors)
{
    auto message = [](const std::string& text) {
        try {
            (void)parse_config(text);
        } catch (const std::invalid_argument& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("scenario = E9.9\n").find("unknown scenario"), std::string::npos);
    EXPECT_NE(message("[cone]\nwidth = 3\n").find("unknown key"), std::string::npos);
    EXPECT_NE(message("[nowhere]\n").find("unknown section"), std::string::npos);
    EXPECT_NE(message("[cone]\nscales = many\n").find("bad value"), std::string::npos);
    EXPECT_NE(message("format = xml\n").find("format"), std::string::npos);
    EXPECT_NE(message("subcommand = cone\nscenario = E1.4\n").find("missing seed"), std::string::npos);
    EXPECT_NE(message("scenario = custom\n").find("needs [custom] field"), std::string::npos);
    EXPECT_EQ(message("subcommand = eta\nscenario = E1.15\n"), "");
    EXPECT_THROW(load_config("/nonexistent/run.cfg"), std::invalid_argument);
}

TEST(Config, SamplingSubcommandsNeedSeeds)
{
    RunConfig cfg;
    for (const char* sub : {"cone", "transversal", "report"}) EXPECT_THROW(cfg.require_seed(sub), std::invalid_argument) << sub;
    EXPECT_NO_THROW(cfg.require_seed("eta"));
    cfg.seed = 3;
    EXPECT_NO_THROW(cfg.require_seed("cone"));
}

TEST(Csv, NumbersRoundTrip)
{
    EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
    EXPECT_EQ(csv_number(-2.0), "-2");
    EXPECT_EQ(csv_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(csv_number(-std::numeric_limits<double>::infinity()), "-inf");
    for (double v : {1.0 / 3.0, 6.02214076e23, -1e-300}) EXPECT_EQ(std::stod(csv_number(v)), v);
}

TEST(Csv, FieldsAndWriter)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    std::ostringstream out;
    CsvWriter w(out, point_header(2));
    w.row(point_cells(make_point({Complex(1, -1), 0.5})));
    EXPECT_EQ(w.rows(), 1u);
    EXPECT_EQ(out.str(), "re1,im1,re2,im2\n1,-1,0.5,0\n");
    EXPECT_THROW(w.row({"1"}), std::logic_error);
}

TEST(Parallel, VisitsEveryIndexOnce)
{
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
    EXPECT_GE(worker_count(), 1u);
    EXPECT_THROW(parallel_for(10, [](std::size_t i) {
                     if (i == 7) throw std::runtime_error("boom");
                 }),
                 std::runtime_error);
}

TEST(Report, SmallScenarioPassesAndIsDeterministic)
{
    ReportOptions o;
    o.seed = 42;
    const auto a = run_report(scenario("E1.15"), o);
    const auto b = run_report(scenario("E1.15"), o);
    EXPECT_TRUE(a.passed()) << a.failures() << " failure(s)";
    std::ostringstream sa, sb;
    write_report_csv(sa, a);
    write_report_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
    EXPECT_EQ(sa.str().rfind("scenario,expectation,kind,status,measured,expected,citation,reason\n", 0), 0u);
}

TEST(Report, MissingCitationFails)
{
    const auto& sc = scenario("E1.15");
    Expectation e = sc.expectations.front();
    e.citation.clear();
    const auto line = run_expectation(sc, e);
    EXPECT_EQ(line.status, CheckStatus::fail);
    EXPECT_NE(line.reason.find("citation"), std::string::npos);
}

TEST(Report, ThrowingCheckBecomesAFailure)
{
    const auto& sc = scenario("E1.15");
    Expectation e;
    e.id = "bad sequence";
    e.kind = CheckKind::eta_sequence;
    e.sequence = "nope";
    e.citation = "test";
    const auto line = run_expectation(sc, e);
    EXPECT_EQ(line.status, CheckStatus::fail);
    EXPECT_FALSE(line.reason.empty());
}

TEST(Report, WrongExpectedValueFails)
{
    const auto& sc = scenario("E1.15");
    for (const auto& e : sc.expectations) {
        if (e.kind != CheckKind::eta_sequence) continue;
        Expectation wrong = e;
        wrong.expected = e.expected + 0.5;
        EXPECT_EQ(run_expectation(sc, wrong).status, CheckStatus::fail) << e.id;
    }
}
