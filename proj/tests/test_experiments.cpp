#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qstrat/experiments.hpp"

using namespace qstrat;
using namespace qstrat::experiments;

namespace {

std::string render(const Artifact& a, Format f) {
    std::ostringstream os;
    a.write(os, f);
    return os.str();
}

ExperimentConfig config(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.seed = 2025;
    return cfg;
}

}  // namespace

TEST(Csv, NineSignificantDigits) {
    EXPECT_EQ(format_real(-0.0339080459770115), "-0.033908046");
    EXPECT_EQ(format_real(0.5), "0.5");
    Table t{{"a", "b", "c"}, {{std::string("x"), 3LL, 1.0 / 3.0}, {Cell{}, -1LL, 2.0}}};
    std::ostringstream os;
    t.write_csv(os);
    EXPECT_EQ(os.str(), "a,b,c\nx,3,0.333333333\n,-1,2\n");
}

TEST(MseGrid, RowsAndSigns) {
    auto cfg = config(Experiment::MseGrid);
    const auto a = run_mse_grid(cfg);
    EXPECT_TRUE(a.pass());
    ASSERT_EQ(a.table.rows.size(), 420u);
    EXPECT_EQ(a.report["rows_per_target"], 210);
    for (const auto& row : a.table.rows) {
        const auto m = std::get<long long>(row[1]);
        const double diff = std::get<double>(row[5]);
        if (m == 1) EXPECT_EQ(diff, 0.0);
        else EXPECT_GT(diff, 0.0);
    }
    const std::string csv = render(a, Format::Csv);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "target,m,k,mse_iid,mse_qs,log_diff,qs_lower");
}

TEST(QqExport, RowCounts) {
    auto cfg = config(Experiment::QqExport);
    cfg.m = 30;
    cfg.layers = LayerSpec({18, 9, 3});
    cfg.replicates = 50;
    const auto a = run_qq_export(cfg);
    EXPECT_EQ(a.table.rows.size(), 3u * 50u * 30u);
    EXPECT_TRUE(a.report.contains("adherence"));

    cfg.m = 1;
    cfg.layers.reset();
    cfg.replicates = 7;
    EXPECT_EQ(run_qq_export(cfg).table.rows.size(), 2u * 7u);
}

TEST(QqExport, LqsAdherenceLiesBetween) {
    auto cfg = config(Experiment::QqExport);
    cfg.layers = LayerSpec({18, 9, 3});
    cfg.replicates = 10000;
    cfg.threads = 4;
    const auto a = run_qq_export(cfg);
    EXPECT_TRUE(a.report["lqs_between_qs_and_iid"].get<bool>());
    EXPECT_TRUE(a.pass());
}

TEST(MomentCheck, SmallRunPasses) {
    auto cfg = config(Experiment::MomentCheck);
    cfg.m = 30;
    cfg.layers = LayerSpec({18, 9, 3});
    cfg.replicates = 20000;
    cfg.threads = 4;
    const auto a = run_moment_check(cfg);
    EXPECT_TRUE(a.pass()) << a.report.dump(2);
    EXPECT_EQ(a.table.rows.size(), 9u);  // 3 statistics x 3 methods

    cfg.m = 1;
    cfg.layers.reset();
    EXPECT_THROW(run_moment_check(cfg), ConfigError);
}

TEST(SpacingCheck, SmallRunPassesAndValidates) {
    auto cfg = config(Experiment::SpacingCheck);
    cfg.m = 10;
    cfg.ell = 3;
    cfg.replicates = 20000;
    cfg.threads = 4;
    const auto a = run_spacing_check(cfg);
    EXPECT_TRUE(a.pass()) << a.report.dump(2);

    cfg.ell = 10;
    EXPECT_THROW(run_spacing_check(cfg), ConfigError);
    cfg.ell = 0;
    EXPECT_THROW(run_spacing_check(cfg), ConfigError);
}

TEST(ImportanceStudy, ReportAndRows) {
    auto cfg = config(Experiment::ImportanceStudy);
    cfg.example = "A";
    cfg.replicates = 200;
    cfg.threads = 4;
    const auto a = run_importance_study(cfg);
    EXPECT_EQ(a.table.rows.size(), 400u);
    EXPECT_TRUE(a.pass());
    EXPECT_EQ(a.report["methods"].size(), 2u);
    EXPECT_LT(a.report["methods"][1]["std_err"].get<double>(), a.report["methods"][0]["std_err"].get<double>());

    cfg.example = "custom";
    cfg.target = {"beta", {2, 2}, {}, {}};
    cfg.proposal = {"beta", {3, 2}, {}, {}};
    cfg.integrand = "xlogx";
    cfg.true_value = -7.0 / 24.0;
    const auto b = run_importance_study(cfg);
    EXPECT_EQ(render(a, Format::Csv), render(b, Format::Csv));

    cfg.example = "C";
    EXPECT_THROW(run_importance_study(cfg), ConfigError);
}

TEST(Artifacts, IndependentOfThreadCount) {
    for (auto e : {Experiment::QqExport, Experiment::ImportanceStudy, Experiment::MomentCheck}) {
        auto cfg = config(e);
        cfg.replicates = 300;
        cfg.layers = LayerSpec({18, 9, 3});
        cfg.m = 30;
        cfg.threads = 1;
        const auto serial = run(cfg);
        cfg.threads = 6;
        const auto parallel = run(cfg);
        EXPECT_EQ(render(serial, Format::Csv), render(parallel, Format::Csv));
        EXPECT_EQ(render(serial, Format::Json), render(parallel, Format::Json));
    }
}

TEST(Config, FromJson) {
    const auto j = nlohmann::json::parse(R"({
        "experiment": "importance_study", "example": "B", "m": 30, "layers": "18,9,3",
        "replicates": 10, "seed": 99, "format": "csv", "threads": 2,
        "dist": {"family": "gamma", "params": [2, 5]}
    })");
    const auto cfg = config_from_json(j);
    EXPECT_EQ(cfg.experiment, Experiment::ImportanceStudy);
    EXPECT_EQ(cfg.example, "B");
    EXPECT_EQ(cfg.layers->sizes(), (std::vector<int>{18, 9, 3}));
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.format, Format::Csv);
    EXPECT_EQ(cfg.dist.family, "gamma");
    EXPECT_EQ(make_distribution(cfg.dist).name(), "gamma(2,5)");

    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"bogus": 1})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"m": "ten"})")), ConfigError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"experiment": "nope"})")), ConfigError);

    ExperimentConfig bad;
    bad.experiment = Experiment::QqExport;
    bad.m = 30;
    bad.layers = LayerSpec({18, 9, 4});
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Config, DistributionSpecs) {
    EXPECT_EQ(make_distribution({"uniform", {}, {}, {}}).family(), Family::Uniform01);
    EXPECT_EQ(make_distribution({"normal", {}, {}, {}}).name(), "normal(0,1)");
    EXPECT_EQ(make_distribution({"discrete", {}, {0, 1}, {0.5, 0.5}}).family(), Family::Discrete);
    EXPECT_THROW(make_distribution({"beta", {2}, {}, {}}), ConfigError);
    EXPECT_THROW(make_distribution({"gamma", {2, -1}, {}, {}}), ConfigError);
    EXPECT_THROW(make_distribution({"cauchy", {}, {}, {}}), ConfigError);
}
