#include <csln/csln.hpp>
#include <csln/io.hpp>
#include <gtest/gtest.h>

#include <filesystem>

using namespace csln;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("csln_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& f) const { return (dir_ / f).string(); }

    // Runs the CLI, capturing stdout and stderr to a file; returns the exit status.
    int run(const std::string& args, std::string* out = nullptr) const {
        const std::string log = path("cli.log");
        const std::string cmd = std::string(CSLN_CLI_PATH) + " " + args + " > " + log + " 2>&1";
        int rc = std::system(cmd.c_str());
        if (out) *out = read_file(log);
        return WEXITSTATUS(rc);
    }

    void make_data() const {
        ASSERT_EQ(run("gen-data --preset syn2d --m 400 --seed 3 --out " + path("tr.csv")), 0);
        ASSERT_EQ(run("gen-data --preset syn2d --m 300 --seed 4 --out " + path("te.csv")), 0);
    }

    static std::vector<std::string> lines(const std::string& s) {
        std::vector<std::string> v;
        std::istringstream in(s);
        for (std::string l; std::getline(in, l);) v.push_back(l);
        return v;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenDataMatchesLibrary) {
    make_data();
    auto d = ingest_csv(path("tr.csv"));
    auto s = preset("syn2d");
    s.m = 400;
    auto ref = gen_gaussian(s, 3);
    EXPECT_EQ(d.y, ref.y);
    EXPECT_TRUE(d.X.isApprox(ref.X, 1e-15));
    ASSERT_TRUE(d.has_eta());

    write_file_atomic(path("spec.json"),
                      R"({"pi":0.3,"mu_pos":[1,0],"mu_neg":[-1,0],"sigma_pos":[[1,0],[0,1]],"m":50})");
    ASSERT_EQ(run("gen-data --spec " + path("spec.json") + " --out " + path("s.csv")), 0);
    EXPECT_EQ(ingest_csv(path("s.csv")).size(), 50u);
    EXPECT_NE(run("gen-data --preset nope --out " + path("x.csv")), 0);
}

TEST_F(Cli, TrainUsqWritesModel) {
    make_data();
    ASSERT_EQ(run("train-usq --train " + path("tr.csv") + " --alpha 0.3 --gamma 0.8 --lambda 0.1 --model-out " + path("m.json")), 0);
    auto j = json::parse(read_file(path("m.json")));
    auto fit = fit_usq_closed_form(ingest_csv(path("tr.csv")), CostParams(0.3, 0.8, 0.1));
    EXPECT_NEAR(j["b"].get<double>(), fit.model.b, 1e-12);
    EXPECT_NEAR(j["w"][0].get<double>(), fit.model.w(0), 1e-12);
    EXPECT_DOUBLE_EQ(j["alpha"].get<double>(), 0.3);
    EXPECT_DOUBLE_EQ(j["gamma"].get<double>(), 0.8);
    EXPECT_DOUBLE_EQ(j["lambda"].get<double>(), 0.1);

    // standardized fit mapped back to raw features predicts like the standardized model
    ASSERT_EQ(run("train-usq --train " + path("tr.csv") + " --alpha 0.3 --standardize --model-out " + path("z.json")), 0);
    auto mz = model_from_json(json::parse(read_file(path("z.json"))));
    auto d = ingest_csv(path("tr.csv"));
    auto z = Standardizer::fit(d.X);
    auto fz = fit_usq_closed_form(z.apply(d), CostParams(0.3, 1.0, 0.1));
    Vector raw = d.X * mz.model.w + Vector::Constant(d.X.rows(), mz.model.b);
    Vector ref = z.apply(d.X) * fz.model.w + Vector::Constant(d.X.rows(), fz.model.b);
    EXPECT_LT((raw - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_F(Cli, EstimateEtaReport) {
    make_data();
    ASSERT_EQ(run("estimate-eta --method lkfun:logistic --train " + path("tr.csv") + " --test " + path("te.csv") +
                  " --report-out " + path("q.csv")), 0);
    auto l = lines(read_file(path("q.csv")));
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "method,mse,rmse,mad,md,kl,acc,brier,diff_max,diff_min,clamp_rate");
    EXPECT_EQ(split_csv_line(l[1]).size(), 11u);
    EXPECT_EQ(split_csv_line(l[1])[0], "lkfun:logistic");
    EXPECT_LT(std::stod(split_csv_line(l[1])[1]), 0.01);
    EXPECT_NE(run("estimate-eta --method svm --train " + path("tr.csv") + " --test " + path("te.csv") +
                  " --report-out " + path("q.csv")), 0);
}

TEST_F(Cli, ResamplePredictAndMetrics) {
    make_data();
    ASSERT_EQ(run("resample-predict --train " + path("tr.csv") + " --test " + path("te.csv") +
                  " --alpha 0.3 --pm wc --eta-method knn --gamma-grid 0.6,0.9 --report-out " + path("r.csv") +
                  " --pred-out " + path("p.csv")), 0);
    auto r = lines(read_file(path("r.csv")));
    ASSERT_EQ(r.size(), 2u);
    auto cells = split_csv_line(r[1]);
    const double g = std::stod(cells[1]);
    EXPECT_TRUE(g == 0.6 || g == 0.9);

    std::string out;
    ASSERT_EQ(run("metrics --pred " + path("p.csv") + " --truth " + path("te.csv") + " --alpha 0.3 --gamma " + cells[1], &out), 0);
    auto m = lines(out);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m[0], "acc,am,f,wc,tp,tn,fp,fn");
    // metrics on the written predictions agree with the resampler's own report
    EXPECT_EQ(split_csv_line(m[1])[0], cells[4]);
    EXPECT_EQ(split_csv_line(m[1])[3], cells[7]);
}

TEST_F(Cli, MetricsHandCase) {
    write_file_atomic(path("p.csv"), "1\n1\n-1\n-1\n");
    write_file_atomic(path("t.csv"), "label\n1\n0\n1\n0\n");
    std::string out;
    ASSERT_EQ(run("metrics --pred " + path("p.csv") + " --truth " + path("t.csv") + " --alpha 0.25 --out " + path("o.csv")), 0);
    EXPECT_EQ(read_file(path("o.csv")), "acc,am,f,wc,tp,tn,fp,fn\n0.5,0.5,0.5,1,1,1,1,1\n");
    write_file_atomic(path("bad.csv"), "1\n2\n");
    EXPECT_EQ(run("metrics --pred " + path("bad.csv") + " --truth " + path("t.csv"), &out), 2);
    EXPECT_NE(out.find("line 2"), std::string::npos);
}

TEST_F(Cli, VerifyCounterexamplesTable) {
    std::string out;
    EXPECT_EQ(run("verify-counterexamples", &out), 0);
    EXPECT_NE(out.find("example1 clean risk of clean optimum"), std::string::npos);
    EXPECT_NE(out.find("four-cost noisy threshold"), std::string::npos);
    const auto rows = lines(out);
    EXPECT_EQ(rows.size(), counterexample_checks().size() + 1);
    bool all = true;
    for (const auto& c : counterexample_checks()) all = all && c.pass();
    EXPECT_EQ(run("verify-counterexamples --strict"), all ? 0 : 1);
}

TEST_F(Cli, RunExperimentWritesReports) {
    write_file_atomic(path("cfg.json"), R"({"preset":"syn2d","m":300,"alpha":0.3,"rho_list":[0.0,0.2],"n_trials":2,
        "schemes":["usq_erm","resample:lkfun:logistic","bayes_oracle"],"seed":4})");
    ASSERT_EQ(run("run-experiment --config " + path("cfg.json") + " --out-dir " + path("out")), 0);
    for (const char* f : {"trials.csv", "summary.json", "summary.md"}) EXPECT_TRUE(fs::exists(path("out/") + f)) << f;
    auto trials = lines(read_file(path("out/trials.csv")));
    EXPECT_EQ(trials.size(), 1u + 2 * 2 * 3);
    auto s = json::parse(read_file(path("out/summary.json")));
    EXPECT_EQ(s["aggregates"].size(), 6u);
    EXPECT_EQ(s["config"]["alpha"].get<double>(), 0.3);

    // rerun gives identical files
    ASSERT_EQ(run("run-experiment --config " + path("cfg.json") + " --out-dir " + path("out2")), 0);
    for (const char* f : {"trials.csv", "summary.json", "summary.md"})
        EXPECT_EQ(read_file(path("out/") + f), read_file(path("out2/") + f)) << f;
    EXPECT_NE(run("run-experiment --config " + path("missing.json") + " --out-dir " + path("out3")), 0);
}
