#include <csln/data.hpp>
#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace csln;

namespace {

Dataset labels_only(const std::vector<int>& y) {
    Matrix X = Matrix::Zero(static_cast<Eigen::Index>(y.size()), 1);
    for (Eigen::Index i = 0; i < X.rows(); ++i) X(i, 0) = static_cast<double>(i);
    return Dataset(X, y);
}

Dataset bernoulli_labels(std::size_t m, double p, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> y(m);
    for (auto& v : y) v = rng.bernoulli(p) ? 1 : -1;
    return labels_only(y);
}

double pos_rate(const Dataset& d) { return static_cast<double>(d.count_pos()) / static_cast<double>(d.size()); }

}  // namespace

TEST(CorruptEta, Examples) {
    EXPECT_NEAR(corrupt_eta(0.2, 0.3), 0.38, 1e-12);
    EXPECT_DOUBLE_EQ(corrupt_eta(0.5, 0.0), 0.5);
    EXPECT_DOUBLE_EQ(corrupt_eta(0.5, 0.27), 0.5);
    EXPECT_DOUBLE_EQ(corrupt_eta(0.5, 0.49), 0.5);
    EXPECT_NEAR(corrupt_eta(1.0, 0.1), 0.9, 1e-12);
}

TEST(CorruptEta, AffineOrderPreservingSignPreserving) {
    for (double rho = 0.0; rho < 0.5; rho += 0.01) {
        double prev = -1.0;
        for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += 0.01) {
            double v = corrupt_eta(eta, rho);
            EXPECT_GE(v, rho - 1e-12);
            EXPECT_LE(v, 1.0 - rho + 1e-12);
            EXPECT_GE(v, prev);
            prev = v;
            if (std::abs(eta - 0.5) > 1e-9) EXPECT_EQ(sign_label(v - 0.5), sign_label(eta - 0.5));
        }
        // affine: midpoint maps to midpoint
        EXPECT_NEAR(corrupt_eta(0.3, rho) + corrupt_eta(0.7, rho), 2.0 * corrupt_eta(0.5, rho), 1e-12);
    }
}

TEST(InjectSln, ZeroNoiseIsIdentity) {
    auto d = bernoulli_labels(500, 0.4, 1);
    auto n = inject_sln(d, NoiseSpec(0.0), 7);
    EXPECT_EQ(n.y, d.y);
}

TEST(InjectSln, CorruptedPositiveRateMatchesEtaTilde) {
    const std::size_t m = 200000;
    auto d = bernoulli_labels(m, 0.2, 11);
    auto n = inject_sln(d, NoiseSpec(0.3), 12);
    const double target = (1.0 - 2.0 * 0.3) * 0.2 + 0.3;
    const double se = std::sqrt(target * (1.0 - target) / m);
    EXPECT_NEAR(pos_rate(n), target, 4.0 * se);
}

TEST(InjectSln, CorruptedMarginalBalanced) {
    const std::size_t m = 100000;
    std::vector<int> y(m);
    for (std::size_t i = 0; i < m; ++i) y[i] = i % 2 ? 1 : -1;
    auto d = labels_only(y);
    const double rho = 0.2;
    auto n = inject_sln(d, NoiseSpec(rho), 5);
    // net change in positives is (flips among negatives) - (flips among positives)
    const double se = std::sqrt(rho * (1.0 - rho) / m);
    EXPECT_NEAR(pos_rate(n), (1.0 - 2.0 * rho) * 0.5 + rho, 3.0 * se);
}

TEST(InjectSln, FlipCountIsBinomial) {
    for (double rho : {0.05, 0.2, 0.45}) {
        const std::size_t m = 20000;
        auto d = bernoulli_labels(m, 0.3, 3);
        auto n = inject_sln(d, NoiseSpec(rho), 99);
        std::size_t flips = 0;
        for (std::size_t i = 0; i < m; ++i) flips += d.y[i] != n.y[i];
        EXPECT_EQ(flips, count_flips(d, n));
        EXPECT_NEAR(static_cast<double>(flips) / m, rho, 4.0 * std::sqrt(rho * (1.0 - rho) / m));
    }
}

TEST(InjectSln, DeterministicAndLeavesFeaturesAndEta) {
    auto d = bernoulli_labels(300, 0.5, 2);
    d.eta = std::vector<double>(300, 0.5);
    auto a = inject_sln(d, NoiseSpec(0.25), 42), b = inject_sln(d, NoiseSpec(0.25), 42);
    auto c = inject_sln(d, NoiseSpec(0.25), 43);
    EXPECT_EQ(a.y, b.y);
    EXPECT_NE(a.y, c.y);
    EXPECT_TRUE(a.X == d.X);
    EXPECT_EQ(*a.eta, *d.eta);
}

TEST(NoiseSpecTest, RejectsOutOfRange) {
    EXPECT_THROW(NoiseSpec(0.5), InvalidArgument);
    EXPECT_THROW(NoiseSpec(-0.01), InvalidArgument);
    EXPECT_NO_THROW(NoiseSpec(0.499));
}

TEST(CostParamsTest, Validates) {
    EXPECT_THROW(CostParams(0.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(CostParams(1.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(CostParams(0.5, 0.0, 1.0), InvalidArgument);
    EXPECT_THROW(CostParams(0.5, 1.0, 0.0), InvalidArgument);
    EXPECT_NO_THROW(CostParams(0.3, 2.0, 0.01));
}

TEST(DatasetTest, Invariants) {
    Matrix X = Matrix::Zero(3, 2);
    EXPECT_THROW(Dataset(X, {1, -1}), InvalidArgument);
    EXPECT_THROW(Dataset(X, {1, 0, -1}), InvalidArgument);
    EXPECT_THROW(Dataset(X, {1, -1, 1}, std::vector<double>{0.1, 1.2, 0.3}), InvalidArgument);
    Dataset d(X, {1, -1, 1}, std::vector<double>{0.1, 0.2, 0.3});
    EXPECT_EQ(d.count_pos(), 2u);
    EXPECT_EQ(d.count_neg(), 1u);
}

TEST(Split, Sizes) {
    auto d = bernoulli_labels(10, 0.5, 1);
    SplitPlan plan;
    auto [tr, te] = split(d, plan, 0);
    EXPECT_EQ(tr.size(), 8u);
    EXPECT_EQ(te.size(), 2u);
}

TEST(Split, DeterministicAndTrialDependent) {
    auto d = bernoulli_labels(200, 0.5, 1);
    SplitPlan plan;
    plan.seed = 17;
    auto a = split_indices(d, plan, 0), b = split_indices(d, plan, 0), c = split_indices(d, plan, 1);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    EXPECT_NE(std::set<std::size_t>(a.test.begin(), a.test.end()), std::set<std::size_t>(c.test.begin(), c.test.end()));
}

TEST(Split, ExactPartition) {
    for (bool strat : {false, true}) {
        auto d = bernoulli_labels(137, 0.3, 4);
        SplitPlan plan;
        plan.stratify = strat;
        plan.train_fraction = 0.7;
        for (std::size_t t = 0; t < 5; ++t) {
            auto s = split_indices(d, plan, t);
            std::vector<std::size_t> all = s.train;
            all.insert(all.end(), s.test.begin(), s.test.end());
            std::sort(all.begin(), all.end());
            ASSERT_EQ(all.size(), d.size());
            for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
            EXPECT_EQ(s.train.size(), static_cast<std::size_t>(std::llround(0.7 * 137)));
        }
    }
}

TEST(Split, DegenerateSideIsError) {
    auto d = bernoulli_labels(1, 0.5, 1);
    EXPECT_THROW(split(d, SplitPlan{}, 0), DegenerateError);
    SplitPlan bad;
    bad.train_fraction = 1.0;
    EXPECT_THROW(split(bernoulli_labels(10, 0.5, 1), bad, 0), InvalidArgument);
}

TEST(Split, StratifiedKeepsClassRatio) {
    auto d = bernoulli_labels(1000, 0.2, 8);
    SplitPlan plan;
    plan.stratify = true;
    auto [tr, te] = split(d, plan, 0);
    EXPECT_NEAR(pos_rate(tr), pos_rate(d), 0.01);
}

TEST(KFold, PartitionsAndStratifies) {
    auto d = bernoulli_labels(103, 0.25, 6);
    auto folds = kfold_indices(d.y, 5, 1);
    std::vector<int> seen(d.size(), 0);
    for (const auto& f : folds) {
        std::size_t p = 0;
        for (auto i : f) {
            ++seen[i];
            p += d.y[i] == 1;
        }
        EXPECT_LE(std::abs(static_cast<double>(p) - d.count_pos() / 5.0), 1.0);
        EXPECT_EQ(complement(d.size(), f).size() + f.size(), d.size());
    }
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(StandardizerTest, ZeroMeanUnitVariance) {
    Rng rng(3);
    Matrix X(400, 3);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) = 5.0 * j + (j + 1) * rng.normal();
    std::vector<int> y(400, 1);
    auto st = Standardizer::fit(X);
    auto z = st.apply(Dataset(X, y));
    for (Eigen::Index j = 0; j < 3; ++j) {
        EXPECT_NEAR(z.X.col(j).mean(), 0.0, 1e-12);
        double var = (z.X.col(j).array() - z.X.col(j).mean()).square().mean();  // population variance
        EXPECT_NEAR(var, 1.0, 1e-9);
    }
}

TEST(Seeds, DeriveSeedIsDeterministicAndDistinct) {
    EXPECT_EQ(derive_seed(5, 1, 2), derive_seed(5, 1, 2));
    EXPECT_NE(derive_seed(5, 1, 2), derive_seed(5, 2, 1));
    EXPECT_NE(derive_seed(5, 1), derive_seed(6, 1));
    Rng a(9), b(9);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Csv, ThreeRowHandFile) {
    std::istringstream in("x1,x2,label\n1.5,2,1\n-3,0.25,-1\n0,1e-3,1\n");
    CsvSummary s;
    auto d = read_dataset_csv(in, "hand", &s);
    ASSERT_EQ(d.size(), 3u);
    ASSERT_EQ(d.dim(), 2u);
    EXPECT_DOUBLE_EQ(d.X(0, 0), 1.5);
    EXPECT_DOUBLE_EQ(d.X(1, 1), 0.25);
    EXPECT_DOUBLE_EQ(d.X(2, 1), 1e-3);
    EXPECT_EQ(d.y, (std::vector<int>{1, -1, 1}));
    EXPECT_FALSE(d.has_eta());
    EXPECT_EQ(s.rows, 3u);
    EXPECT_EQ(s.pos, 2u);
    EXPECT_EQ(s.neg, 1u);
}

TEST(Csv, ZeroOneLabelsMapped) {
    std::istringstream in("x1,label\n1,0\n2,1\n3,0\n");
    auto d = read_dataset_csv(in);
    EXPECT_EQ(d.y, (std::vector<int>{-1, 1, -1}));
}

TEST(Csv, EtaColumnPopulated) {
    std::istringstream in("x1,label,eta\n1,1,0.9\n2,-1,0.1\n");
    auto d = read_dataset_csv(in);
    ASSERT_TRUE(d.has_eta());
    EXPECT_DOUBLE_EQ((*d.eta)[0], 0.9);
    EXPECT_DOUBLE_EQ((*d.eta)[1], 0.1);
}

TEST(Csv, ErrorsCarryLineNumbers) {
    std::istringstream bad_label("x1,label\n1,1\n2,3\n");
    try {
        read_dataset_csv(bad_label);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3u);
    }
    std::istringstream bad_num("x1,label\n1,1\nabc,1\n");
    EXPECT_THROW(read_dataset_csv(bad_num), ParseError);
    std::istringstream ragged("x1,x2,label\n1,2,1\n1,1\n");
    try {
        read_dataset_csv(ragged);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, 3u);
    }
    std::istringstream no_label("x1,x2\n1,2\n");
    EXPECT_THROW(read_dataset_csv(no_label), ParseError);
}

TEST(Csv, RoundTrip) {
    Rng rng(1);
    Matrix X(20, 3);
    std::vector<int> y(20);
    std::vector<double> eta(20);
    for (Eigen::Index i = 0; i < 20; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) X(i, j) = rng.normal();
        y[static_cast<std::size_t>(i)] = rng.bernoulli(0.5) ? 1 : -1;
        eta[static_cast<std::size_t>(i)] = rng.uniform();
    }
    Dataset d(X, y, eta);
    std::ostringstream out;
    write_dataset_csv(out, d);
    std::istringstream in(out.str());
    auto r = read_dataset_csv(in);
    EXPECT_TRUE(r.X == d.X);
    EXPECT_EQ(r.y, d.y);
    EXPECT_EQ(*r.eta, *d.eta);
}
