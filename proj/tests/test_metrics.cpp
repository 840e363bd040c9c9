#include <csln/metrics.hpp>
#include <csln/core.hpp>
#include <gtest/gtest.h>

using namespace csln;

TEST(Confusion, AllCorrectAndAllWrong) {
    std::vector<int> t{1, -1, 1, 1, -1};
    auto c = confusion(t, t);
    EXPECT_EQ(c.fp, 0u);
    EXPECT_EQ(c.fn, 0u);
    std::vector<int> n;
    for (int v : t) n.push_back(-v);
    auto w = confusion(n, t);
    EXPECT_EQ(w.tp, 0u);
    EXPECT_EQ(w.tn, 0u);
    EXPECT_EQ(w.total(), t.size());
}

TEST(Confusion, HandCase) {
    std::vector<int> pred{1, 1, -1, -1, 1, -1}, truth{1, -1, 1, -1, 1, 1};
    // i=0 tp, 1 fp, 2 fn, 3 tn, 4 tp, 5 fn
    auto c = confusion(pred, truth);
    EXPECT_EQ(c.tp, 2u);
    EXPECT_EQ(c.fp, 1u);
    EXPECT_EQ(c.fn, 2u);
    EXPECT_EQ(c.tn, 1u);
    auto s = scores(c, 0.4, 2.0);
    EXPECT_DOUBLE_EQ(s.acc, 0.5);
    EXPECT_DOUBLE_EQ(s.am, 0.5 * (0.5 + 0.5));
    EXPECT_DOUBLE_EQ(s.f, 4.0 / 7.0);
    EXPECT_DOUBLE_EQ(s.wc, 0.6 * 2 + 0.2 * 1);
    EXPECT_THROW(confusion({1}, {1, 1}), InvalidArgument);
}

TEST(Scores, FormulaExamples) {
    Confusion c;
    c.tp = 2;
    c.fp = 1;
    c.fn = 1;
    EXPECT_NEAR(scores(c, 0.5, 1).f, 4.0 / 6.0, 1e-15);
    Confusion w;
    w.fn = 10;
    w.fp = 10;
    w.tp = 5;
    EXPECT_NEAR(scores(w, 0.3, 1).wc, 10.0, 1e-12);
    Confusion a;
    a.tp = 7;
    a.fp = 3;  // TPR 1, TNR 0
    EXPECT_DOUBLE_EQ(scores(a, 0.5, 1).am, 0.5);
}

TEST(Scores, DegenerateFlags) {
    Confusion c;
    c.tn = 5;
    auto s = scores(c, 0.3, 1);
    EXPECT_TRUE(s.f_degenerate);
    EXPECT_DOUBLE_EQ(s.f, 1.0);
    EXPECT_TRUE(s.rate_undefined);
    Confusion ok;
    ok.tp = ok.tn = 1;
    EXPECT_FALSE(scores(ok, 0.3, 1).rate_undefined);
    EXPECT_FALSE(scores(ok, 0.3, 1).f_degenerate);
}

TEST(Scores, BoundsAndNegationInvariance) {
    Rng rng(1);
    bool f_changed = false;
    for (int t = 0; t < 500; ++t) {
        std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 30);
        std::vector<int> p(m), y(m), pn(m), yn(m);
        for (std::size_t i = 0; i < m; ++i) {
            p[i] = rng.bernoulli(0.5) ? 1 : -1;
            y[i] = rng.bernoulli(0.4) ? 1 : -1;
            pn[i] = -p[i];
            yn[i] = -y[i];
        }
        const double alpha = 0.05 + 0.9 * rng.uniform(), gamma = 0.2 + 3 * rng.uniform();
        auto c = confusion(p, y);
        auto s = scores(c, alpha, gamma), sn = scores(confusion(pn, yn), alpha, gamma);
        for (double v : {s.acc, s.am, s.f}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        EXPECT_GE(s.wc, 0.0);
        EXPECT_EQ(s.wc == 0.0, c.fp == 0 && c.fn == 0);
        EXPECT_DOUBLE_EQ(s.acc, sn.acc);
        if (!s.rate_undefined) {
            EXPECT_NEAR(s.am, sn.am, 1e-15);
        }
        f_changed |= std::abs(s.f - sn.f) > 1e-9;
    }
    EXPECT_TRUE(f_changed);  // F depends on which class is positive
}

TEST(Measures, ParseAndOrder) {
    for (auto m : {Measure::Acc, Measure::AM, Measure::F, Measure::WC}) EXPECT_EQ(parse_measure(measure_name(m)), m);
    EXPECT_THROW(parse_measure("auc"), InvalidArgument);
    EXPECT_TRUE(better(Measure::Acc, 0.9, 0.8));
    EXPECT_TRUE(better(Measure::WC, 1.0, 2.0));
    EXPECT_FALSE(better(Measure::F, 0.5, 0.5));
}
