#pragma once

#include "data.hpp"
#include "eta.hpp"
#include "metrics.hpp"

namespace csln {

// Grid {alpha/(1-alpha) + 0.05 i, i = 1..12}.
inline std::vector<double> default_gamma_grid(double alpha) {
    std::vector<double> g;
    const double base = alpha / (1.0 - alpha);
    for (int i = 1; i <= 12; ++i) g.push_back(base + 0.05 * i);
    return g;
}

// Documented only; the default grid starts above it.
inline double gamma0(double alpha) { return alpha / (1.0 - alpha) + 0.001; }

inline double undersampling_ratio(double alpha, double gamma) { return alpha / (gamma * (1.0 - alpha)); }

inline std::size_t kept_negatives(std::size_t m_neg, double alpha, double gamma) {
    const double x = alpha * static_cast<double>(m_neg) / (gamma * (1.0 - alpha));
    return static_cast<std::size_t>(std::floor(x + 1e-9));
}

// Keeps every positive and a uniform subsample of floor(alpha m_- / (gamma (1-alpha))) negatives.
inline Dataset rebalance(const Dataset& d, double alpha, double gamma, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0)) throw InvalidArgument("invalid alpha or gamma");
    if (!(gamma > alpha / (1.0 - alpha))) throw InvalidArgument("gamma must exceed alpha/(1-alpha)");
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < d.size(); ++i) (d.y[i] == 1 ? pos : neg).push_back(i);
    if (neg.empty()) throw InvalidArgument("rebalance needs negatives");
    const std::size_t keep = std::min(kept_negatives(neg.size(), alpha, gamma), neg.size());
    if (keep == 0) throw DegenerateError("rebalancing keeps no negatives");
    Rng rng(derive_seed(seed, 0x7eba));
    std::shuffle(neg.begin(), neg.end(), rng.engine());
    neg.resize(keep);
    std::sort(neg.begin(), neg.end());
    std::vector<std::size_t> idx = pos;
    idx.insert(idx.end(), neg.begin(), neg.end());
    std::sort(idx.begin(), idx.end());
    return d.subset(idx);
}

struct ResampleConfig {
    double alpha = 0.5;
    std::vector<double> gamma_grid;  // empty: default grid
    EtaMethod eta_method = parse_eta_method("lspc");
    Measure pm = Measure::Acc;
    std::size_t cv_folds = 5;
    std::uint64_t seed = 0;
    bool freeze_inner = true;  // select estimator hyperparameters once per training set
};

struct GammaScore {
    double gamma = 0.0, score = 0.0;
    bool failed = false;
    std::string error;
};

struct ResampleFit {
    double gamma_star = 1.0;
    EtaEstimator estimator;
    std::size_t balanced_size = 0;
    bool flipped = false;  // minority was relabelled +1
    double alpha_used = 0.5;
    std::vector<GammaScore> grid;
};

inline Dataset flip_labels(const Dataset& d) {
    Dataset out = d;
    for (int& v : out.y) v = -v;
    if (out.eta)
        for (double& e : *out.eta) e = 1.0 - e;
    return out;
}

inline ResampleFit fit_resampler(const Dataset& train_in, const ResampleConfig& cfg) {
    if (train_in.count_pos() == 0 || train_in.count_neg() == 0) throw InvalidArgument("resampler needs both classes");
    ResampleFit fit;
    fit.flipped = train_in.count_pos() > train_in.count_neg();
    const Dataset train = fit.flipped ? flip_labels(train_in) : train_in;
    const double alpha = fit.flipped ? 1.0 - cfg.alpha : cfg.alpha;
    fit.alpha_used = alpha;
    auto grid = cfg.gamma_grid.empty() ? default_gamma_grid(alpha) : cfg.gamma_grid;
    std::sort(grid.begin(), grid.end());
    EtaMethod method = cfg.freeze_inner ? freeze_hyperparameters(train, cfg.eta_method, derive_seed(cfg.seed, 0xf2)) : cfg.eta_method;

    const double worst = cfg.pm == Measure::WC ? std::numeric_limits<double>::infinity()
                                               : -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        GammaScore gs{grid[g], worst, false, {}};
        try {
            Dataset bal = rebalance(train, alpha, grid[g], derive_seed(cfg.seed, 0x9a, g));
            auto folds = kfold_indices(bal.y, cfg.cv_folds, derive_seed(cfg.seed, 0xf0, g));
            std::vector<int> pred, truth;
            for (std::size_t f = 0; f < folds.size(); ++f) {
                Dataset tr = bal.subset(complement(bal.size(), folds[f])), te = bal.subset(folds[f]);
                auto est = fit_eta(tr, method, derive_seed(cfg.seed, g, f));
                auto p = est.predict(te.X);
                for (std::size_t i = 0; i < te.size(); ++i) {
                    pred.push_back(sign_label(p.eta[i] - 0.5));
                    truth.push_back(te.y[i]);
                }
            }
            gs.score = scores(confusion(pred, truth), alpha, grid[g]).get(cfg.pm);
        } catch (const std::exception& e) {
            gs.failed = true;
            gs.error = e.what();
        }
        fit.grid.push_back(gs);
        // strict improvement only, so ties stay with the smaller gamma
        if (better(cfg.pm, gs.score, fit.grid[best].score)) best = g;
    }
    fit.gamma_star = grid[best];
    Dataset bal = rebalance(train, alpha, fit.gamma_star, derive_seed(cfg.seed, 0x9a, best));
    fit.balanced_size = bal.size();
    fit.estimator = fit_eta(bal, method, derive_seed(cfg.seed, 0xfe));
    return fit;
}

inline int predict_resampled(const ResampleFit& fit, const Vector& x) {
    int v = sign_label(fit.estimator.predict_one(x) - 0.5);
    return fit.flipped ? -v : v;
}

inline std::vector<int> predict_resampled_all(const ResampleFit& fit, const Matrix& X) {
    auto p = fit.estimator.predict(X);
    std::vector<int> out(p.eta.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        int v = sign_label(p.eta[i] - 0.5);
        out[i] = fit.flipped ? -v : v;
    }
    return out;
}

// Threshold-0.5 decision on a given eta value.
inline int predict_from_eta(double eta_tilde) { return sign_label(eta_tilde - 0.5); }

struct RebalancedEta {
    double eta_b = 0.0, p_star = 0.0;
};

inline RebalancedEta rebalanced_eta_identity(double eta_tilde, double alpha, double gamma) {
    const double r = undersampling_ratio(alpha, gamma);
    RebalancedEta out;
    const double den = eta_tilde + r * (1.0 - eta_tilde);
    out.eta_b = den > 0.0 ? eta_tilde / den : 0.0;
    out.p_star = alpha / (gamma + (1.0 - gamma) * alpha);
    return out;
}

}  // namespace csln
