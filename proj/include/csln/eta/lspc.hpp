#pragma once

#include "../data.hpp"
#include "estimator.hpp"
#include "kernel.hpp"

namespace csln {

struct LspcOptions {
    std::vector<double> lambda_grid{0.001, 0.01, 0.1, 1.0};
    std::vector<double> sigma_candidates;  // empty: centile widths of the training inputs
    std::size_t cv_folds = 3;
    std::size_t b_max = 100;  // kernel centers per class
    std::uint64_t seed = 0;
};

struct LspcModel {
    // index 0 is the positive class, index 1 the negative class
    std::array<KernelBasis, 2> basis;
    std::array<Vector, 2> coef;
    std::array<bool, 2> present{false, false};
    double prior = 0.5;
    double sigma = 1.0, lambda = 1.0;

    Vector eta(const Matrix& X) const {
        const auto q = X.rows();
        std::array<Vector, 2> num;
        for (int c = 0; c < 2; ++c) {
            if (present[static_cast<std::size_t>(c)])
                num[static_cast<std::size_t>(c)] =
                    (basis[static_cast<std::size_t>(c)].features(X) * coef[static_cast<std::size_t>(c)]).cwiseMax(0.0);
            else
                num[static_cast<std::size_t>(c)] = Vector::Zero(q);
        }
        Vector out(q);
        for (Eigen::Index i = 0; i < q; ++i) {
            double s = num[0](i) + num[1](i);
            out(i) = s > 0.0 ? num[0](i) / s : prior;
        }
        return out;
    }
};

// Per-class least-squares fit of 1[y=c] on class-c kernel features over all samples.
inline LspcModel fit_lspc_fixed(const Dataset& d, double sigma, double lambda, std::size_t b_max, std::uint64_t seed) {
    if (!(sigma > 0.0)) throw InvalidArgument("LSPC sigma must be positive");
    LspcModel mdl;
    mdl.sigma = sigma;
    mdl.lambda = lambda;
    mdl.prior = positive_fraction(d.y);
    Rng rng(derive_seed(seed, 0x15bc));
    const auto m = static_cast<double>(d.size());
    for (int c = 0; c < 2; ++c) {
        const int label = c == 0 ? 1 : -1;
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.y[i] == label) idx.push_back(i);
        auto cu = static_cast<std::size_t>(c);
        if (idx.empty()) continue;
        mdl.present[cu] = true;
        Matrix Xc = d.subset(idx).X;
        mdl.basis[cu].centers = pick_centers(Xc, b_max, rng);
        mdl.basis[cu].sigma = sigma;
        Matrix Phi = mdl.basis[cu].features(d.X);
        Matrix H = Phi.transpose() * Phi / m;
        Vector h = Vector::Zero(Phi.cols());
        for (auto i : idx) h += Phi.row(static_cast<Eigen::Index>(i)).transpose();
        h /= m;
        H.diagonal().array() += lambda;
        Eigen::LLT<Matrix> llt(H);
        if (llt.info() != Eigen::Success) throw IllConditioned("LSPC system not positive definite; increase lambda", 0.0);
        mdl.coef[cu] = llt.solve(h);
    }
    return mdl;
}

inline EtaEstimator lspc_estimator(const LspcModel& mdl) {
    return EtaEstimator("lspc", [mdl](const Matrix& X) { return mdl.eta(X); });
}

struct LspcSelection {
    double sigma = 1.0, lambda = 1.0, cv_error = 0.0;
};

// Held-out squared error of eta_hat against 1[y=+1], averaged over folds.
inline LspcSelection select_lspc(const Dataset& d, const LspcOptions& opt) {
    auto sigmas = opt.sigma_candidates.empty() ? centile_sigmas(d, default_centiles(), opt.seed) : opt.sigma_candidates;
    sigmas.erase(std::remove_if(sigmas.begin(), sigmas.end(), [](double s) { return !(s > 0.0); }), sigmas.end());
    if (sigmas.empty()) throw DegenerateError("no positive kernel width candidates");
    LspcSelection best;
    best.cv_error = std::numeric_limits<double>::infinity();
    if (sigmas.size() == 1 && opt.lambda_grid.size() == 1) return {sigmas[0], opt.lambda_grid[0], 0.0};
    auto folds = kfold_indices(d.y, opt.cv_folds, derive_seed(opt.seed, 0xcf));
    std::vector<Dataset> tr, te;
    for (auto& f : folds) {
        te.push_back(d.subset(f));
        tr.push_back(d.subset(complement(d.size(), f)));
    }
    for (double s : sigmas) {
        for (double l : opt.lambda_grid) {
            double err = 0.0;
            std::size_t cnt = 0;
            for (std::size_t k = 0; k < folds.size(); ++k) {
                auto mdl = fit_lspc_fixed(tr[k], s, l, opt.b_max, derive_seed(opt.seed, k));
                Vector e = mdl.eta(te[k].X);
                for (std::size_t i = 0; i < te[k].size(); ++i) {
                    double t = te[k].y[i] == 1 ? 1.0 : 0.0;
                    err += (e(static_cast<Eigen::Index>(i)) - t) * (e(static_cast<Eigen::Index>(i)) - t);
                }
                cnt += te[k].size();
            }
            err /= static_cast<double>(cnt);
            if (err < best.cv_error) best = {s, l, err};
        }
    }
    return best;
}

inline EtaEstimator fit_lspc(const Dataset& d, const LspcOptions& opt = {}) {
    if (d.empty()) throw InvalidArgument("LSPC on empty dataset");
    LspcSelection sel;
    if (d.count_pos() == 0 || d.count_neg() == 0) {
        auto sig = opt.sigma_candidates.empty() ? centile_sigmas(d, default_centiles(), opt.seed) : opt.sigma_candidates;
        sel = {sig[sig.size() / 2] > 0 ? sig[sig.size() / 2] : 1.0, opt.lambda_grid.front(), 0.0};
    } else {
        sel = select_lspc(d, opt);
    }
    auto est = lspc_estimator(fit_lspc_fixed(d, sel.sigma, sel.lambda, opt.b_max, opt.seed));
    est.record_train_summary(d.X);
    return est;
}

}  // namespace csln
