#pragma once

#include "../data.hpp"
#include "estimator.hpp"
#include "kernel.hpp"

#include <numeric>

namespace csln {

struct KnnModel {
    Matrix X;
    std::vector<int> y;
    std::size_t k = 1;

    // Fraction of +1 labels among the k nearest training points (stable index order on ties).
    Vector eta(const Matrix& Q) const {
        Matrix D = sq_dists(Q, X);
        Vector out(Q.rows());
        std::vector<std::size_t> idx(static_cast<std::size_t>(X.rows()));
        for (Eigen::Index i = 0; i < Q.rows(); ++i) {
            std::iota(idx.begin(), idx.end(), 0);
            std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                              [&](std::size_t a, std::size_t b) {
                                  double da = D(i, static_cast<Eigen::Index>(a)), db = D(i, static_cast<Eigen::Index>(b));
                                  return da < db || (da == db && a < b);
                              });
            std::size_t pos = 0;
            for (std::size_t j = 0; j < k; ++j) pos += y[idx[j]] == 1;
            out(i) = static_cast<double>(pos) / static_cast<double>(k);
        }
        return out;
    }
};

inline EtaEstimator knn_estimator(const KnnModel& mdl) {
    return EtaEstimator("knn", [mdl](const Matrix& Q) { return mdl.eta(Q); });
}

inline KnnModel fit_knn_model(const Dataset& d, std::size_t k) {
    if (k < 1 || k > d.size()) throw InvalidArgument("k must lie in [1, m]");
    return KnnModel{d.X, d.y, k};
}

inline std::vector<std::size_t> default_k_grid(std::size_t m) {
    std::vector<std::size_t> ks;
    const auto top = std::max<std::size_t>(1, static_cast<std::size_t>(2.0 * std::sqrt(static_cast<double>(m))));
    for (std::size_t k = 1; k <= top; k += 2) ks.push_back(k);
    return ks;
}

// k by held-out squared error against {0,1} targets.
inline std::size_t select_knn_k(const Dataset& d, std::size_t folds_n, std::uint64_t seed,
                                std::vector<std::size_t> grid = {}) {
    auto folds = kfold_indices(d.y, folds_n, derive_seed(seed, 0x4a));
    const std::size_t min_train = d.size() - (d.size() + folds_n - 1) / folds_n;
    if (grid.empty()) grid = default_k_grid(min_train);
    std::vector<double> err(grid.size(), 0.0);
    for (auto& f : folds) {
        Dataset tr = d.subset(complement(d.size(), f)), te = d.subset(f);
        // one sort per query, then every k from the grid
        Matrix D = sq_dists(te.X, tr.X);
        std::vector<std::size_t> idx(tr.size());
        for (std::size_t i = 0; i < te.size(); ++i) {
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
                return D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) <
                       D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b));
            });
            const double t = te.y[i] == 1 ? 1.0 : 0.0;
            std::size_t pos = 0, used = 0;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const std::size_t k = std::min(grid[g], tr.size());
                while (used < k) pos += tr.y[idx[used++]] == 1;
                const double e = static_cast<double>(pos) / static_cast<double>(k) - t;
                err[g] += e * e;
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g)
        if (err[g] < err[best]) best = g;
    return std::min(grid[best], d.size());
}

// k = 0 selects k by 5-fold CV.
inline EtaEstimator fit_knn(const Dataset& d, std::size_t k = 0, std::uint64_t seed = 0) {
    if (d.empty()) throw InvalidArgument("k-NN on empty dataset");
    if (k == 0) k = d.size() < 10 ? std::min<std::size_t>(3, d.size()) : select_knn_k(d, 5, seed);
    auto est = knn_estimator(fit_knn_model(d, k));
    est.record_train_summary(d.X);
    return est;
}

}  // namespace csln
