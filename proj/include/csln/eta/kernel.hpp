#pragma once

#include "../core.hpp"

namespace csln {

// Squared Euclidean distances between rows of A and rows of B.
inline Matrix sq_dists(const Matrix& A, const Matrix& B) {
    Vector a2 = A.rowwise().squaredNorm(), b2 = B.rowwise().squaredNorm();
    Matrix D = -2.0 * A * B.transpose();
    D.colwise() += a2;
    D.rowwise() += b2.transpose();
    return D.cwiseMax(0.0);
}

// K(x, c) = exp(-||x - c||^2 / (2 sigma^2))
inline Matrix gaussian_kernel(const Matrix& X, const Matrix& C, double sigma) {
    return (sq_dists(X, C) / (-2.0 * sigma * sigma)).array().exp().matrix();
}

struct KernelBasis {
    Matrix centers;
    double sigma = 1.0;
    std::size_t b() const { return static_cast<std::size_t>(centers.rows()); }
    Matrix features(const Matrix& X) const { return gaussian_kernel(X, centers, sigma); }
};

// Up to b_max rows of X picked uniformly without replacement.
inline Matrix pick_centers(const Matrix& X, std::size_t b_max, Rng& rng) {
    const auto m = static_cast<std::size_t>(X.rows());
    if (m <= b_max) return X;
    auto p = rng.permutation(m);
    Matrix C(static_cast<Eigen::Index>(b_max), X.cols());
    for (std::size_t i = 0; i < b_max; ++i)
        C.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(p[i]));
    return C;
}

inline std::vector<double> default_centiles() { return {10, 20, 30, 40, 50, 60, 70, 80, 90}; }

// Kernel width candidates from centiles of squared distances between random pairs.
inline std::vector<double> centile_sigmas(const Matrix& X, const std::vector<double>& centiles, std::uint64_t seed) {
    const auto m = static_cast<std::size_t>(X.rows());
    if (m < 2) throw InvalidArgument("centile_sigmas needs at least two points");
    const std::size_t np = std::min<std::size_t>(2000, m);
    Rng rng(derive_seed(seed, 0xce47));
    auto r1 = rng.permutation(m), r2 = rng.permutation(m);
    std::vector<double> dist(np);
    for (std::size_t i = 0; i < np; ++i)
        dist[i] = (X.row(static_cast<Eigen::Index>(r1[i])) - X.row(static_cast<Eigen::Index>(r2[i]))).squaredNorm();
    std::sort(dist.begin(), dist.end());
    if (dist.back() == 0.0) throw DegenerateError("all sampled pair distances are zero");
    std::vector<double> out;
    out.reserve(centiles.size());
    for (double c : centiles) {
        auto k = static_cast<std::size_t>(static_cast<double>(np) * c / 100.0);
        k = std::min(k, np - 1);
        out.push_back(std::sqrt(dist[k]));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<double> centile_sigmas(const Dataset& d, const std::vector<double>& centiles, std::uint64_t seed) {
    return centile_sigmas(d.X, centiles, seed);
}

}  // namespace csln
