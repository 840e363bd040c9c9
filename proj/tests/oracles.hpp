#pragma once

// Independent reference computations shared by the unit tests and the acceptance binary.
// Nothing here calls the library routine it is used to check.

#include <csln/csln.hpp>

#include <numbers>

namespace oracle {

using csln::Matrix;
using csln::Vector;

// Plain gradient descent on mean usq loss + lambda ||(w,b)||^2, derivatives written out by hand.
struct GdResult {
    Vector v;  // (w, b)
    std::size_t iterations = 0;
    double grad_norm = 0.0;
};

inline GdResult usq_gradient_descent(const Matrix& X, const std::vector<int>& y, double alpha, double gamma,
                                     double lambda, std::size_t max_iter = 1000000, double tol = 1e-12) {
    const auto m = X.rows(), n = X.cols();
    double max_row = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) max_row = std::max(max_row, X.row(i).squaredNorm() + 1.0);
    const double wmax = std::max(1.0 - alpha, gamma * alpha);
    const double step = 1.0 / (2.0 * (wmax * max_row + lambda));
    GdResult r;
    r.v = Vector::Zero(n + 1);
    Vector g(n + 1);
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        g.setZero();
        for (Eigen::Index i = 0; i < m; ++i) {
            double s = X.row(i).dot(r.v.head(n)) + r.v(n);
            double ds = y[static_cast<std::size_t>(i)] == 1 ? -2.0 * (1.0 - alpha) * (1.0 - s)
                                                            : 2.0 * alpha * (1.0 + gamma * s);
            g.head(n) += ds * X.row(i).transpose();
            g(n) += ds;
        }
        g /= static_cast<double>(m);
        g += 2.0 * lambda * r.v;
        r.grad_norm = g.norm();
        if (r.grad_norm < tol) break;
        r.v -= step * g;
    }
    return r;
}

// Random small instance for the closed-form check.
struct SmallInstance {
    Matrix X;
    std::vector<int> y;
    double alpha, gamma, lambda;
};

inline SmallInstance random_instance(std::uint64_t seed) {
    csln::Rng rng(seed);
    SmallInstance s;
    auto m = static_cast<Eigen::Index>(5 + rng.uniform() * 45);
    auto n = static_cast<Eigen::Index>(1 + rng.uniform() * 4.999);
    s.X.resize(m, n);
    s.y.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) s.X(i, j) = rng.normal();
        s.y[static_cast<std::size_t>(i)] = rng.bernoulli(0.4) ? 1 : -1;
    }
    s.alpha = 0.05 + 0.9 * rng.uniform();
    s.gamma = 0.2 + 2.8 * rng.uniform();
    s.lambda = 0.05 + 0.95 * rng.uniform();
    return s;
}

// Monte-Carlo pieces of the clean/corrupted usq risk relation for a fixed linear score.
struct RiskDecompEstimate {
    double noisy_risk = 0, noisy_se = 0;          // mean of l_usq(f, y~) on SLN samples
    double clean_keyed_risk = 0, clean_keyed_se = 0;  // weights keyed on the clean label, target flipped
    double clean_risk = 0;                        // mean of l_usq(f, y)
    double correction = 0;                        // 4 rho mean[y f w(y)]
    double predicted() const { return clean_risk + correction; }
};

inline double usq_loss_ref(double s, int target, int weight_label, double alpha, double gamma) {
    // weight_label picks the branch, target the sign inside the square
    if (weight_label == 1) return (1 - alpha) * (s - target) * (s - target);
    return alpha / gamma * (gamma * s - target) * (gamma * s - target);
}

inline RiskDecompEstimate risk_decomposition_mc(const csln::Dataset& clean, const std::vector<int>& noisy,
                                         const Vector& w, double b, double alpha, double gamma, double rho) {
    const auto m = static_cast<double>(clean.size());
    double sn = 0, sn2 = 0, sk = 0, sk2 = 0, sc = 0, corr = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const double f = clean.X.row(static_cast<Eigen::Index>(i)).dot(w) + b;
        const int y = clean.y[i], yt = noisy[i];
        const double ln = usq_loss_ref(f, yt, yt, alpha, gamma);
        const double lk = usq_loss_ref(f, yt, y, alpha, gamma);
        sn += ln;
        sn2 += ln * ln;
        sk += lk;
        sk2 += lk * lk;
        sc += usq_loss_ref(f, y, y, alpha, gamma);
        corr += y * f * (y == 1 ? 1 - alpha : alpha);
    }
    RiskDecompEstimate e;
    e.noisy_risk = sn / m;
    e.noisy_se = std::sqrt(std::max(0.0, sn2 / m - e.noisy_risk * e.noisy_risk) / m);
    e.clean_keyed_risk = sk / m;
    e.clean_keyed_se = std::sqrt(std::max(0.0, sk2 / m - e.clean_keyed_risk * e.clean_keyed_risk) / m);
    e.clean_risk = sc / m;
    e.correction = 4.0 * rho * corr / m;
    return e;
}

// Weighted 0-1 risk (1-alpha) P(f<=0, y=1) + alpha P(f>0, y=-1) of a threshold rule on a 1-D
// equal-variance Gaussian pair, by Simpson integration of the class densities.
inline double gaussian_threshold_risk_quadrature(double p, double mu_pos, double mu_neg, double sd, double alpha,
                                                 double x_cut) {
    auto pdf = [sd](double x, double mu) {
        double z = (x - mu) / sd;
        return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    auto simpson = [](auto f, double a, double b, int n) {
        double h = (b - a) / n, s = f(a) + f(b);
        for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    const double lo = std::min(mu_pos, mu_neg) - 40 * sd, hi = std::max(mu_pos, mu_neg) + 40 * sd;
    // predict +1 right of the cut (eta increasing in x when mu_pos > mu_neg)
    double miss_pos = simpson([&](double x) { return pdf(x, mu_pos); }, lo, x_cut, 200000);
    double false_pos = simpson([&](double x) { return pdf(x, mu_neg); }, x_cut, hi, 200000);
    return (1 - alpha) * p * miss_pos + alpha * (1 - p) * false_pos;
}

// Bayes accuracy of sign(eta - t) for an equal-covariance Gaussian pair, projecting onto the
// discriminant direction d = S^-1 (mu+ - mu-). The rule is d.x > c for the appropriate c.
inline double gaussian_bayes_accuracy(const csln::GaussianMixtureSpec& s, double t) {
    Eigen::FullPivLU<Matrix> lu(s.sigma_pos);
    Vector d = lu.solve(Vector(s.mu_pos - s.mu_neg));
    const double delta2 = (s.mu_pos - s.mu_neg).dot(d);
    // log-odds(x) = d.x - 0.5 (mu+ + mu-).d + log(pi/(1-pi)); predict +1 iff log-odds > log(t/(1-t))
    const double c = std::log(t / (1 - t)) - std::log(s.pi / (1 - s.pi)) + 0.5 * (s.mu_pos + s.mu_neg).dot(d);
    const double sd = std::sqrt(delta2);  // sd of d.x in either class
    const double mp = s.mu_pos.dot(d), mn = s.mu_neg.dot(d);
    auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    return s.pi * (1 - Phi((c - mp) / sd)) + (1 - s.pi) * Phi((c - mn) / sd);
}

}  // namespace oracle
