#pragma once

#include "../usq.hpp"
#include "estimator.hpp"

namespace csln {

enum class LossKind { Logistic, Squared, ModSquared, Exponential };

inline LossKind parse_loss_kind(const std::string& s) {
    if (s == "logistic" || s == "log") return LossKind::Logistic;
    if (s == "squared" || s == "sq") return LossKind::Squared;
    if (s == "msq" || s == "mod_squared") return LossKind::ModSquared;
    if (s == "exp" || s == "exponential") return LossKind::Exponential;
    throw InvalidArgument("unknown loss kind: " + s);
}

inline std::string loss_kind_name(LossKind k) {
    switch (k) {
        case LossKind::Logistic: return "logistic";
        case LossKind::Squared: return "squared";
        case LossKind::ModSquared: return "msq";
        case LossKind::Exponential: return "exp";
    }
    return "?";
}

inline double truncate_unit(double f) { return std::min(std::max(f, -1.0), 1.0); }

// Inverse link psi^{-1}: score -> probability.
inline double inverse_link(LossKind k, double f) {
    switch (k) {
        case LossKind::Logistic: return 1.0 / (1.0 + std::exp(-f));
        case LossKind::Squared: return (1.0 + f) / 2.0;
        case LossKind::ModSquared: return (1.0 + truncate_unit(f)) / 2.0;
        case LossKind::Exponential: return 1.0 / (1.0 + std::exp(-2.0 * f));
    }
    return 0.5;
}

// Margin loss phi(z), z = y f, with first and second derivatives.
inline void margin_loss(LossKind k, double z, double& v, double& d1, double& d2) {
    switch (k) {
        case LossKind::Logistic: {
            const double ln2 = std::log(2.0);
            // log(1 + e^{-z}) computed stably
            v = (z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z))) / ln2;
            double s = 1.0 / (1.0 + std::exp(z));  // sigmoid(-z)
            d1 = -s / ln2;
            d2 = s * (1.0 - s) / ln2;
            return;
        }
        case LossKind::Squared:
            v = (1.0 - z) * (1.0 - z);
            d1 = -2.0 * (1.0 - z);
            d2 = 2.0;
            return;
        case LossKind::ModSquared: {
            double h = std::max(0.0, 1.0 - z);
            v = h * h;
            d1 = -2.0 * h;
            d2 = z < 1.0 ? 2.0 : 0.0;
            return;
        }
        case LossKind::Exponential:
            v = std::exp(-z);
            d1 = -v;
            d2 = v;
            return;
    }
}

struct LkFunFit {
    LinearModel model;
    LossKind kind = LossKind::Logistic;
    double lambda = 0.0;
    double grad_norm = 0.0;
    std::size_t iterations = 0;
};

// Mean margin loss plus lambda ||(w,b)||^2, minimized by damped Newton.
inline LkFunFit fit_lkfun_model(const Dataset& d, LossKind kind, double lambda, std::size_t max_iter = 200,
                                double tol = 1e-8) {
    if (d.count_pos() == 0 || d.count_neg() == 0) throw InvalidArgument("lk-fun needs both classes");
    if (!(lambda > 0.0)) throw InvalidArgument("lk-fun needs lambda > 0");
    LkFunFit out;
    out.kind = kind;
    out.lambda = lambda;
    const auto m = d.X.rows(), n = d.X.cols();
    if (kind == LossKind::Squared) {
        // (1-z)^2 is twice the usq loss at alpha=0.5, gamma=1
        auto f = fit_usq_closed_form(d, CostParams(0.5, 1.0, lambda / 2.0));
        out.model = f.model;
        return out;
    }
    Matrix Xt(m, n + 1);
    Xt.leftCols(n) = d.X;
    Xt.col(n).setOnes();
    Vector yv(m);
    for (Eigen::Index i = 0; i < m; ++i) yv(i) = d.y[static_cast<std::size_t>(i)];

    auto objective = [&](const Vector& v, Vector* g, Vector* h) {
        Vector z = (Xt * v).cwiseProduct(yv);
        double f = 0.0;
        if (g) g->setZero(m);
        if (h) h->setZero(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            double lv = 0.0, d1 = 0.0, d2 = 0.0;
            margin_loss(kind, z(i), lv, d1, d2);
            f += lv;
            if (g) (*g)(i) = d1 * yv(i);
            if (h) (*h)(i) = d2;
        }
        return f / static_cast<double>(m) + lambda * v.squaredNorm();
    };

    Vector v = Vector::Zero(n + 1);
    Vector gi(m), hi(m);
    double f = objective(v, &gi, &hi);
    std::size_t it = 0;
    double gnorm = 0.0;
    for (; it < max_iter; ++it) {
        Vector grad = Xt.transpose() * gi / static_cast<double>(m) + 2.0 * lambda * v;
        gnorm = grad.norm();
        if (gnorm <= tol) break;
        Matrix H = Xt.transpose() * hi.asDiagonal() * Xt / static_cast<double>(m);
        H.diagonal().array() += 2.0 * lambda;
        Vector step = H.ldlt().solve(-grad);
        double slope = grad.dot(step);
        if (!(slope < 0.0)) step = -grad, slope = -gnorm * gnorm;
        double t = 1.0;
        Vector vn;
        double fn = f;
        for (int ls = 0; ls < 60; ++ls) {
            vn = v + t * step;
            fn = objective(vn, nullptr, nullptr);
            if (fn <= f + 1e-4 * t * slope) break;
            t *= 0.5;
        }
        if (!(fn <= f)) break;  // no further decrease possible in floating point
        v = vn;
        f = objective(v, &gi, &hi);
    }
    out.iterations = it;
    out.grad_norm = gnorm;
    if (gnorm > 1e-5) throw ConvergenceError("lk-fun did not converge", gnorm);
    out.model.w = v.head(n);
    out.model.b = v(n);
    return out;
}

inline EtaEstimator lkfun_estimator(const LkFunFit& fit) {
    auto model = fit.model;
    auto kind = fit.kind;
    return EtaEstimator("lkfun:" + loss_kind_name(kind), [model, kind](const Matrix& X) {
        Vector s = model.scores(X);
        for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = inverse_link(kind, s(i));
        return s;
    });
}

inline EtaEstimator fit_lkfun(const Dataset& d, LossKind kind, double lambda = 1e-4) {
    auto est = lkfun_estimator(fit_lkfun_model(d, kind, lambda));
    est.record_train_summary(d.X);
    return est;
}

}  // namespace csln
