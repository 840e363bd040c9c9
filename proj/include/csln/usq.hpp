#pragma once

#include "core.hpp"

namespace csln {

struct LinearModel {
    Vector w;
    double b = 0.0;

    double score(const Eigen::Ref<const Vector>& x) const {
        if (x.size() != w.size()) throw InvalidArgument("dimension mismatch in predict");
        return w.dot(x) + b;
    }
    Vector scores(const Matrix& X) const {
        if (X.cols() != w.size()) throw InvalidArgument("dimension mismatch in predict");
        return (X * w).array() + b;
    }
};

struct UsqFit {
    LinearModel model;
    CostParams cost;
    double system_condition = 1.0;
};

// l_{alpha,usq}(f, y)
inline double loss_usq(double score, int label, const CostParams& c) {
    if (label == 1) return (1.0 - c.alpha) * (1.0 - score) * (1.0 - score);
    double t = 1.0 + c.gamma * score;
    return (c.alpha / c.gamma) * t * t;
}

inline int predict(const LinearModel& m, const Eigen::Ref<const Vector>& x) { return sign_label(m.score(x)); }

inline std::vector<int> predict_all(const LinearModel& m, const Matrix& X) {
    Vector s = m.scores(X);
    std::vector<int> out(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = sign_label(s(i));
    return out;
}

// Per-sample weights of the normal equations, keyed by the observed label.
inline void usq_weights(int y, const CostParams& c, double& a, double& cc) {
    if (y == 1) {
        a = 1.0 - c.alpha;
        cc = 1.0 - c.alpha;
    } else {
        a = c.gamma * c.alpha;
        cc = -c.alpha;
    }
}

struct UsqSystem {
    Matrix A;  // (n+1)x(n+1), last coordinate is the intercept
    Vector c;
};

// Builds (1/m) sum a_i xt_i xt_i^T and (1/m) sum c_i xt_i with xt = (x, 1).
inline UsqSystem usq_system(const Matrix& X, const std::vector<int>& y, const CostParams& cost) {
    const auto m = X.rows(), n = X.cols();
    Matrix Xt(m, n + 1);
    Xt.leftCols(n) = X;
    Xt.col(n).setOnes();
    Vector a(m), c(m);
    for (Eigen::Index i = 0; i < m; ++i) usq_weights(y[static_cast<std::size_t>(i)], cost, a(i), c(i));
    UsqSystem s;
    s.A.noalias() = Xt.transpose() * a.asDiagonal() * Xt;
    s.A /= static_cast<double>(m);
    s.c.noalias() = Xt.transpose() * c;
    s.c /= static_cast<double>(m);
    return s;
}

// Solves (A + lambda I) v = c for symmetric A; LLT first, pivoted LU as fallback.
inline Vector solve_ridge_system(const Matrix& A, const Vector& c, double lambda, double* cond_out = nullptr) {
    Matrix M = A;
    M.diagonal().array() += lambda;
    Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double lo = std::abs(ev.minCoeff()), hi = std::abs(ev.maxCoeff());
    double cond = lo > 0.0 ? std::max(1.0, hi / lo) : std::numeric_limits<double>::infinity();
    if (cond_out) *cond_out = cond;
    if (!std::isfinite(cond) || cond > 1e15) throw IllConditioned("ridge system numerically singular", cond);
    Eigen::LLT<Matrix> llt(M);
    if (llt.info() == Eigen::Success) return llt.solve(c);
    Eigen::PartialPivLU<Matrix> lu(M);
    return lu.solve(c);
}

inline UsqFit fit_usq_closed_form(const Matrix& X, const std::vector<int>& y, const CostParams& cost) {
    cost.validate();
    if (X.rows() < 1) throw InvalidArgument("fit_usq_closed_form needs at least one sample");
    auto sys = usq_system(X, y, cost);
    UsqFit fit;
    fit.cost = cost;
    Vector v = solve_ridge_system(sys.A, sys.c, cost.lambda, &fit.system_condition);
    const auto n = X.cols();
    fit.model.w = v.head(n);
    fit.model.b = v(n);
    return fit;
}

inline UsqFit fit_usq_closed_form(const Dataset& d, const CostParams& cost) {
    return fit_usq_closed_form(d.X, d.y, cost);
}

// Mean usq loss; adds lambda ||(w,b)||^2 when asked.
inline double empirical_risk_usq(const Dataset& d, const LinearModel& m, const CostParams& cost,
                                 bool with_regularizer = false) {
    Vector s = m.scores(d.X);
    double r = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) r += loss_usq(s(static_cast<Eigen::Index>(i)), d.y[i], cost);
    r /= static_cast<double>(d.size());
    if (with_regularizer) r += cost.lambda * (m.w.squaredNorm() + m.b * m.b);
    return r;
}

// Gradient of the regularized risk in (w,b); zero at the optimum.
inline Vector usq_gradient(const Dataset& d, const LinearModel& m, const CostParams& cost) {
    const auto n = d.X.cols();
    Vector g = Vector::Zero(n + 1);
    Vector s = m.scores(d.X);
    for (std::size_t i = 0; i < d.size(); ++i) {
        double a, c;
        usq_weights(d.y[i], cost, a, c);
        double r = 2.0 * (s(static_cast<Eigen::Index>(i)) * a - c);
        g.head(n) += r * d.X.row(static_cast<Eigen::Index>(i)).transpose();
        g(n) += r;
    }
    g /= static_cast<double>(d.size());
    g.head(n) += 2.0 * cost.lambda * m.w;
    g(n) += 2.0 * cost.lambda * m.b;
    return g;
}

}  // namespace csln
