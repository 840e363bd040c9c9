#pragma once

#include "core.hpp"
#include "data.hpp"
#include "synth.hpp"

#include <array>
#include <numbers>

namespace csln {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

struct RiskPair {
    double clean_risk_of_clean_opt = 0.0;
    double clean_risk_of_noisy_opt = 0.0;
    bool robust = true;
};

inline RiskPair make_risk_pair(double clean, double noisy) {
    return {clean, noisy, std::abs(clean - noisy) <= 1e-9};
}

// Weighted 0-1 risk of a constant predictor on a distribution with P(Y=1)=p.
inline double constant_predictor_risk(int label, double p, double alpha) {
    return label == 1 ? alpha * (1.0 - p) : (1.0 - alpha) * p;
}

// Uniform-pair example: eta is constant p, so both optima are constant predictors.
inline RiskPair example1_risks(double p, double alpha, double rho) {
    int f_clean = sign_label(p - alpha);
    int f_noisy = sign_label(corrupt_eta(p, rho) - alpha);
    return make_risk_pair(constant_predictor_risk(f_clean, p, alpha),
                          constant_predictor_risk(f_noisy, p, alpha));
}

struct Example2Detail {
    RiskPair risks;
    // Intercept regions for sign(x + b): (-inf,-12], (-12,-8], (-8,-3], (-3,inf).
    std::array<double, 4> clean_sum{};      // sum over the three points
    std::array<double, 4> corrupted_sum{};  // (1-rho) l(y) + rho l(-y), summed
    std::size_t clean_region = 0, noisy_region = 0;
};

// Three-point set {(3,-1),(8,-1),(12,1)} with f = sign(x + b).
inline Example2Detail example2_detail(double alpha, double rho) {
    const std::array<double, 3> xs{3.0, 8.0, 12.0};
    const std::array<int, 3> ys{-1, -1, 1};
    // a representative intercept inside each region
    const std::array<double, 4> reps{-13.0, -10.0, -5.0, 0.0};
    auto l01 = [&](int y, int f) {
        if (y == -1 && f == 1) return alpha;
        if (y == 1 && f == -1) return 1.0 - alpha;
        return 0.0;
    };
    Example2Detail d;
    for (std::size_t r = 0; r < 4; ++r) {
        double c = 0.0, n = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            int f = sign_label(xs[i] + reps[r]);
            c += l01(ys[i], f);
            n += (1.0 - rho) * l01(ys[i], f) + rho * l01(-ys[i], f);
        }
        d.clean_sum[r] = c;
        d.corrupted_sum[r] = n;
    }
    // first minimizer wins on ties
    for (std::size_t r = 1; r < 4; ++r) {
        if (d.clean_sum[r] < d.clean_sum[d.clean_region] - 1e-15) d.clean_region = r;
        if (d.corrupted_sum[r] < d.corrupted_sum[d.noisy_region] - 1e-15) d.noisy_region = r;
    }
    d.risks = make_risk_pair(d.clean_sum[d.clean_region] / 3.0, d.clean_sum[d.noisy_region] / 3.0);
    return d;
}

inline RiskPair example2_risks(double alpha, double rho) { return example2_detail(alpha, rho).risks; }

inline double usq_pointwise_optimum(double eta, double alpha, double gamma) {
    double den = eta * (1.0 - alpha) + gamma * alpha * (1.0 - eta);
    if (!(den > 0.0)) throw InvalidArgument("non-positive denominator in pointwise optimum");
    return (eta - alpha) / den;
}

struct GaussianCounterexample {
    RiskPair risks;
    double threshold_clean = 0.0, threshold_noisy = 0.0;  // on eta
    double x_clean = 0.0, x_noisy = 0.0;                  // on the feature axis
};

namespace detail {

// Clean weighted 0-1 risk of "predict +1 iff eta(x) > tau" for an equal-variance 1-D pair.
inline double gaussian_threshold_risk(const GaussianMixtureSpec& s, double alpha, double tau, double* x_out) {
    const double mp = s.mu_pos(0), mn = s.mu_neg(0), var = s.sigma_pos(0, 0), sd = std::sqrt(var);
    const double p = s.pi;
    double p_pos_given_neg, p_neg_given_pos;  // P(f=+1|y=-1), P(f=-1|y=+1)
    const double slope = (mp - mn) / var;
    const double icpt = std::log(p / (1.0 - p)) + (mn * mn - mp * mp) / (2.0 * var);
    if (tau <= 0.0 || tau >= 1.0 || slope == 0.0) {
        // constant-sign predictor
        int f;
        if (tau <= 0.0) f = 1;
        else if (tau >= 1.0) f = -1;
        else f = sign_label(1.0 / (1.0 + std::exp(-icpt)) - tau);
        p_pos_given_neg = f == 1 ? 1.0 : 0.0;
        p_neg_given_pos = f == 1 ? 0.0 : 1.0;
        if (x_out) *x_out = std::nan("");
    } else {
        double xt = (std::log(tau / (1.0 - tau)) - icpt) / slope;
        if (x_out) *x_out = xt;
        if (slope > 0) {  // +1 iff x > xt
            p_pos_given_neg = 1.0 - normal_cdf((xt - mn) / sd);
            p_neg_given_pos = normal_cdf((xt - mp) / sd);
        } else {  // +1 iff x < xt
            p_pos_given_neg = normal_cdf((xt - mn) / sd);
            p_neg_given_pos = 1.0 - normal_cdf((xt - mp) / sd);
        }
    }
    return (1.0 - p) * alpha * p_pos_given_neg + p * (1.0 - alpha) * p_neg_given_pos;
}

}  // namespace detail

// Clean optimum thresholds eta at alpha; the noisy optimum thresholds the corrupted
// posterior at alpha, i.e. eta at (alpha - rho)/(1 - 2 rho).
inline GaussianCounterexample gaussian_counterexample_detail(const GaussianMixtureSpec& s, double alpha, double rho) {
    s.validate();
    if (s.dim() != 1) throw InvalidArgument("gaussian counter-example needs a 1-D spec");
    if (std::abs(s.sigma_pos(0, 0) - s.sigma_neg(0, 0)) > 1e-12)
        throw InvalidArgument("gaussian counter-example needs equal class variances");
    GaussianCounterexample g;
    g.threshold_clean = alpha;
    g.threshold_noisy = (alpha - rho) / (1.0 - 2.0 * rho);
    double rc = detail::gaussian_threshold_risk(s, alpha, g.threshold_clean, &g.x_clean);
    double rn = detail::gaussian_threshold_risk(s, alpha, g.threshold_noisy, &g.x_noisy);
    g.risks = make_risk_pair(rc, rn);
    return g;
}

inline RiskPair gaussian_counterexample_risks(const GaussianMixtureSpec& s, double alpha, double rho) {
    return gaussian_counterexample_detail(s, alpha, rho).risks;
}

inline GaussianMixtureSpec gaussian_1d(double p, double mu_pos, double mu_neg, double sd) {
    GaussianMixtureSpec s;
    s.pi = p;
    s.mu_pos = Vector::Constant(1, mu_pos);
    s.mu_neg = Vector::Constant(1, mu_neg);
    s.sigma_pos = Matrix::Constant(1, 1, sd * sd);
    s.sigma_neg = s.sigma_pos;
    s.m = 1000;
    return s;
}

struct FourCostThresholds {
    double clean = 0.0, noisy = 0.0;
    bool equal = false;
};

// C_y: loss when a class-y point is misclassified; c_y: loss when it is classified correctly.
inline FourCostThresholds four_cost_thresholds(double C1, double c1, double Cm1, double cm1, double rho) {
    if (!(C1 > c1 && Cm1 > cm1)) throw InvalidArgument("need C1 > c1 and C-1 > c-1");
    const double dn = Cm1 - cm1;
    const double S = (C1 - c1) + dn;
    if (!(S > 0.0)) throw DegenerateError("zero effective cost sum");
    FourCostThresholds t;
    t.clean = dn / S;
    t.noisy = (dn - rho * S) / ((1.0 - 2.0 * rho) * S);
    t.equal = std::abs(t.clean - t.noisy) <= 1e-12 * std::max(1.0, std::abs(t.clean));
    return t;
}

}  // namespace csln
