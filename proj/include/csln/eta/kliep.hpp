#pragma once

#include "../data.hpp"
#include "estimator.hpp"
#include "kernel.hpp"

namespace csln {

struct KliepOptions {
    std::vector<double> sigma_candidates;  // empty: centile widths
    std::size_t b_max = 100;
    std::size_t cv_folds = 5;
    std::size_t max_iter = 10000;
    double tol = 1e-9;  // relative objective change
    std::uint64_t seed = 0;
};

// w(x) = sum_l alpha_l K(x, c_l), alpha >= 0, mean of w over the denominator sample = 1.
struct KliepRatio {
    KernelBasis basis;
    Vector alpha;
    double objective = 0.0;         // mean log w over the numerator sample
    double constraint_residual = 0.0;  // |sum_i w(x_i^de) - n_de|
    std::size_t iterations = 0;

    Vector operator()(const Matrix& X) const { return basis.features(X) * alpha; }
};

namespace detail {

inline double mean_log(const Vector& v) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v(i) > 0.0)) return -std::numeric_limits<double>::infinity();
        s += std::log(v(i));
    }
    return s / static_cast<double>(v.size());
}

// Projected gradient ascent on mean log(A alpha) subject to bvec' alpha = 1, alpha >= 0.
inline Vector kliep_solve(const Matrix& A, const Vector& bvec, const KliepOptions& opt, double& obj,
                          std::size_t& iters) {
    const auto b = A.cols();
    auto project = [&](Vector a) {
        a = a.cwiseMax(0.0);
        double s = bvec.dot(a);
        if (!(s > 0.0)) {
            a = Vector::Ones(b);
            s = bvec.dot(a);
        }
        return Vector(a / s);
    };
    Vector a = project(Vector::Ones(b));
    Vector Aa = A * a;
    obj = mean_log(Aa);
    if (!std::isfinite(obj)) {
        iters = 0;
        return a;
    }
    double step = 1.0 / std::max(1e-12, A.cwiseAbs().maxCoeff());
    std::size_t it = 0, stall = 0;
    for (; it < opt.max_iter; ++it) {
        Vector g = A.transpose() * Aa.cwiseInverse() / static_cast<double>(A.rows());
        // drop the component along bvec on the free coordinates so that the rescaled step ascends
        const double c0 = bvec.dot(g) / std::max(1e-300, bvec.squaredNorm());
        Vector free = ((a.array() > 0.0) || (g.array() > c0 * bvec.array())).cast<double>();
        const double bb = bvec.cwiseProduct(free).squaredNorm();
        const double c = bb > 0.0 ? bvec.cwiseProduct(free).dot(g) / bb : 0.0;
        Vector dir = (g - c * bvec).cwiseProduct(free);
        if (!(dir.squaredNorm() > 0.0)) break;
        bool moved = false;
        for (int ls = 0; ls < 40; ++ls) {
            Vector an = project(a + step * dir);
            Vector An = A * an;
            double on = mean_log(An);
            if (std::isfinite(on) && on >= obj) {
                double gain = on - obj;
                a = std::move(an);
                Aa = std::move(An);
                obj = on;
                moved = true;
                step *= 1.5;
                stall = gain <= opt.tol * std::max(1.0, std::abs(obj)) ? stall + 1 : 0;
                break;
            }
            step *= 0.5;
        }
        if (!moved || stall >= 10) break;
    }
    iters = it;
    return a;
}

}  // namespace detail

inline KliepRatio fit_kliep_fixed(const Matrix& Xnu, const Matrix& Xde, double sigma, const KliepOptions& opt,
                                  std::uint64_t seed) {
    KliepRatio r;
    Rng rng(derive_seed(seed, 0x41e));
    r.basis.centers = pick_centers(Xnu, std::min<std::size_t>(opt.b_max, static_cast<std::size_t>(Xnu.rows())), rng);
    r.basis.sigma = sigma;
    Matrix A = r.basis.features(Xnu);
    Vector bvec = r.basis.features(Xde).colwise().mean().transpose();
    r.alpha = detail::kliep_solve(A, bvec, opt, r.objective, r.iterations);
    r.constraint_residual = std::abs(r(Xde).sum() - static_cast<double>(Xde.rows()));
    return r;
}

// sigma by held-out mean log ratio over folds of the numerator sample; the denominator is
// always the full sample.
inline KliepRatio fit_kliep(const Dataset& d, int numerator_class, const KliepOptions& opt = {}) {
    std::vector<std::size_t> nu_idx;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d.y[i] == numerator_class) nu_idx.push_back(i);
    if (nu_idx.empty()) throw InvalidArgument("KLIEP numerator class has no points");
    Matrix Xnu = d.subset(nu_idx).X;
    const Matrix& Xde = d.X;
    auto sigmas = opt.sigma_candidates.empty() ? centile_sigmas(d, default_centiles(), opt.seed) : opt.sigma_candidates;
    std::sort(sigmas.begin(), sigmas.end());
    sigmas.erase(std::remove_if(sigmas.begin(), sigmas.end(), [](double s) { return !(s > 0.0); }), sigmas.end());
    if (sigmas.empty()) throw DegenerateError("no positive kernel width candidates");

    double best_sigma = sigmas.back(), best_score = -std::numeric_limits<double>::infinity();
    const std::size_t k = std::min<std::size_t>(opt.cv_folds, nu_idx.size());
    if (sigmas.size() > 1 && k >= 2) {
        std::vector<int> dummy(nu_idx.size(), 1);
        auto folds = kfold_indices(dummy, k, derive_seed(opt.seed, 0xcf, static_cast<std::uint64_t>(numerator_class + 2)), false);
        for (double s : sigmas) {
            double score = 0.0;
            for (std::size_t f = 0; f < k; ++f) {
                auto tr = complement(nu_idx.size(), folds[f]);
                Matrix Xtr(static_cast<Eigen::Index>(tr.size()), Xnu.cols());
                for (std::size_t i = 0; i < tr.size(); ++i) Xtr.row(static_cast<Eigen::Index>(i)) = Xnu.row(static_cast<Eigen::Index>(tr[i]));
                Matrix Xte(static_cast<Eigen::Index>(folds[f].size()), Xnu.cols());
                for (std::size_t i = 0; i < folds[f].size(); ++i)
                    Xte.row(static_cast<Eigen::Index>(i)) = Xnu.row(static_cast<Eigen::Index>(folds[f][i]));
                auto r = fit_kliep_fixed(Xtr, Xde, s, opt, derive_seed(opt.seed, f));
                score += detail::mean_log(r(Xte));
            }
            score /= static_cast<double>(k);
            if (score > best_score) {
                best_score = score;
                best_sigma = s;
            }
        }
    }
    // restart with larger widths while some numerator point has no basis mass
    double s = best_sigma;
    for (int tries = 0; tries < 64; ++tries) {
        auto r = fit_kliep_fixed(Xnu, Xde, s, opt, opt.seed);
        if (std::isfinite(r.objective)) return r;
        auto nx = std::upper_bound(sigmas.begin(), sigmas.end(), s);
        s = nx != sigmas.end() ? *nx : 2.0 * s;
    }
    throw DegenerateError("KLIEP objective is -inf for every width");
}

enum class KliepVariant { Pos, Neg, Norm, PosS, NegS, NormS, CNormS, AvgS };

inline KliepVariant parse_kliep_variant(const std::string& s) {
    if (s == "pos") return KliepVariant::Pos;
    if (s == "neg") return KliepVariant::Neg;
    if (s == "norm") return KliepVariant::Norm;
    if (s == "pos_s") return KliepVariant::PosS;
    if (s == "neg_s") return KliepVariant::NegS;
    if (s == "norm_s") return KliepVariant::NormS;
    if (s == "cnorm_s") return KliepVariant::CNormS;
    if (s == "avg_s") return KliepVariant::AvgS;
    throw InvalidArgument("unknown KLIEP variant: " + s);
}

inline std::string kliep_variant_name(KliepVariant v) {
    switch (v) {
        case KliepVariant::Pos: return "pos";
        case KliepVariant::Neg: return "neg";
        case KliepVariant::Norm: return "norm";
        case KliepVariant::PosS: return "pos_s";
        case KliepVariant::NegS: return "neg_s";
        case KliepVariant::NormS: return "norm_s";
        case KliepVariant::CNormS: return "cnorm_s";
        case KliepVariant::AvgS: return "avg_s";
    }
    return "?";
}

inline std::vector<KliepVariant> all_kliep_variants() {
    return {KliepVariant::Pos,   KliepVariant::Neg,    KliepVariant::Norm,   KliepVariant::PosS,
            KliepVariant::NegS,  KliepVariant::NormS,  KliepVariant::CNormS, KliepVariant::AvgS};
}

// The ingredients every variant is built from. Either ratio may be absent when a
// variant does not need it.
struct KliepParts {
    std::optional<KliepRatio> pos, neg;
    double pi_hat = 0.5;
    // training maxima of eta_pos, eta_neg and q_neg = w_neg (1 - pi_hat)
    double max_pos = 1.0, max_neg = 1.0, max_qneg = 1.0;
};

namespace detail {

inline double safe_ratio(double num, double den) {
    if (!(den > 0.0)) throw DegenerateError("zero denominator in normalized KLIEP estimate");
    return num / den;
}

inline bool needs_pos(KliepVariant v) { return v != KliepVariant::Neg && v != KliepVariant::NegS; }
inline bool needs_neg(KliepVariant v) { return v != KliepVariant::Pos && v != KliepVariant::PosS; }

}  // namespace detail

inline Vector kliep_eta_raw(const KliepParts& p, KliepVariant v, const Matrix& X) {
    const auto q = X.rows();
    Vector wp = detail::needs_pos(v) ? (*p.pos)(X) : Vector::Zero(q);
    Vector wn = detail::needs_neg(v) ? (*p.neg)(X) : Vector::Zero(q);
    Vector out(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        const double ep = wp(i) * p.pi_hat;          // eta_pos
        const double qn = wn(i) * (1.0 - p.pi_hat);  // negative-class posterior
        const double en = 1.0 - qn;                  // eta_neg
        const double eps = ep / p.max_pos, ens = en / p.max_neg, qns = qn / p.max_qneg;
        switch (v) {
            case KliepVariant::Pos: out(i) = ep; break;
            case KliepVariant::Neg: out(i) = en; break;
            case KliepVariant::Norm: out(i) = detail::safe_ratio(ep, ep + qn); break;
            case KliepVariant::PosS: out(i) = eps; break;
            case KliepVariant::NegS: out(i) = ens; break;
            case KliepVariant::NormS: out(i) = detail::safe_ratio(eps, eps + qns); break;
            case KliepVariant::CNormS: out(i) = detail::safe_ratio(qns, eps + qns); break;
            case KliepVariant::AvgS: out(i) = 0.5 * (eps + ens); break;
        }
    }
    return out;
}

// Fills the training maxima used by the scaled variants.
inline void kliep_record_maxima(KliepParts& p, const Matrix& Xtr) {
    if (p.pos) {
        double mx = ((*p.pos)(Xtr) * p.pi_hat).maxCoeff();
        p.max_pos = mx > 0.0 ? mx : 1.0;
    }
    if (p.neg) {
        Vector qn = (*p.neg)(Xtr) * (1.0 - p.pi_hat);
        double mq = qn.maxCoeff();
        p.max_qneg = mq > 0.0 ? mq : 1.0;
        double mn = (Vector::Ones(qn.size()) - qn).maxCoeff();
        p.max_neg = mn > 0.0 ? mn : 1.0;
    }
}

inline EtaEstimator kliep_eta(const KliepParts& parts, KliepVariant v) {
    if (detail::needs_pos(v) && !parts.pos) throw InvalidArgument("variant needs the positive-class ratio");
    if (detail::needs_neg(v) && !parts.neg) throw InvalidArgument("variant needs the negative-class ratio");
    return EtaEstimator("kliep:" + kliep_variant_name(v),
                        [parts, v](const Matrix& X) { return kliep_eta_raw(parts, v, X); });
}

inline KliepParts fit_kliep_parts(const Dataset& d, const KliepOptions& opt = {}, bool pos = true, bool neg = true) {
    KliepParts p;
    p.pi_hat = positive_fraction(d.y);
    if (pos) p.pos = fit_kliep(d, 1, opt);
    if (neg) p.neg = fit_kliep(d, -1, opt);
    kliep_record_maxima(p, d.X);
    return p;
}

inline EtaEstimator fit_kliep_eta(const Dataset& d, KliepVariant v, const KliepOptions& opt = {}) {
    auto parts = fit_kliep_parts(d, opt, detail::needs_pos(v), detail::needs_neg(v));
    auto est = kliep_eta(parts, v);
    est.record_train_summary(d.X);
    return est;
}

}  // namespace csln
