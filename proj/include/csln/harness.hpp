#pragma once

#include "analysis.hpp"
#include "data.hpp"
#include "metrics.hpp"
#include "resample.hpp"
#include "synth.hpp"
#include "usq.hpp"

#include <map>

namespace csln {

enum class GammaPolicy { Fixed, TunedDefault, TunedExplicit };
enum class TuningMode { None, Ap1, Ap2, Ap3 };

inline GammaPolicy parse_gamma_policy(const std::string& s) {
    if (s == "fixed") return GammaPolicy::Fixed;
    if (s == "tuned-default-grid" || s == "tuned_default") return GammaPolicy::TunedDefault;
    if (s == "tuned-explicit-grid" || s == "tuned_explicit") return GammaPolicy::TunedExplicit;
    throw InvalidArgument("unknown gamma policy: " + s);
}

inline std::string gamma_policy_name(GammaPolicy p) {
    switch (p) {
        case GammaPolicy::Fixed: return "fixed";
        case GammaPolicy::TunedDefault: return "tuned-default-grid";
        case GammaPolicy::TunedExplicit: return "tuned-explicit-grid";
    }
    return "?";
}

inline TuningMode parse_tuning_mode(const std::string& s) {
    if (s.empty() || s == "none") return TuningMode::None;
    if (s == "Ap1" || s == "ap1") return TuningMode::Ap1;
    if (s == "Ap2" || s == "ap2") return TuningMode::Ap2;
    if (s == "Ap3" || s == "ap3") return TuningMode::Ap3;
    throw InvalidArgument("unknown tuning mode: " + s);
}

inline std::string tuning_mode_name(TuningMode m) {
    switch (m) {
        case TuningMode::None: return "none";
        case TuningMode::Ap1: return "Ap1";
        case TuningMode::Ap2: return "Ap2";
        case TuningMode::Ap3: return "Ap3";
    }
    return "?";
}

struct ExperimentConfig {
    // data source: a preset name or a CSV path
    std::string preset;
    std::string csv_path;
    std::size_t m = 0;     // 0: preset default
    double pi = -1.0;      // <0: preset default
    std::uint64_t data_seed = 1;

    double alpha = 0.5;
    std::vector<double> rho_list{0.0};
    std::vector<double> lambda_grid{0.01, 0.1, 1.0, 10.0};
    GammaPolicy gamma_policy = GammaPolicy::TunedDefault;
    double gamma = 1.0;                 // for the fixed policy
    std::vector<double> gamma_grid;     // for the explicit policy
    std::vector<std::string> schemes{"usq_erm"};
    TuningMode tuning_mode = TuningMode::None;
    std::vector<double> alpha_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<double> ap_gamma_grid{0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
    Measure pm = Measure::Acc;
    std::size_t n_trials = 10;
    double train_fraction = 0.8;
    bool stratify = false;
    bool standardize = false;
    std::size_t cv_folds = 5;
    std::uint64_t seed = 0;

    void validate() const {
        if (preset.empty() == csv_path.empty()) throw InvalidArgument("give exactly one of preset or csv path");
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
        if (rho_list.empty() || lambda_grid.empty() || schemes.empty()) throw InvalidArgument("grids must be nonempty");
        for (double r : rho_list) NoiseSpec{r};
        for (double l : lambda_grid)
            if (!(l > 0.0)) throw InvalidArgument("lambda grid entries must be positive");
        if (gamma_policy == GammaPolicy::TunedExplicit && gamma_grid.empty())
            throw InvalidArgument("explicit gamma policy needs a grid");
        if (n_trials < 1) throw InvalidArgument("n_trials must be >= 1");
        if (tuning_mode != TuningMode::None)
            for (double r : rho_list)
                if (r != 0.0) throw InvalidArgument("tuning modes are for clean-data studies (rho = 0)");
    }
};

struct TrialRecord {
    std::string scheme;
    double rho = 0.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Scores score;
    double lambda = std::nan(""), gamma = std::nan(""), alpha = std::nan("");
    bool ok = true;
    std::string error;
};

struct MetricSummary {
    double mean = std::nan(""), sd = std::nan("");
};

struct AggregateRow {
    std::string scheme;
    double rho = 0.0;
    std::size_t n_ok = 0, n_failed = 0;
    MetricSummary acc, am, f, wc;
};

struct ExperimentReport {
    std::vector<TrialRecord> trials;
    std::vector<AggregateRow> aggregates;
};

inline MetricSummary summarize(const std::vector<double>& v) {
    if (v.empty()) return {};
    return {mean(v), stdev(v)};
}

// Mean and sample sd over the successful trials of each (scheme, rho) cell.
inline std::vector<AggregateRow> aggregate(const std::vector<TrialRecord>& trials) {
    std::vector<AggregateRow> rows;
    std::vector<std::pair<std::string, double>> keys;
    for (const auto& t : trials) {
        auto k = std::make_pair(t.scheme, t.rho);
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    for (const auto& k : keys) {
        AggregateRow r;
        r.scheme = k.first;
        r.rho = k.second;
        std::vector<double> acc, am, f, wc;
        for (const auto& t : trials) {
            if (t.scheme != k.first || t.rho != k.second) continue;
            if (!t.ok) {
                ++r.n_failed;
                continue;
            }
            ++r.n_ok;
            acc.push_back(t.score.acc);
            am.push_back(t.score.am);
            f.push_back(t.score.f);
            wc.push_back(t.score.wc);
        }
        r.acc = summarize(acc);
        r.am = summarize(am);
        r.f = summarize(f);
        r.wc = summarize(wc);
        rows.push_back(r);
    }
    return rows;
}

struct UsqSelection {
    double alpha = 0.5, gamma = 1.0, lambda = 1.0, score = 0.0;
};

// Grid search over (alpha, gamma, lambda) by k-fold CV on the given (possibly noisy) labels.
inline UsqSelection select_usq(const Dataset& train, const std::vector<double>& alphas, const std::vector<double>& gammas,
                               const std::vector<double>& lambdas, Measure pm, std::size_t folds_n, std::uint64_t seed,
                               double wc_alpha) {
    auto folds = kfold_indices(train.y, folds_n, derive_seed(seed, 0xcf));
    std::vector<Dataset> tr, te;
    for (auto& f : folds) {
        tr.push_back(train.subset(complement(train.size(), f)));
        te.push_back(train.subset(f));
    }
    UsqSelection best;
    bool have = false;
    for (double a : alphas) {
        for (double g : gammas) {
            for (double l : lambdas) {
                std::vector<int> pred, truth;
                for (std::size_t k = 0; k < folds.size(); ++k) {
                    auto fit = fit_usq_closed_form(tr[k], CostParams(a, g, l));
                    auto p = predict_all(fit.model, te[k].X);
                    pred.insert(pred.end(), p.begin(), p.end());
                    truth.insert(truth.end(), te[k].y.begin(), te[k].y.end());
                }
                double s = scores(confusion(pred, truth), wc_alpha, g).get(pm);
                if (!have || better(pm, s, best.score)) {
                    best = {a, g, l, s};
                    have = true;
                }
            }
        }
    }
    return best;
}

inline Dataset load_experiment_data(const ExperimentConfig& cfg) {
    if (!cfg.csv_path.empty()) return ingest_csv(cfg.csv_path);
    auto spec = preset(cfg.preset, cfg.pi);
    if (cfg.m) spec.m = cfg.m;
    auto d = gen_gaussian(spec, cfg.data_seed);
    d.name = cfg.preset;
    return d;
}

namespace detail {

inline std::vector<double> usq_gamma_grid(const ExperimentConfig& cfg, double alpha) {
    switch (cfg.gamma_policy) {
        case GammaPolicy::Fixed: return {cfg.gamma};
        case GammaPolicy::TunedDefault: return default_gamma_grid(alpha);
        case GammaPolicy::TunedExplicit: return cfg.gamma_grid;
    }
    return {1.0};
}

inline TrialRecord run_usq(const ExperimentConfig& cfg, const Dataset& tr, const Dataset& te, std::uint64_t seed) {
    TrialRecord r;
    std::vector<double> alphas{cfg.alpha}, gammas = usq_gamma_grid(cfg, cfg.alpha);
    switch (cfg.tuning_mode) {
        case TuningMode::None: break;
        case TuningMode::Ap1: alphas = cfg.alpha_grid; gammas = {1.0}; break;
        case TuningMode::Ap2: alphas = {0.5}; gammas = cfg.ap_gamma_grid; break;
        case TuningMode::Ap3: alphas = cfg.alpha_grid; gammas = cfg.ap_gamma_grid; break;
    }
    auto sel = select_usq(tr, alphas, gammas, cfg.lambda_grid, cfg.pm, cfg.cv_folds, seed, cfg.alpha);
    auto fit = fit_usq_closed_form(tr, CostParams(sel.alpha, sel.gamma, sel.lambda));
    r.score = scores(confusion(predict_all(fit.model, te.X), te.y), cfg.alpha, sel.gamma);
    r.alpha = sel.alpha;
    r.gamma = sel.gamma;
    r.lambda = sel.lambda;
    return r;
}

inline TrialRecord run_resample(const ExperimentConfig& cfg, const std::string& method, const Dataset& tr,
                                const Dataset& te, std::uint64_t seed) {
    TrialRecord r;
    ResampleConfig rc;
    rc.alpha = cfg.alpha;
    rc.eta_method = parse_eta_method(method);
    rc.pm = cfg.pm;
    rc.cv_folds = cfg.cv_folds;
    rc.seed = seed;
    if (cfg.gamma_policy == GammaPolicy::Fixed) rc.gamma_grid = {cfg.gamma};
    else if (cfg.gamma_policy == GammaPolicy::TunedExplicit) rc.gamma_grid = cfg.gamma_grid;
    auto fit = fit_resampler(tr, rc);
    r.score = scores(confusion(predict_resampled_all(fit, te.X), te.y), cfg.alpha, fit.gamma_star);
    r.alpha = cfg.alpha;
    r.gamma = fit.gamma_star;
    return r;
}

inline double p_star(double alpha, double gamma) { return alpha / (gamma + (1.0 - gamma) * alpha); }

inline std::vector<int> threshold_eta(const std::vector<double>& eta, double t) {
    std::vector<int> out(eta.size());
    for (std::size_t i = 0; i < eta.size(); ++i) out[i] = sign_label(eta[i] - t);
    return out;
}

inline TrialRecord run_bayes(const ExperimentConfig& cfg, const Dataset& clean_tr, const Dataset& te) {
    if (!te.has_eta() || !clean_tr.has_eta()) throw InvalidArgument("bayes_oracle needs true eta in the data");
    TrialRecord r;
    auto gammas = usq_gamma_grid(cfg, cfg.alpha);
    double best_g = gammas.front(), best_s = 0.0;
    bool have = false;
    for (double g : gammas) {
        double s = scores(confusion(threshold_eta(*clean_tr.eta, p_star(cfg.alpha, g)), clean_tr.y), cfg.alpha, g).get(cfg.pm);
        if (!have || better(cfg.pm, s, best_s)) {
            best_s = s;
            best_g = g;
            have = true;
        }
    }
    r.score = scores(confusion(threshold_eta(*te.eta, p_star(cfg.alpha, best_g)), te.y), cfg.alpha, best_g);
    r.alpha = cfg.alpha;
    r.gamma = best_g;
    return r;
}

}  // namespace detail

// Per trial: split, corrupt the training side only, tune on it, evaluate on the clean test side.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const Dataset& data) {
    cfg.validate();
    ExperimentReport rep;
    SplitPlan plan;
    plan.train_fraction = cfg.train_fraction;
    plan.n_trials = cfg.n_trials;
    plan.seed = cfg.seed;
    plan.stratify = cfg.stratify;
    for (std::size_t ri = 0; ri < cfg.rho_list.size(); ++ri) {
        const double rho = cfg.rho_list[ri];
        for (std::size_t t = 0; t < cfg.n_trials; ++t) {
            auto [clean_tr, te] = split(data, plan, t);
            if (cfg.standardize) {
                auto z = Standardizer::fit(clean_tr.X);
                clean_tr = z.apply(clean_tr);
                te = z.apply(te);
            }
            const std::uint64_t trial_seed = derive_seed(cfg.seed, t, ri);
            Dataset tr = inject_sln(clean_tr, NoiseSpec(rho), derive_seed(trial_seed, 0x5e));
            for (std::size_t si = 0; si < cfg.schemes.size(); ++si) {
                const auto& scheme = cfg.schemes[si];
                TrialRecord rec;
                const std::uint64_t cell_seed = derive_seed(trial_seed, si);
                try {
                    if (scheme == "usq_erm") rec = detail::run_usq(cfg, tr, te, cell_seed);
                    else if (scheme.rfind("resample:", 0) == 0) rec = detail::run_resample(cfg, scheme.substr(9), tr, te, cell_seed);
                    else if (scheme == "bayes_oracle") rec = detail::run_bayes(cfg, clean_tr, te);
                    else throw InvalidArgument("unknown scheme: " + scheme);
                } catch (const std::exception& e) {
                    rec = TrialRecord{};
                    rec.ok = false;
                    rec.error = e.what();
                }
                rec.scheme = scheme;
                rec.rho = rho;
                rec.trial = t;
                rec.seed = cell_seed;
                rep.trials.push_back(rec);
            }
        }
    }
    rep.aggregates = aggregate(rep.trials);
    return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, load_experiment_data(cfg)); }

// Clean-data study with alpha and/or gamma tuned per Ap1/Ap2/Ap3.
inline ExperimentReport tune_modes(ExperimentConfig cfg) {
    if (cfg.tuning_mode == TuningMode::None) throw InvalidArgument("tune_modes needs Ap1, Ap2 or Ap3");
    cfg.rho_list = {0.0};
    cfg.schemes = {"usq_erm"};
    return run_experiment(cfg);
}

}  // namespace csln
