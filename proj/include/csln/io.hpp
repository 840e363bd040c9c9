#pragma once

// JSON and report I/O. Needs nlohmann/json on the include path.

#include "harness.hpp"
#include "usq.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace csln {

using json = nlohmann::json;

// Writes to a sibling temp file, then renames over the target.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw Error("cannot write " + tmp);
        f << content;
        if (!f) throw Error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// ---- model ----

inline json model_to_json(const UsqFit& fit) {
    json j;
    j["w"] = std::vector<double>(fit.model.w.data(), fit.model.w.data() + fit.model.w.size());
    j["b"] = fit.model.b;
    j["alpha"] = fit.cost.alpha;
    j["gamma"] = fit.cost.gamma;
    j["lambda"] = fit.cost.lambda;
    return j;
}

inline UsqFit model_from_json(const json& j) {
    UsqFit fit;
    auto w = j.at("w").get<std::vector<double>>();
    fit.model.w = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    fit.model.b = j.at("b").get<double>();
    fit.cost = CostParams(j.at("alpha").get<double>(), j.at("gamma").get<double>(), j.at("lambda").get<double>());
    return fit;
}

// ---- gaussian spec ----

inline Vector json_vector(const json& j) {
    auto v = j.get<std::vector<double>>();
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Matrix json_matrix(const json& j) {
    auto rows = j.get<std::vector<std::vector<double>>>();
    Matrix M(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != M.cols()) throw InvalidArgument("ragged matrix in JSON");
        for (std::size_t k = 0; k < rows[i].size(); ++k)
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
    return M;
}

inline GaussianMixtureSpec spec_from_json(const json& j) {
    GaussianMixtureSpec s;
    s.pi = j.at("pi").get<double>();
    s.mu_pos = json_vector(j.at("mu_pos"));
    s.mu_neg = json_vector(j.at("mu_neg"));
    s.sigma_pos = json_matrix(j.at("sigma_pos"));
    s.sigma_neg = j.contains("sigma_neg") ? json_matrix(j.at("sigma_neg")) : s.sigma_pos;
    s.m = j.value("m", std::size_t{1000});
    s.validate();
    return s;
}

// ---- experiment config ----

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    if (j.contains("preset")) c.preset = j["preset"].get<std::string>();
    if (j.contains("csv")) c.csv_path = j["csv"].get<std::string>();
    c.m = j.value("m", c.m);
    c.pi = j.value("pi", c.pi);
    c.data_seed = j.value("data_seed", c.data_seed);
    c.alpha = j.value("alpha", c.alpha);
    c.rho_list = j.value("rho_list", c.rho_list);
    c.lambda_grid = j.value("lambda_grid", c.lambda_grid);
    if (j.contains("gamma_policy")) c.gamma_policy = parse_gamma_policy(j["gamma_policy"].get<std::string>());
    c.gamma = j.value("gamma", c.gamma);
    c.gamma_grid = j.value("gamma_grid", c.gamma_grid);
    c.schemes = j.value("schemes", c.schemes);
    if (j.contains("tuning_mode")) c.tuning_mode = parse_tuning_mode(j["tuning_mode"].get<std::string>());
    c.alpha_grid = j.value("alpha_grid", c.alpha_grid);
    c.ap_gamma_grid = j.value("ap_gamma_grid", c.ap_gamma_grid);
    if (j.contains("pm")) c.pm = parse_measure(j["pm"].get<std::string>());
    c.n_trials = j.value("n_trials", c.n_trials);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.stratify = j.value("stratify", c.stratify);
    c.standardize = j.value("standardize", c.standardize);
    c.cv_folds = j.value("cv_folds", c.cv_folds);
    c.seed = j.value("seed", c.seed);
    c.validate();
    return c;
}

inline json config_to_json(const ExperimentConfig& c) {
    json j;
    if (!c.preset.empty()) j["preset"] = c.preset;
    if (!c.csv_path.empty()) j["csv"] = c.csv_path;
    j["m"] = c.m;
    j["pi"] = c.pi;
    j["data_seed"] = c.data_seed;
    j["alpha"] = c.alpha;
    j["rho_list"] = c.rho_list;
    j["lambda_grid"] = c.lambda_grid;
    j["gamma_policy"] = gamma_policy_name(c.gamma_policy);
    j["gamma"] = c.gamma;
    j["gamma_grid"] = c.gamma_grid;
    j["schemes"] = c.schemes;
    j["tuning_mode"] = tuning_mode_name(c.tuning_mode);
    j["alpha_grid"] = c.alpha_grid;
    j["ap_gamma_grid"] = c.ap_gamma_grid;
    j["pm"] = measure_name(c.pm);
    j["n_trials"] = c.n_trials;
    j["train_fraction"] = c.train_fraction;
    j["stratify"] = c.stratify;
    j["standardize"] = c.standardize;
    j["cv_folds"] = c.cv_folds;
    j["seed"] = c.seed;
    return j;
}

// ---- reports ----

inline std::string fmt_num(double v, int prec = 6) {
    if (std::isnan(v)) return "NA";
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

inline std::string trials_csv(const ExperimentReport& rep) {
    std::ostringstream out;
    out << "scheme,rho,trial,seed,acc,am,f,wc,alpha,gamma,lambda,ok,error\n";
    for (const auto& t : rep.trials) {
        out << t.scheme << ',' << fmt_num(t.rho) << ',' << t.trial << ',' << t.seed << ',';
        if (t.ok)
            out << fmt_num(t.score.acc, 10) << ',' << fmt_num(t.score.am, 10) << ',' << fmt_num(t.score.f, 10) << ','
                << fmt_num(t.score.wc, 10);
        else
            out << "NA,NA,NA,NA";
        std::string err = t.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        out << ',' << fmt_num(t.alpha) << ',' << fmt_num(t.gamma) << ',' << fmt_num(t.lambda) << ',' << (t.ok ? 1 : 0)
            << ',' << err << '\n';
    }
    return out.str();
}

inline json summary_json(const ExperimentConfig& cfg, const ExperimentReport& rep) {
    auto ms = [](const MetricSummary& m) {
        json j;
        j["mean"] = std::isnan(m.mean) ? json(nullptr) : json(m.mean);
        j["sd"] = std::isnan(m.sd) ? json(nullptr) : json(m.sd);
        return j;
    };
    json j;
    j["config"] = config_to_json(cfg);
    j["aggregates"] = json::array();
    for (const auto& a : rep.aggregates) {
        json r;
        r["scheme"] = a.scheme;
        r["rho"] = a.rho;
        r["n_ok"] = a.n_ok;
        r["n_failed"] = a.n_failed;
        r["acc"] = ms(a.acc);
        r["am"] = ms(a.am);
        r["f"] = ms(a.f);
        r["wc"] = ms(a.wc);
        j["aggregates"].push_back(r);
    }
    return j;
}

// One table per metric: rows are noise rates, columns are schemes, cells "mean±sd".
inline std::string summary_markdown(const ExperimentConfig& cfg, const ExperimentReport& rep) {
    std::vector<std::string> schemes;
    std::vector<double> rhos;
    for (const auto& a : rep.aggregates) {
        if (std::find(schemes.begin(), schemes.end(), a.scheme) == schemes.end()) schemes.push_back(a.scheme);
        if (std::find(rhos.begin(), rhos.end(), a.rho) == rhos.end()) rhos.push_back(a.rho);
    }
    auto cell = [](const MetricSummary& m, int prec) {
        if (std::isnan(m.mean)) return std::string("NA");
        std::ostringstream ss;
        ss << std::fixed << std::setprecision(prec) << m.mean << "±" << m.sd;
        return ss.str();
    };
    std::ostringstream out;
    out << "# Results: " << (cfg.preset.empty() ? cfg.csv_path : cfg.preset) << "\n\n";
    out << "alpha = " << fmt_num(cfg.alpha) << ", gamma policy = " << gamma_policy_name(cfg.gamma_policy)
        << ", trials = " << cfg.n_trials << ", selection measure = " << measure_name(cfg.pm);
    if (cfg.tuning_mode != TuningMode::None) out << ", tuning mode = " << tuning_mode_name(cfg.tuning_mode);
    out << "\n";
    const std::vector<std::pair<std::string, MetricSummary AggregateRow::*>> metrics{
        {"Accuracy", &AggregateRow::acc}, {"AM", &AggregateRow::am}, {"F", &AggregateRow::f}, {"Weighted cost", &AggregateRow::wc}};
    for (const auto& [title, field] : metrics) {
        out << "\n## " << title << "\n\n| rho |";
        for (const auto& s : schemes) out << ' ' << s << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < schemes.size(); ++i) out << "---|";
        out << '\n';
        for (double r : rhos) {
            out << "| " << fmt_num(r) << " |";
            for (const auto& s : schemes) {
                auto it = std::find_if(rep.aggregates.begin(), rep.aggregates.end(),
                                       [&](const AggregateRow& a) { return a.scheme == s && a.rho == r; });
                out << ' ' << (it == rep.aggregates.end() ? "" : cell((*it).*field, title == "Weighted cost" ? 2 : 3)) << " |";
            }
            out << '\n';
        }
    }
    return out.str();
}

inline void write_report(const std::string& dir, const ExperimentConfig& cfg, const ExperimentReport& rep) {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir + "/trials.csv", trials_csv(rep));
    write_file_atomic(dir + "/summary.json", summary_json(cfg, rep).dump(2) + "\n");
    write_file_atomic(dir + "/summary.md", summary_markdown(cfg, rep));
}

}  // namespace csln
