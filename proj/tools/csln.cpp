// Command-line front end: data generation, training, eta estimation, resampling,
// metrics, counter-example checks and full experiments.

#include <csln/csln.hpp>
#include <csln/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace csln;

namespace {

// Label column of a CSV: the column named in `names` if present, else the only column.
std::vector<int> read_labels(const std::string& path, const std::vector<std::string>& names) {
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t col = 0, line_no = 0;
    bool have_header = false;
    std::vector<int> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (!have_header && out.empty()) {
            char* end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            if (end == cells[0].c_str()) {  // non-numeric first cell: header row
                have_header = true;
                bool found = false;
                for (const auto& n : names)
                    for (std::size_t j = 0; j < cells.size() && !found; ++j)
                        if (cells[j] == n) {
                            col = j;
                            found = true;
                        }
                if (!found && cells.size() != 1) throw ParseError("no label column in " + path, line_no);
                continue;
            }
            if (cells.size() != 1) throw ParseError("expected a single column in " + path, line_no);
        }
        if (col >= cells.size()) throw ParseError("short row", line_no);
        double v = std::stod(cells[col]);
        if (v == 1.0) out.push_back(1);
        else if (v == -1.0 || v == 0.0) out.push_back(-1);
        else throw ParseError("label must be +1/-1 or 1/0", line_no);
    }
    return out;
}

std::string labels_csv(const std::vector<int>& y) {
    std::ostringstream s;
    s << "pred\n";
    for (int v : y) s << v << '\n';
    return s.str();
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& c : split_csv_line(s))
        if (!c.empty()) out.push_back(std::stod(c));
    return out;
}

std::string scores_csv(const Scores& s, const Confusion& c) {
    std::ostringstream o;
    o << "acc,am,f,wc,tp,tn,fp,fn\n"
      << fmt_num(s.acc, 10) << ',' << fmt_num(s.am, 10) << ',' << fmt_num(s.f, 10) << ',' << fmt_num(s.wc, 10) << ','
      << c.tp << ',' << c.tn << ',' << c.fp << ',' << c.fn << '\n';
    return o.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-sensitive learning under symmetric label noise"};
    app.require_subcommand(1);

    // gen-data
    std::string g_preset, g_spec, g_out;
    std::size_t g_m = 0;
    std::uint64_t g_seed = 1;
    double g_pi = -1.0;
    auto* gen = app.add_subcommand("gen-data", "Sample a Gaussian class-conditional dataset");
    auto* gp = gen->add_option("--preset", g_preset, "Preset name")->check(CLI::IsMember(preset_names()));
    auto* gs = gen->add_option("--spec", g_spec, "Spec JSON file");
    gp->excludes(gs);
    gen->add_option("--m", g_m, "Sample size (default: preset size)");
    gen->add_option("--pi", g_pi, "Positive class prior override");
    gen->add_option("--seed", g_seed, "Random seed");
    gen->add_option("--out", g_out, "Output CSV")->required();

    // train-usq
    std::string t_train, t_model;
    double t_alpha = 0.5, t_gamma = 1.0, t_lambda = 0.1;
    bool t_std = false;
    auto* tr = app.add_subcommand("train-usq", "Fit the usq-loss linear classifier in closed form");
    tr->add_option("--train", t_train, "Training CSV")->required();
    tr->add_option("--alpha", t_alpha, "Cost weight in (0,1)");
    tr->add_option("--gamma", t_gamma, "Margin parameter > 0");
    tr->add_option("--lambda", t_lambda, "Ridge parameter > 0");
    tr->add_flag("--standardize", t_std, "z-score features; weights are mapped back to raw feature scale");
    tr->add_option("--model-out", t_model, "Model JSON")->required();

    // estimate-eta
    std::string e_method = "lspc", e_train, e_test, e_report;
    std::uint64_t e_seed = 0;
    auto* ee = app.add_subcommand("estimate-eta", "Fit an eta estimator and score it against true eta");
    ee->add_option("--method", e_method, "lkfun:<loss> | lspc | kliep:<variant> | knn[:k]");
    ee->add_option("--train", e_train, "Training CSV")->required();
    ee->add_option("--test", e_test, "Test CSV with an eta column")->required();
    ee->add_option("--seed", e_seed, "Random seed");
    ee->add_option("--report-out", e_report, "Report CSV")->required();

    // resample-predict
    std::string r_train, r_test, r_pm = "acc", r_eta = "lspc", r_grid, r_report, r_pred;
    double r_alpha = 0.5;
    std::uint64_t r_seed = 0;
    auto* rp = app.add_subcommand("resample-predict", "Under-sample negatives, estimate eta, threshold at 0.5");
    rp->add_option("--train", r_train, "Training CSV")->required();
    rp->add_option("--test", r_test, "Test CSV")->required();
    rp->add_option("--alpha", r_alpha, "Cost weight in (0,1)");
    rp->add_option("--pm", r_pm, "Selection measure")->check(CLI::IsMember({"acc", "am", "f", "wc"}));
    rp->add_option("--eta-method", r_eta, "eta estimator selector");
    rp->add_option("--gamma-grid", r_grid, "Comma-separated gamma values");
    rp->add_option("--seed", r_seed, "Random seed");
    rp->add_option("--report-out", r_report, "Report CSV")->required();
    rp->add_option("--pred-out", r_pred, "Test predictions CSV");

    // metrics
    std::string m_pred, m_truth, m_out;
    double m_alpha = 0.5, m_gamma = 1.0;
    auto* mt = app.add_subcommand("metrics", "Score predictions against labels");
    mt->add_option("--pred", m_pred, "Predictions CSV (column pred or a single column)")->required();
    mt->add_option("--truth", m_truth, "Truth CSV (column label or a single column)")->required();
    mt->add_option("--alpha", m_alpha, "Cost weight for WC");
    mt->add_option("--gamma", m_gamma, "Margin parameter for WC");
    mt->add_option("--out", m_out, "Output CSV (default: stdout)");

    // verify-counterexamples
    bool v_strict = false;
    auto* vc = app.add_subcommand("verify-counterexamples", "Compare counter-example values with published ones");
    vc->add_flag("--strict", v_strict, "Exit with status 1 on any mismatch");

    // run-experiment
    std::string x_config, x_out;
    auto* rx = app.add_subcommand("run-experiment", "Noise sweep over repeated train/test splits");
    rx->add_option("--config", x_config, "Config JSON")->required();
    rx->add_option("--out-dir", x_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (g_preset.empty() && g_spec.empty()) throw InvalidArgument("give --preset or --spec");
            auto spec = g_preset.empty() ? spec_from_json(json::parse(read_file(g_spec))) : preset(g_preset);
            if (g_pi >= 0.0) spec.pi = g_pi;
            spec.validate();
            if (g_m) spec.m = g_m;
            auto d = gen_gaussian(spec, g_seed);
            std::ostringstream s;
            write_dataset_csv(s, d);
            write_file_atomic(g_out, s.str());
            std::cout << "wrote " << d.size() << " rows (" << d.count_pos() << " positive) to " << g_out << '\n';
        } else if (tr->parsed()) {
            auto d = ingest_csv(t_train);
            CostParams cost(t_alpha, t_gamma, t_lambda);
            UsqFit fit;
            if (t_std) {
                auto z = Standardizer::fit(d.X);
                fit = fit_usq_closed_form(z.apply(d), cost);
                // w.(x - mu)/sd + b  =  (w/sd).x + (b - sum w mu/sd)
                Vector w = fit.model.w.cwiseQuotient(z.sd);
                fit.model.b -= w.dot(z.mu);
                fit.model.w = w;
            } else {
                fit = fit_usq_closed_form(d, cost);
            }
            write_file_atomic(t_model, model_to_json(fit).dump(2) + "\n");
            auto acc = scores(confusion(predict_all(fit.model, d.X), d.y), t_alpha, t_gamma).acc;
            std::cout << "training accuracy " << fmt_num(acc) << ", model written to " << t_model << '\n';
        } else if (ee->parsed()) {
            auto train = ingest_csv(e_train), test = ingest_csv(e_test);
            auto est = fit_eta(train, parse_eta_method(e_method), e_seed);
            auto q = eval_eta(est, test, train.has_eta() ? &train : nullptr);
            std::ostringstream s;
            s << "method";
            for (const auto& c : quality_columns()) s << ',' << c;
            s << '\n' << est.method();
            for (double v : quality_values(q)) s << ',' << fmt_num(v, 10);
            s << '\n';
            write_file_atomic(e_report, s.str());
            std::cout << est.method() << ": mse " << fmt_num(q.mse) << ", acc " << fmt_num(q.acc) << '\n';
        } else if (rp->parsed()) {
            auto train = ingest_csv(r_train), test = ingest_csv(r_test);
            ResampleConfig rc;
            rc.alpha = r_alpha;
            rc.pm = parse_measure(r_pm);
            rc.eta_method = parse_eta_method(r_eta);
            rc.gamma_grid = parse_list(r_grid);
            rc.seed = r_seed;
            auto fit = fit_resampler(train, rc);
            auto pred = predict_resampled_all(fit, test.X);
            auto c = confusion(pred, test.y);
            auto sc = scores(c, r_alpha, fit.gamma_star);
            std::ostringstream s;
            s << "eta_method,gamma_star,balanced_size,flipped,acc,am,f,wc\n"
              << fit.estimator.method() << ',' << fmt_num(fit.gamma_star, 10) << ',' << fit.balanced_size << ','
              << (fit.flipped ? 1 : 0) << ',' << fmt_num(sc.acc, 10) << ',' << fmt_num(sc.am, 10) << ','
              << fmt_num(sc.f, 10) << ',' << fmt_num(sc.wc, 10) << '\n';
            write_file_atomic(r_report, s.str());
            if (!r_pred.empty()) write_file_atomic(r_pred, labels_csv(pred));
            std::cout << "gamma* " << fmt_num(fit.gamma_star) << ", test acc " << fmt_num(sc.acc) << '\n';
        } else if (mt->parsed()) {
            auto p = read_labels(m_pred, {"pred", "label"});
            auto t = read_labels(m_truth, {"label", "truth"});
            auto c = confusion(p, t);
            auto out = scores_csv(scores(c, m_alpha, m_gamma), c);
            if (m_out.empty()) std::cout << out;
            else write_file_atomic(m_out, out);
        } else if (vc->parsed()) {
            bool all = true;
            std::printf("%-42s %12s %12s %8s  %s\n", "check", "expected", "computed", "result", "note");
            for (const auto& c : counterexample_checks()) {
                all = all && c.pass();
                std::printf("%-42s %12.6f %12.6f %8s  %s\n", c.name.c_str(), c.expected, c.computed,
                            c.pass() ? "PASS" : "FAIL", c.note.c_str());
            }
            return v_strict && !all ? 1 : 0;
        } else if (rx->parsed()) {
            auto cfg = config_from_json(json::parse(read_file(x_config)));
            auto rep = run_experiment(cfg);
            write_report(x_out, cfg, rep);
            std::cout << summary_markdown(cfg, rep);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
