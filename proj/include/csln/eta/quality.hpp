#pragma once

#include "estimator.hpp"

namespace csln {

struct EtaQualityReport {
    double mse = 0, rmse = 0, mad = 0, md = 0;
    double kl = 0;           // NaN when undefined
    double acc = 0, brier = 0;
    double diff_max = 0, diff_min = 0;  // NaN without a training set
    double clamp_rate = 0;
    bool kl_defined() const { return !std::isnan(kl); }
};

inline std::vector<std::string> quality_columns() {
    return {"mse", "rmse", "mad", "md", "kl", "acc", "brier", "diff_max", "diff_min", "clamp_rate"};
}

inline std::vector<double> quality_values(const EtaQualityReport& r) {
    return {r.mse, r.rmse, r.mad, r.md, r.kl, r.acc, r.brier, r.diff_max, r.diff_min, r.clamp_rate};
}

// Measures from estimated vs true eta on the test set. DiffMax/DiffMin use the
// training set when one is supplied.
inline EtaQualityReport eval_eta(const EtaEstimator& est, const Dataset& test, const Dataset* train = nullptr) {
    if (!test.has_eta()) throw InvalidArgument("eval_eta needs true eta on the test set");
    auto pred = est.predict(test.X);
    const auto& eh = pred.eta;
    const auto& et = *test.eta;
    const double n = static_cast<double>(test.size());
    EtaQualityReport r;
    bool kl_ok = true;
    double kl = 0.0, correct = 0.0, brier = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double d = eh[i] - et[i];
        r.mse += d * d;
        r.mad += std::abs(d);
        r.md += d;
        if (eh[i] == 0.0 || eh[i] == 1.0) kl_ok = false;
        if (kl_ok) {
            double t = 0.0;
            if (et[i] > 0.0) t += et[i] * std::log(et[i] / eh[i]);
            if (et[i] < 1.0) t += (1.0 - et[i]) * std::log((1.0 - et[i]) / (1.0 - eh[i]));
            kl += t;
        }
        correct += sign_label(eh[i] - 0.5) == test.y[i];
        const double target = test.y[i] == 1 ? 1.0 : 0.0;
        brier += (eh[i] - target) * (eh[i] - target);
    }
    r.mse /= n;
    r.rmse = std::sqrt(r.mse);
    r.mad /= n;
    r.md /= n;
    r.kl = kl_ok ? kl / n : std::nan("");
    r.acc = correct / n;
    r.brier = brier / n;
    r.clamp_rate = pred.clamp_rate();
    r.diff_max = r.diff_min = std::nan("");
    if (train) {
        if (!train->has_eta()) throw InvalidArgument("eval_eta needs true eta on the training set");
        auto pt = est.predict(train->X);
        r.diff_max = *std::max_element(pt.eta.begin(), pt.eta.end()) -
                     *std::max_element(train->eta->begin(), train->eta->end());
        r.diff_min = *std::min_element(pt.eta.begin(), pt.eta.end()) -
                     *std::min_element(train->eta->begin(), train->eta->end());
    }
    return r;
}

}  // namespace csln
