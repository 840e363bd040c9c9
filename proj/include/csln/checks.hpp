#pragma once

// Published counter-example values next to the computed ones.

#include "analysis.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace csln {

struct ValueCheck {
    std::string name;
    double expected = 0.0, computed = 0.0, tol = 0.0;
    std::string note;
    bool pass() const { return std::abs(computed - expected) <= tol; }
};

inline double truncate_2dp(double v) { return std::trunc(v * 100.0) / 100.0; }

inline std::vector<ValueCheck> counterexample_checks() {
    std::vector<ValueCheck> out;
    auto e1 = example1_risks(0.2, 0.25, 0.3);
    out.push_back({"example1 clean risk of clean optimum", 0.15, e1.clean_risk_of_clean_opt, 1e-9, "p=0.2 alpha=0.25 rho=0.3"});
    out.push_back({"example1 clean risk of noisy optimum", 0.20, e1.clean_risk_of_noisy_opt, 1e-9, ""});

    auto e2 = example2_detail(0.3, 0.42);
    out.push_back({"example2 clean risk of clean optimum", 0.0, e2.risks.clean_risk_of_clean_opt, 1e-9, "alpha=0.3 rho=0.42"});
    out.push_back({"example2 clean risk of noisy optimum", 0.2, e2.risks.clean_risk_of_noisy_opt, 1e-9, ""});
    out.push_back({"example2 corrupted sum, b in (-3,inf)", 0.474, e2.corrupted_sum[3], 1e-3, "sum over the three points"});
    out.push_back({"example2 corrupted sum, b in (-inf,-12]", 0.994, e2.corrupted_sum[0], 1e-3, ""});

    auto g = gaussian_counterexample_detail(gaussian_1d(0.8, 2.0, -2.5, 1.0), 0.65, 0.3);
    out.push_back({"gaussian clean risk of clean optimum", 0.0103, g.risks.clean_risk_of_clean_opt, 1e-3, "p=0.8 mu=(2,-2.5) alpha=0.65 rho=0.3"});
    out.push_back({"gaussian clean risk of noisy optimum", 0.0185, g.risks.clean_risk_of_noisy_opt, 1e-3, ""});
    out.push_back({"gaussian x cut, clean optimum", 0.195629, g.x_clean, 1e-3, "eta(x) = 0.65"});
    out.push_back({"gaussian x cut, noisy optimum", 0.490489, g.x_noisy, 1e-3, "eta(x) = 0.875"});

    const double f1 = usq_pointwise_optimum(0.2, 0.25, 0.4), f2 = usq_pointwise_optimum(0.38, 0.25, 0.4);
    out.push_back({"usq pointwise optimum, clean eta", -0.21, truncate_2dp(f1), 1e-12, "exact " + std::to_string(f1) + ", truncated to 2 dp"});
    out.push_back({"usq pointwise optimum, noisy eta", 0.37, truncate_2dp(f2), 1e-12, "exact " + std::to_string(f2) + ", truncated to 2 dp"});

    auto t = four_cost_thresholds(2, 0, 1, 0, 0.2);
    out.push_back({"four-cost clean threshold", 1.0 / 3.0, t.clean, 1e-4, "C=(2,0,1,0) rho=0.2"});
    out.push_back({"four-cost noisy threshold", 0.2222, t.noisy, 1e-4, ""});
    return out;
}

}  // namespace csln
