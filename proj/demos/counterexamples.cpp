// Prints the counter-example table and how the clean risk of the noisy optimum moves with rho.

#include <csln/csln.hpp>

#include <cstdio>

using namespace csln;

int main() {
    std::printf("%-42s %12s %12s %6s\n", "check", "expected", "computed", "");
    for (const auto& c : counterexample_checks())
        std::printf("%-42s %12.6f %12.6f %6s\n", c.name.c_str(), c.expected, c.computed, c.pass() ? "ok" : "DIFF");

    std::printf("\nexample 1 (p=0.2, alpha=0.25): clean risk of clean / noisy optimum\n");
    for (double rho : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        auto r = example1_risks(0.2, 0.25, rho);
        std::printf("  rho=%.1f  %.4f  %.4f\n", rho, r.clean_risk_of_clean_opt, r.clean_risk_of_noisy_opt);
    }
    std::printf("\ngaussian (p=0.8, mu=(2,-2.5), alpha=0.65): clean risk of clean / noisy optimum\n");
    for (double rho : {0.0, 0.1, 0.2, 0.3, 0.4}) {
        auto g = gaussian_counterexample_detail(gaussian_1d(0.8, 2.0, -2.5, 1.0), 0.65, rho);
        std::printf("  rho=%.1f  %.4f  %.4f\n", rho, g.risks.clean_risk_of_clean_opt, g.risks.clean_risk_of_noisy_opt);
    }
    return 0;
}
