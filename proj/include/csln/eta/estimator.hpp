#pragma once

#include "../core.hpp"

#include <functional>
#include <memory>

namespace csln {

struct EtaPrediction {
    std::vector<double> eta;     // clamped to [0,1]
    std::vector<char> clamped;   // 1 where the raw value was outside [0,1]
    double clamp_rate() const {
        if (clamped.empty()) return 0.0;
        std::size_t k = 0;
        for (char c : clamped) k += c != 0;
        return static_cast<double>(k) / static_cast<double>(clamped.size());
    }
};

// A fitted map x -> eta_hat. Raw values may leave [0,1]; predict() clamps and flags.
class EtaEstimator {
public:
    using RawFn = std::function<Vector(const Matrix&)>;

    EtaEstimator() = default;
    EtaEstimator(std::string method, RawFn raw) : method_(std::move(method)), raw_(std::move(raw)) {}

    const std::string& method() const { return method_; }
    bool fitted() const { return static_cast<bool>(raw_); }

    Vector predict_raw(const Matrix& X) const {
        if (!raw_) throw Error("estimator is not fitted");
        return raw_(X);
    }

    EtaPrediction predict(const Matrix& X) const {
        Vector r = predict_raw(X);
        EtaPrediction p;
        p.eta.resize(static_cast<std::size_t>(r.size()));
        p.clamped.resize(p.eta.size());
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            double v = r(i);
            if (std::isnan(v)) throw DegenerateError("estimator produced NaN");
            double c = std::clamp(v, 0.0, 1.0);
            p.eta[static_cast<std::size_t>(i)] = c;
            p.clamped[static_cast<std::size_t>(i)] = c != v;
        }
        return p;
    }

    double predict_one(const Vector& x) const { return predict(Matrix(x.transpose())).eta[0]; }

    // extremes of the clamped estimate on the training inputs
    double max_on_train = 1.0, min_on_train = 0.0;

    void record_train_summary(const Matrix& Xtr) {
        auto p = predict(Xtr);
        max_on_train = *std::max_element(p.eta.begin(), p.eta.end());
        min_on_train = *std::min_element(p.eta.begin(), p.eta.end());
    }

private:
    std::string method_;
    RawFn raw_;
};

inline double positive_fraction(const std::vector<int>& y) {
    if (y.empty()) return 0.5;
    std::size_t k = 0;
    for (int v : y) k += v == 1;
    return static_cast<double>(k) / static_cast<double>(y.size());
}

}  // namespace csln
