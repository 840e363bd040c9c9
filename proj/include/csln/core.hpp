#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace csln {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error types. Each carries a plain message; some carry a number too.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct DegenerateError : Error {
    using Error::Error;
};
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line_no)
        : Error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};
struct IllConditioned : Error {
    IllConditioned(const std::string& msg, double cond)
        : Error(msg + " (condition " + std::to_string(cond) + ")"), condition(cond) {}
    double condition;
};
struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, double gnorm)
        : Error(msg + " (gradient norm " + std::to_string(gnorm) + ")"), grad_norm(gnorm) {}
    double grad_norm;
};

// sign with sign(0) = -1
inline int sign_label(double v) { return v > 0.0 ? 1 : -1; }

struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::optional<std::vector<double>> eta;
    std::string name;

    Dataset() = default;
    Dataset(Matrix features, std::vector<int> labels,
            std::optional<std::vector<double>> true_eta = std::nullopt,
            std::string tag = {})
        : X(std::move(features)), y(std::move(labels)), eta(std::move(true_eta)),
          name(std::move(tag)) {
        validate();
    }

    std::size_t size() const { return y.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }
    bool empty() const { return y.empty(); }
    bool has_eta() const { return eta.has_value(); }

    std::size_t count_pos() const {
        std::size_t k = 0;
        for (int v : y) k += v == 1;
        return k;
    }
    std::size_t count_neg() const { return size() - count_pos(); }

    void validate() const {
        if (static_cast<std::size_t>(X.rows()) != y.size())
            throw InvalidArgument("feature rows do not match label count");
        for (int v : y)
            if (v != 1 && v != -1) throw InvalidArgument("labels must be -1 or +1");
        if (eta) {
            if (eta->size() != y.size()) throw InvalidArgument("eta length mismatch");
            for (double e : *eta)
                if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("eta outside [0,1]");
        }
    }

    Dataset subset(const std::vector<std::size_t>& idx) const {
        Dataset out;
        out.X.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
        out.y.resize(idx.size());
        if (eta) out.eta = std::vector<double>(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            out.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
            out.y[i] = y[idx[i]];
            if (eta) (*out.eta)[i] = (*eta)[idx[i]];
        }
        out.name = name;
        return out;
    }
};

struct NoiseSpec {
    double rho = 0.0;
    explicit NoiseSpec(double r = 0.0) : rho(r) {
        if (!(r >= 0.0 && r < 0.5)) throw InvalidArgument("rho must lie in [0, 0.5)");
    }
};

struct CostParams {
    double alpha = 0.5;
    double gamma = 1.0;
    double lambda = 1.0;
    CostParams() = default;
    CostParams(double a, double g, double l) : alpha(a), gamma(g), lambda(l) { validate(); }
    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
        if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
        if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
    }
};

struct SplitPlan {
    double train_fraction = 0.8;
    std::size_t n_trials = 10;
    std::uint64_t seed = 0;
    bool stratify = false;
    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw InvalidArgument("train_fraction must lie in (0,1)");
        if (n_trials < 1) throw InvalidArgument("n_trials must be >= 1");
    }
};

// splitmix64 finalizer, used to derive independent stream seeds
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed) { return mix64(seed); }

template <class... Rest>
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t first, Rest... rest) {
    return derive_seed(mix64(seed ^ mix64(first + 0x632be59bd9b4e019ULL)), rest...);
}

// Seedable generator with named sub-streams.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : seed_(seed), eng_(mix64(seed)) {}

    template <class... Ids>
    Rng split(Ids... ids) const {
        return Rng(derive_seed(seed_, static_cast<std::uint64_t>(ids)...));
    }

    std::uint64_t seed() const { return seed_; }
    std::mt19937_64& engine() { return eng_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    bool bernoulli(double p) { return uniform() < p; }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        std::shuffle(p.begin(), p.end(), eng_);
        return p;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

inline double mean(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// sample standard deviation (n-1)
inline double stdev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double mu = mean(v), s = 0.0;
    for (double x : v) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace csln
