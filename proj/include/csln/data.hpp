#pragma once

#include "core.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <utility>

namespace csln {

inline double corrupt_eta(double eta, double rho) { return (1.0 - 2.0 * rho) * eta + rho; }

// Flip each label independently with probability rho.
inline Dataset inject_sln(const Dataset& data, const NoiseSpec& noise, std::uint64_t seed) {
    if (data.empty()) throw InvalidArgument("inject_sln on empty dataset");
    Dataset out = data;
    if (noise.rho == 0.0) return out;
    Rng rng(derive_seed(seed, 0x51a));
    for (int& v : out.y)
        if (rng.bernoulli(noise.rho)) v = -v;
    return out;
}

inline std::size_t count_flips(const Dataset& a, const Dataset& b) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < a.size(); ++i) k += a.y[i] != b.y[i];
    return k;
}

struct SplitIndex {
    std::vector<std::size_t> train, test;
};

inline SplitIndex split_indices(const Dataset& data, const SplitPlan& plan, std::size_t trial) {
    plan.validate();
    if (trial >= plan.n_trials) throw InvalidArgument("trial index out of range");
    const std::size_t m = data.size();
    const auto n_train = static_cast<std::size_t>(std::llround(plan.train_fraction * static_cast<double>(m)));
    if (n_train == 0 || n_train >= m) throw DegenerateError("split leaves an empty side");
    Rng rng(derive_seed(plan.seed, 0x5b17, trial));
    SplitIndex s;
    if (!plan.stratify) {
        auto p = rng.permutation(m);
        s.train.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n_train));
        s.test.assign(p.begin() + static_cast<std::ptrdiff_t>(n_train), p.end());
        return s;
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < m; ++i) (data.y[i] == 1 ? pos : neg).push_back(i);
    std::shuffle(pos.begin(), pos.end(), rng.engine());
    std::shuffle(neg.begin(), neg.end(), rng.engine());
    auto n_pos = static_cast<std::size_t>(std::llround(plan.train_fraction * static_cast<double>(pos.size())));
    n_pos = std::min(n_pos, n_train);
    std::size_t n_neg = n_train - n_pos;
    if (n_neg > neg.size()) {
        n_neg = neg.size();
        n_pos = n_train - n_neg;
    }
    for (std::size_t i = 0; i < pos.size(); ++i) (i < n_pos ? s.train : s.test).push_back(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) (i < n_neg ? s.train : s.test).push_back(neg[i]);
    std::shuffle(s.train.begin(), s.train.end(), rng.engine());
    std::shuffle(s.test.begin(), s.test.end(), rng.engine());
    return s;
}

inline std::pair<Dataset, Dataset> split(const Dataset& data, const SplitPlan& plan, std::size_t trial) {
    auto s = split_indices(data, plan, trial);
    return {data.subset(s.train), data.subset(s.test)};
}

// K folds; fold k lists held-out indices. Stratified by label when asked.
inline std::vector<std::vector<std::size_t>> kfold_indices(const std::vector<int>& y, std::size_t k,
                                                           std::uint64_t seed, bool stratify = true) {
    if (k < 2) throw InvalidArgument("need at least 2 folds");
    Rng rng(derive_seed(seed, 0xf01d));
    std::vector<std::vector<std::size_t>> folds(k);
    if (stratify) {
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
        std::shuffle(pos.begin(), pos.end(), rng.engine());
        std::shuffle(neg.begin(), neg.end(), rng.engine());
        std::size_t j = 0;
        for (auto i : pos) folds[j++ % k].push_back(i);
        for (auto i : neg) folds[j++ % k].push_back(i);
    } else {
        auto p = rng.permutation(y.size());
        for (std::size_t i = 0; i < p.size(); ++i) folds[i % k].push_back(p[i]);
    }
    return folds;
}

inline std::vector<std::size_t> complement(std::size_t m, const std::vector<std::size_t>& held) {
    std::vector<char> mark(m, 0);
    for (auto i : held) mark[i] = 1;
    std::vector<std::size_t> out;
    out.reserve(m - held.size());
    for (std::size_t i = 0; i < m; ++i)
        if (!mark[i]) out.push_back(i);
    return out;
}

// Per-column z-score fitted on one dataset and applied to others.
struct Standardizer {
    Vector mu, sd;
    static Standardizer fit(const Matrix& X) {
        Standardizer s;
        s.mu = X.colwise().mean().transpose();
        s.sd.resize(X.cols());
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            double v = (X.col(j).array() - s.mu(j)).square().mean();
            s.sd(j) = v > 0.0 ? std::sqrt(v) : 1.0;
        }
        return s;
    }
    Matrix apply(const Matrix& X) const {
        return (X.rowwise() - mu.transpose()).array().rowwise() / sd.transpose().array();
    }
    Dataset apply(const Dataset& d) const {
        Dataset out = d;
        out.X = apply(d.X);
        return out;
    }
};

// ---- CSV ----

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    for (auto& c : cells) {
        auto a = c.find_first_not_of(" \t");
        auto b = c.find_last_not_of(" \t");
        c = a == std::string::npos ? std::string() : c.substr(a, b - a + 1);
    }
    return cells;
}

inline double parse_double(const std::string& s, std::size_t line_no) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + s + "'", line_no);
    }
    if (used != s.size()) throw ParseError("not a number: '" + s + "'", line_no);
    return v;
}

struct CsvSummary {
    std::size_t rows = 0, pos = 0, neg = 0;
};

inline Dataset read_dataset_csv(std::istream& in, const std::string& name = {}, CsvSummary* summary = nullptr) {
    std::string line;
    std::size_t line_no = 0;
    do {
        if (!std::getline(in, line)) throw ParseError("missing header", 1);
        ++line_no;
    } while (line.find_first_not_of(" \t\r") == std::string::npos);
    auto header = split_csv_line(line);
    int label_col = -1, eta_col = -1;
    std::vector<int> feat_cols;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == "label") label_col = static_cast<int>(j);
        else if (header[j] == "eta") eta_col = static_cast<int>(j);
        else feat_cols.push_back(static_cast<int>(j));
    }
    if (label_col < 0) throw ParseError("no 'label' column", line_no);

    std::vector<std::vector<double>> rows;
    std::vector<double> labels, etas;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(cells.size()),
                             line_no);
        std::vector<double> r;
        r.reserve(feat_cols.size());
        for (int j : feat_cols) r.push_back(parse_double(cells[static_cast<std::size_t>(j)], line_no));
        double lab = parse_double(cells[static_cast<std::size_t>(label_col)], line_no);
        if (lab == 0.0) lab = -1.0;
        if (lab != 1.0 && lab != -1.0) throw ParseError("label must be in {-1,1} or {0,1}", line_no);
        labels.push_back(lab);
        if (eta_col >= 0) {
            double e = parse_double(cells[static_cast<std::size_t>(eta_col)], line_no);
            if (!(e >= 0.0 && e <= 1.0)) throw ParseError("eta outside [0,1]", line_no);
            etas.push_back(e);
        }
        rows.push_back(std::move(r));
    }
    Matrix X(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(feat_cols.size()));
    std::vector<int> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < feat_cols.size(); ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        y[i] = labels[i] > 0 ? 1 : -1;
    }
    std::optional<std::vector<double>> eta;
    if (eta_col >= 0) eta = std::move(etas);
    Dataset d(std::move(X), std::move(y), std::move(eta), name);
    if (summary) {
        summary->rows = d.size();
        summary->pos = d.count_pos();
        summary->neg = d.count_neg();
    }
    return d;
}

inline Dataset ingest_csv(const std::string& path, CsvSummary* summary = nullptr) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    return read_dataset_csv(f, path, summary);
}

inline void write_dataset_csv(std::ostream& out, const Dataset& d) {
    out << std::setprecision(17);
    for (std::size_t j = 0; j < d.dim(); ++j) out << 'x' << (j + 1) << ',';
    out << "label";
    if (d.eta) out << ",eta";
    out << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.dim(); ++j)
            out << d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) << ',';
        out << d.y[i];
        if (d.eta) out << ',' << (*d.eta)[i];
        out << '\n';
    }
}

inline void write_dataset_csv(const std::string& path, const Dataset& d) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    write_dataset_csv(f, d);
}

}  // namespace csln
