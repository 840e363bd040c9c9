#pragma once

#include "core.hpp"

namespace csln {

struct Confusion {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    std::size_t total() const { return tp + tn + fp + fn; }
};

inline Confusion confusion(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size()) throw InvalidArgument("prediction/truth length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (truth[i] == 1) (pred[i] == 1 ? c.tp : c.fn)++;
        else (pred[i] == 1 ? c.fp : c.tn)++;
    }
    return c;
}

enum class Measure { Acc, AM, F, WC };

inline Measure parse_measure(const std::string& s) {
    if (s == "acc" || s == "Acc") return Measure::Acc;
    if (s == "am" || s == "AM") return Measure::AM;
    if (s == "f" || s == "F") return Measure::F;
    if (s == "wc" || s == "WC") return Measure::WC;
    throw InvalidArgument("unknown performance measure: " + s);
}

inline std::string measure_name(Measure m) {
    switch (m) {
        case Measure::Acc: return "acc";
        case Measure::AM: return "am";
        case Measure::F: return "f";
        case Measure::WC: return "wc";
    }
    return "?";
}

struct Scores {
    double acc = 0, am = 0, f = 0, wc = 0;
    bool f_degenerate = false;    // tp = fp = fn = 0, F set to 1
    bool rate_undefined = false;  // a class is absent from the truth
    double get(Measure m) const {
        switch (m) {
            case Measure::Acc: return acc;
            case Measure::AM: return am;
            case Measure::F: return f;
            case Measure::WC: return wc;
        }
        return acc;
    }
};

// WC is an absolute weighted count, not a rate.
inline Scores scores(const Confusion& c, double alpha, double gamma) {
    Scores s;
    const double n = static_cast<double>(c.total());
    s.acc = n > 0 ? static_cast<double>(c.tp + c.tn) / n : 0.0;
    const double P = static_cast<double>(c.tp + c.fn), N = static_cast<double>(c.tn + c.fp);
    s.rate_undefined = P == 0 || N == 0;
    double tpr = P > 0 ? c.tp / P : 0.0;
    double tnr = N > 0 ? c.tn / N : 0.0;
    if (P == 0) tpr = tnr;
    if (N == 0) tnr = tpr;
    s.am = 0.5 * (tpr + tnr);
    const double den = 2.0 * c.tp + c.fp + c.fn;
    if (den == 0) {
        s.f = 1.0;
        s.f_degenerate = true;
    } else {
        s.f = 2.0 * c.tp / den;
    }
    s.wc = (1.0 - alpha) * static_cast<double>(c.fn) + (alpha / gamma) * static_cast<double>(c.fp);
    return s;
}

// Larger is better for every measure except WC.
inline bool better(Measure m, double a, double b) { return m == Measure::WC ? a < b : a > b; }

}  // namespace csln
