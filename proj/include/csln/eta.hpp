#pragma once

#include "eta/estimator.hpp"
#include "eta/kernel.hpp"
#include "eta/kliep.hpp"
#include "eta/knn.hpp"
#include "eta/lkfun.hpp"
#include "eta/lspc.hpp"
#include "eta/quality.hpp"

namespace csln {

// Parsed form of selectors such as "lkfun:logistic", "lspc", "kliep:norm", "knn", "knn:7".
struct EtaMethod {
    enum class Kind { LkFun, Lspc, Kliep, Knn } kind = Kind::Lspc;
    LossKind loss = LossKind::Logistic;
    KliepVariant variant = KliepVariant::Norm;
    double lkfun_lambda = 1e-4;
    std::size_t k = 0;  // 0: chosen by CV
    LspcOptions lspc;
    KliepOptions kliep;

    std::string name() const {
        switch (kind) {
            case Kind::LkFun: return "lkfun:" + loss_kind_name(loss);
            case Kind::Lspc: return "lspc";
            case Kind::Kliep: return "kliep:" + kliep_variant_name(variant);
            case Kind::Knn: return k ? "knn:" + std::to_string(k) : "knn";
        }
        return "?";
    }
};

inline EtaMethod parse_eta_method(const std::string& s) {
    EtaMethod m;
    auto colon = s.find(':');
    std::string head = s.substr(0, colon), tail = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (head == "lkfun") {
        m.kind = EtaMethod::Kind::LkFun;
        m.loss = parse_loss_kind(tail.empty() ? "logistic" : tail);
    } else if (head == "lspc") {
        m.kind = EtaMethod::Kind::Lspc;
    } else if (head == "kliep") {
        m.kind = EtaMethod::Kind::Kliep;
        m.variant = parse_kliep_variant(tail.empty() ? "norm" : tail);
    } else if (head == "knn") {
        m.kind = EtaMethod::Kind::Knn;
        if (!tail.empty()) m.k = static_cast<std::size_t>(std::stoul(tail));
    } else {
        throw InvalidArgument("unknown eta method: " + s);
    }
    return m;
}

inline EtaEstimator fit_eta(const Dataset& d, const EtaMethod& m, std::uint64_t seed) {
    switch (m.kind) {
        case EtaMethod::Kind::LkFun: return fit_lkfun(d, m.loss, m.lkfun_lambda);
        case EtaMethod::Kind::Lspc: {
            auto o = m.lspc;
            o.seed = derive_seed(seed, o.seed);
            return fit_lspc(d, o);
        }
        case EtaMethod::Kind::Kliep: {
            auto o = m.kliep;
            o.seed = derive_seed(seed, o.seed);
            return fit_kliep_eta(d, m.variant, o);
        }
        case EtaMethod::Kind::Knn: return fit_knn(d, std::min(m.k, d.size()), seed);
    }
    throw InvalidArgument("bad eta method");
}

// Runs the method's own hyperparameter search once and returns a method with those
// choices frozen, so repeated fits on related data skip the search.
inline EtaMethod freeze_hyperparameters(const Dataset& d, EtaMethod m, std::uint64_t seed) {
    if (m.kind == EtaMethod::Kind::Lspc && (m.lspc.sigma_candidates.size() != 1 || m.lspc.lambda_grid.size() != 1)) {
        auto o = m.lspc;
        o.seed = derive_seed(seed, o.seed);
        auto sel = select_lspc(d, o);
        m.lspc.sigma_candidates = {sel.sigma};
        m.lspc.lambda_grid = {sel.lambda};
    } else if (m.kind == EtaMethod::Kind::Knn && m.k == 0) {
        m.k = select_knn_k(d, 5, seed);
    } else if (m.kind == EtaMethod::Kind::Kliep && m.kliep.sigma_candidates.size() != 1) {
        auto o = m.kliep;
        o.seed = derive_seed(seed, o.seed);
        auto pos = fit_kliep(d, 1, o);
        m.kliep.sigma_candidates = {pos.basis.sigma};
    }
    return m;
}

}  // namespace csln
