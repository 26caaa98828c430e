#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradgibbs/gaussfield.hpp"
#include "gradgibbs/spinwave.hpp"
#include "gradgibbs/torus.hpp"
#include "gradgibbs/util.hpp"

namespace gradgibbs {

// kappa*[dual of b] = 1/kappa[b]: bondwise inversion composed with the
// crossing involution of Torus::dual_bond.
inline CouplingConfig dual_coupling(const CouplingConfig& c, const Torus& t) {
    check_coupling(c, t);
    CouplingConfig out;
    out.kappa.resize(c.kappa.size());
    for (int b = 0; b < t.n_bonds(); ++b) out.kappa[t.dual_bond(b)] = 1.0 / c.kappa[b];
    return out;
}

inline std::string coupling_digest(const CouplingConfig& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : c.kappa) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(v));
        std::memcpy(&bits, &v, sizeof(bits));
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

struct DualityReport {
    int L = 0;
    std::string digest;     // of the primal coupling config
    double lhs = 0.0;       // log Z*(dual couplings), STAR space
    double rhs = 0.0;       // log(2 pi L^2) + (1/2) sum_b log kappa_b + log Z(couplings)
    double residual = 0.0;  // lhs - rhs
};

// Fixed-coupling duality identity: the STAR partition function of the
// inverted couplings equals 2 pi L^2 * prod_b sqrt(kappa_b) times the FULL
// (pinned) partition function of the original ones. Exact for every coupling
// config, so the residual is pure floating-point noise.
inline DualityReport verify_z_rep(const CouplingConfig& c, const Torus& t) {
    check_coupling(c, t);
    DualityReport rep;
    rep.L = t.L();
    rep.digest = coupling_digest(c);
    rep.lhs = log_partition_star(dual_coupling(c, t), t);
    std::vector<double> logs(c.kappa.size());
    for (std::size_t b = 0; b < c.kappa.size(); ++b) logs[b] = std::log(c.kappa[b]);
    rep.rhs = std::log(kTwoPi * t.n_sites()) + 0.5 * pairwise_sum(logs) + log_partition(c, t);
    rep.residual = rep.lhs - rep.rhs;
    return rep;
}

// The two candidate orientations of the weight map on p. Both respect the
// species swap kappa -> 1/kappa; they differ in which side of the odds the
// stiffness ratio lands on:
//   A:  (p/(1-p)) * (p*/(1-p*)) = sqrt(kappa_d/kappa_o)
//   B:  (p/(1-p)) * (p*/(1-p*)) = sqrt(kappa_o/kappa_d)
// The exact L=2 summed check below adjudicates which one is a true identity.
enum class Orientation { A, B };

inline void require_unit_normalisation(const ModelParams& mp) {
    if (std::abs(mp.kappa_o * mp.kappa_d - 1.0) > 1e-12)
        throw std::invalid_argument(
            "weight duality needs the normalisation kappa_o * kappa_d = 1");
}

inline double dual_p(double p, const ModelParams& mp, Orientation o) {
    mp.validate();
    require_unit_normalisation(mp);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    if (p == 0.0) return 1.0;  // continuous endpoint limits
    if (p == 1.0) return 0.0;
    const double base = o == Orientation::A ? std::sqrt(mp.kappa_d / mp.kappa_o)
                                            : std::sqrt(mp.kappa_o / mp.kappa_d);
    const double t = base * (1.0 - p) / p;  // p*/(1-p*)
    return t / (1.0 + t);
}

// Fixed point of dual_p: (p/(1-p))^2 = base.
inline double self_dual_p(const ModelParams& mp, Orientation o) {
    mp.validate();
    require_unit_normalisation(mp);
    const double q = o == Orientation::A ? std::pow(mp.kappa_d / mp.kappa_o, 0.25)
                                         : std::pow(mp.kappa_o / mp.kappa_d, 0.25);
    return q / (1.0 + q);
}

struct SummedDualityCheck {
    Orientation orientation = Orientation::A;
    double p = 0.0;
    double p_dual = 0.0;
    double lhs = 0.0;       // log sum_{configs} w*(config) Z*(config)
    double rhs = 0.0;       // log(2 pi L^2) + |B| log c + log sum w(config) Z(config)
    double residual = 0.0;  // lhs - rhs
};

// Exact summed duality at L=2: both sides enumerate all 256 species
// assignments. The per-bond constant c is the convex combination of
// sqrt-couplings that the bondwise identity produces once the weights are
// regrouped; for the true orientation the residual is machine-zero for every
// p, for the false one it is not.
inline SummedDualityCheck verify_summed_duality(double p, const ModelParams& mp, Orientation o) {
    mp.validate();
    require_unit_normalisation(mp);
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
    const Torus t(2);
    const int nb = t.n_bonds();  // 8
    const double ps = dual_p(p, mp, o);

    SummedDualityCheck chk;
    chk.orientation = o;
    chk.p = p;
    chk.p_dual = ps;

    std::vector<double> star_terms, full_terms;
    star_terms.reserve(1 << nb);
    full_terms.reserve(1 << nb);
    std::vector<std::uint8_t> labels(nb);
    for (int mask = 0; mask < (1 << nb); ++mask) {
        int n_o = 0;
        for (int b = 0; b < nb; ++b) {
            labels[b] = (mask >> b) & 1;
            n_o += labels[b];
        }
        const int n_d = nb - n_o;
        const CouplingConfig c = coupling_from_labels(labels, mp, t);
        // star side, weighted by the dual p
        double lw = 0.0;
        bool dead = false;
        if (n_o > 0) { if (ps <= 0.0) dead = true; else lw += n_o * std::log(ps); }
        if (n_d > 0) { if (ps >= 1.0) dead = true; else lw += n_d * std::log(1.0 - ps); }
        if (!dead) star_terms.push_back(lw + log_partition_star(c, t));
        // full side, weighted by p
        lw = 0.0;
        dead = false;
        if (n_o > 0) { if (p <= 0.0) dead = true; else lw += n_o * std::log(p); }
        if (n_d > 0) { if (p >= 1.0) dead = true; else lw += n_d * std::log(1.0 - p); }
        if (!dead) full_terms.push_back(lw + log_partition(c, t));
    }
    const double c_bond = o == Orientation::A
                              ? ps * std::sqrt(mp.kappa_o) + (1.0 - ps) * std::sqrt(mp.kappa_d)
                              : ps * std::sqrt(mp.kappa_d) + (1.0 - ps) * std::sqrt(mp.kappa_o);
    chk.lhs = log_sum_exp(star_terms);
    chk.rhs = std::log(kTwoPi * t.n_sites()) + nb * std::log(c_bond) + log_sum_exp(full_terms);
    chk.residual = chk.lhs - chk.rhs;
    return chk;
}

struct OrientationAdjudication {
    double worst_a = 0.0;  // max |residual| over the p grid
    double worst_b = 0.0;
    Orientation winner = Orientation::A;
    double winner_self_dual = 0.0;
};

// Runs the exact summed check over a p grid for both orientations and crowns
// the one that holds identically.
inline OrientationAdjudication adjudicate_orientation(const ModelParams& mp,
                                                      const std::vector<double>& p_grid) {
    OrientationAdjudication adj;
    for (double p : p_grid) {
        adj.worst_a = std::max(adj.worst_a, std::abs(verify_summed_duality(p, mp, Orientation::A).residual));
        adj.worst_b = std::max(adj.worst_b, std::abs(verify_summed_duality(p, mp, Orientation::B).residual));
    }
    adj.winner = adj.worst_a <= adj.worst_b ? Orientation::A : Orientation::B;
    adj.winner_self_dual = self_dual_p(mp, adj.winner);
    return adj;
}

}  // namespace gradgibbs
