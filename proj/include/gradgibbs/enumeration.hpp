#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradgibbs/gaussfield.hpp"
#include "gradgibbs/torus.hpp"
#include "gradgibbs/util.hpp"

namespace gradgibbs {

// Everything in this header is exact: on the 2x2 torus the species field has
// 8 bonds, so the full mixture over 256 label configs is summable directly
// (each term weighs a Gaussian partition function or covariance). These
// numbers are the reference the Monte Carlo sampler and the weight-duality
// orientation are judged against.

inline constexpr int kEnumL = 2;
inline constexpr int kEnumBonds = 8;
inline constexpr int kEnumConfigs = 256;

// Arrangement of species on a plaquette, coded as 4 bits in boundary order
// (bottom, right, top, left), bit set = ordered bond.
inline int plaquette_code(const Torus& t, const std::vector<std::uint8_t>& labels, int q) {
    const auto pb = t.plaquette(q);
    int code = 0;
    for (int i = 0; i < 4; ++i) code |= (labels[pb[i]] ? 1 : 0) << i;
    return code;
}

inline bool code_mixed(int code) { return code != 0 && code != 15; }

// The arrangement seen at plaquette x when arrangement `code` at the origin
// plaquette is disseminated by reflections: odd horizontal position swaps the
// two vertical sides (left/right), odd vertical position swaps bottom/top.
inline int reflect_code(int code, int x1, int x2) {
    const int bottom = code & 1, right = (code >> 1) & 1, top = (code >> 2) & 1,
              left = (code >> 3) & 1;
    const int b2 = (x2 % 2) ? top : bottom;
    const int t2 = (x2 % 2) ? bottom : top;
    const int r2 = (x1 % 2) ? left : right;
    const int l2 = (x1 % 2) ? right : left;
    return b2 | (r2 << 1) | (t2 << 2) | (l2 << 3);
}

// The unique global config showing code's reflected copies on every
// plaquette: horizontal bonds take the bottom/top species by row parity,
// vertical ones the left/right species by column parity.
inline std::vector<std::uint8_t> disseminate_code(int code, const Torus& t) {
    std::vector<std::uint8_t> labels(t.n_bonds());
    const int bottom = code & 1, right = (code >> 1) & 1, top = (code >> 2) & 1,
              left = (code >> 3) & 1;
    for (int b = 0; b < t.n_bonds(); ++b) {
        const int s = t.bond_site(b);
        if (t.bond_horizontal(b))
            labels[b] = (t.site_y(s) % 2 == 0) ? bottom : top;
        else
            labels[b] = (t.site_x(s) % 2 == 0) ? left : right;
    }
    return labels;
}

struct ExactSummary {
    double p = 0.0, kappa_o = 0.0, kappa_d = 0.0;
    double log_z = 0.0;       // log sum_configs w(config) Z(config), FULL space
    double log_z_star = 0.0;  // same with STAR partition functions
    std::array<double, kEnumBonds> ordered_marginal{};  // P(bond is ordered)
    double chi = 0.0;                                   // E[R], R = N_O / 8
    double r_one_minus_r = 0.0;                         // E[R(1-R)]
    std::array<double, kEnumBonds> bond_energy{};       // E[kappa_b eta_b^2]
    // E[(1/(2*8)) sum_b kappa_b eta_b^2]: equipartition makes this exactly
    // (N-1)/(2|B|) = 3/16 for every parameter choice
    double mean_energy = 0.0;
    std::array<double, 6> pattern_plaquette_prob{};     // origin plaquette shows the pattern
    std::array<double, 6> pattern_global_prob{};        // whole torus is the disseminated pattern
    double bad_plaquette_prob = 0.0;                    // origin plaquette is mixed
    double bad_global_prob = 0.0;                       // every plaquette is mixed
};

namespace detail {

struct EnumTables {
    // per config: log weight (p-part + log Z), N_O, plaquette codes, energies
    std::vector<double> log_w_full;       // N_O log p + N_D log(1-p) + log Z(config)
    std::vector<double> log_w_star;       // same with log Z*(config)
    std::vector<int> n_ordered;
    std::vector<std::array<int, 4>> codes;
    std::vector<std::array<double, kEnumBonds>> energy;  // kappa_b * Var(eta_b | config)
};

inline EnumTables enum_tables(const ModelParams& mp) {
    mp.validate();
    const Torus t(kEnumL);
    EnumTables tab;
    tab.log_w_full.resize(kEnumConfigs);
    tab.log_w_star.resize(kEnumConfigs);
    tab.n_ordered.resize(kEnumConfigs);
    tab.codes.resize(kEnumConfigs);
    tab.energy.resize(kEnumConfigs);
    std::vector<std::uint8_t> labels(kEnumBonds);
    const double ninf = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < kEnumConfigs; ++mask) {
        int n_o = 0;
        for (int b = 0; b < kEnumBonds; ++b) {
            labels[b] = (mask >> b) & 1;
            n_o += labels[b];
        }
        const int n_d = kEnumBonds - n_o;
        tab.n_ordered[mask] = n_o;
        for (int q = 0; q < 4; ++q) tab.codes[mask][q] = plaquette_code(t, labels, q);

        double lp = 0.0;
        if (n_o > 0) lp = mp.p > 0.0 ? lp + n_o * std::log(mp.p) : ninf;
        if (n_d > 0 && std::isfinite(lp))
            lp = mp.p < 1.0 ? lp + n_d * std::log(1.0 - mp.p) : ninf;
        if (std::isfinite(lp)) {
            const CouplingConfig c = coupling_from_labels(labels, mp, t);
            tab.log_w_full[mask] = lp + log_partition(c, t);
            tab.log_w_star[mask] = lp + log_partition_star(c, t);
            const PinnedPrecision K(c, t);
            const auto var = bond_variances(K, t);
            for (int b = 0; b < kEnumBonds; ++b) tab.energy[mask][b] = c.kappa[b] * var[b];
        } else {
            tab.log_w_full[mask] = ninf;
            tab.log_w_star[mask] = ninf;
            tab.energy[mask].fill(0.0);
        }
    }
    return tab;
}

}  // namespace detail

inline ExactSummary enumerate_exact(const ModelParams& mp) {
    const Torus t(kEnumL);
    const auto tab = detail::enum_tables(mp);
    ExactSummary out;
    out.p = mp.p;
    out.kappa_o = mp.kappa_o;
    out.kappa_d = mp.kappa_d;
    out.log_z = log_sum_exp(tab.log_w_full);
    out.log_z_star = log_sum_exp(tab.log_w_star);

    std::array<int, 6> canon{};
    for (std::size_t a = 0; a < all_patterns.size(); ++a)
        canon[a] = plaquette_code(t, pattern_ordered_mask(all_patterns[a], t), 0);
    std::array<int, 6> canon_global_mask{};
    for (std::size_t a = 0; a < all_patterns.size(); ++a) {
        const auto m = pattern_ordered_mask(all_patterns[a], t);
        int mask = 0;
        for (int b = 0; b < kEnumBonds; ++b) mask |= (m[b] ? 1 : 0) << b;
        canon_global_mask[a] = mask;
    }

    for (int mask = 0; mask < kEnumConfigs; ++mask) {
        const double w = std::exp(tab.log_w_full[mask] - out.log_z);
        if (w == 0.0) continue;
        const double r = tab.n_ordered[mask] / static_cast<double>(kEnumBonds);
        out.chi += w * r;
        out.r_one_minus_r += w * r * (1.0 - r);
        for (int b = 0; b < kEnumBonds; ++b) {
            if ((mask >> b) & 1) out.ordered_marginal[b] += w;
            out.bond_energy[b] += w * tab.energy[mask][b];
        }
        for (std::size_t a = 0; a < all_patterns.size(); ++a) {
            if (tab.codes[mask][0] == canon[a]) out.pattern_plaquette_prob[a] += w;
            if (mask == canon_global_mask[a]) out.pattern_global_prob[a] += w;
        }
        if (code_mixed(tab.codes[mask][0])) out.bad_plaquette_prob += w;
        bool all_mixed = true;
        for (int q = 0; q < 4; ++q) all_mixed = all_mixed && code_mixed(tab.codes[mask][q]);
        if (all_mixed) out.bad_global_prob += w;
    }
    {
        std::vector<double> e(out.bond_energy.begin(), out.bond_energy.end());
        out.mean_energy = pairwise_sum(e) / (2.0 * kEnumBonds);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Chessboard estimate, checked exactly. An event is a set of arrangements; a
// placement pins a (reflection-disseminated copy of an) event to a plaquette.
// ---------------------------------------------------------------------------

struct PlaquetteEvent {
    std::string name;
    std::array<std::uint8_t, 16> member{};  // indicator over arrangement codes
};

inline PlaquetteEvent pattern_event(Pattern a) {
    const Torus t(kEnumL);
    PlaquetteEvent ev;
    ev.name = pattern_name(a);
    ev.member.fill(0);
    ev.member[plaquette_code(t, pattern_ordered_mask(a, t), 0)] = 1;
    return ev;
}

inline PlaquetteEvent mixed_event() {
    PlaquetteEvent ev;
    ev.name = "mixed";
    for (int c = 0; c < 16; ++c) ev.member[c] = code_mixed(c) ? 1 : 0;
    return ev;
}

inline PlaquetteEvent whole_event() {
    PlaquetteEvent ev;
    ev.name = "all";
    ev.member.fill(1);
    return ev;
}

namespace detail {

// P(every requested plaquette shows its event, reflected by position parity).
inline double placement_probability(const EnumTables& tab, double log_z,
                                    const std::vector<std::pair<int, const PlaquetteEvent*>>& pl,
                                    const Torus& t) {
    std::vector<double> terms;
    for (int mask = 0; mask < kEnumConfigs; ++mask) {
        if (!std::isfinite(tab.log_w_full[mask])) continue;
        bool ok = true;
        for (const auto& [q, ev] : pl) {
            const int x1 = t.site_x(q), x2 = t.site_y(q);
            // membership of the observed code in the disseminated copy of ev:
            // reflecting the observed code back by the same parity is the
            // same test, since the parity reflection is an involution.
            if (!ev->member[reflect_code(tab.codes[mask][q], x1, x2)]) {
                ok = false;
                break;
            }
        }
        if (ok) terms.push_back(tab.log_w_full[mask] - log_z);
    }
    if (terms.empty()) return 0.0;
    return std::exp(log_sum_exp(terms));
}

}  // namespace detail

struct ChessboardRow {
    std::string description;
    double lhs = 0.0;  // placement probability
    double rhs = 0.0;  // product of chessboard values
    bool ok = false;   // lhs <= rhs + tol
};

struct ChessboardReport {
    std::vector<ChessboardRow> rows;
    std::array<double, 6> z_pattern{};  // chessboard value of each pattern event
    double z_mixed = 0.0;               // chessboard value of the mixed class
    double sum_z_mixed_singletons = 0.0;
    bool subadditive_ok = false;  // z(mixed) <= sum over its singletons
    double r_one_minus_r = 0.0;
    double ratio_to_z_mixed = 0.0;  // E[R(1-R)] / z(mixed)
    bool all_hold = true;
};

// Verifies, by exact enumeration, the multi-placement chessboard bound
//   P(intersection of placed events) <= prod_j z(event_j),
//   z(A) = P(all plaquettes show A's disseminated copies)^{1/4},
// for all single and paired placements of the six pattern events and the
// mixed class, plus subadditivity of z over the mixed class and the bound
// E[R(1-R)] <= (arrangements) * z(mixed) used by the phase-separation line.
inline ChessboardReport chessboard_check(const ModelParams& mp, double tol = 1e-12) {
    const Torus t(kEnumL);
    const auto tab = detail::enum_tables(mp);
    const double log_z = log_sum_exp(tab.log_w_full);

    std::vector<PlaquetteEvent> events;
    for (Pattern a : all_patterns) events.push_back(pattern_event(a));
    events.push_back(mixed_event());

    auto z_of = [&](const PlaquetteEvent& ev) {
        std::vector<std::pair<int, const PlaquetteEvent*>> pl;
        for (int q = 0; q < t.n_plaquettes(); ++q) pl.emplace_back(q, &ev);
        return std::pow(detail::placement_probability(tab, log_z, pl, t),
                        1.0 / t.n_plaquettes());
    };

    ChessboardReport rep;
    std::vector<double> z(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) z[i] = z_of(events[i]);
    for (int i = 0; i < 6; ++i) rep.z_pattern[i] = z[i];
    rep.z_mixed = z.back();

    auto push_row = [&](std::string desc, double lhs, double rhs) {
        rep.rows.push_back({std::move(desc), lhs, rhs, lhs <= rhs + tol});
        rep.all_hold = rep.all_hold && rep.rows.back().ok;
    };

    // single placements, every position
    for (std::size_t i = 0; i < events.size(); ++i)
        for (int q = 0; q < t.n_plaquettes(); ++q) {
            const double lhs =
                detail::placement_probability(tab, log_z, {{q, &events[i]}}, t);
            push_row(events[i].name + "@" + std::to_string(q), lhs, z[i]);
        }
    // paired placements, every unordered pair of distinct positions
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i; j < events.size(); ++j)
            for (int q1 = 0; q1 < t.n_plaquettes(); ++q1)
                for (int q2 = q1 + 1; q2 < t.n_plaquettes(); ++q2) {
                    const double lhs = detail::placement_probability(
                        tab, log_z, {{q1, &events[i]}, {q2, &events[j]}}, t);
                    push_row(events[i].name + "@" + std::to_string(q1) + "+" + events[j].name +
                                 "@" + std::to_string(q2),
                             lhs, z[i] * z[j]);
                }
    // the trivial event gives equality, a useful sharpness anchor
    {
        const PlaquetteEvent all = whole_event();
        const double lhs = detail::placement_probability(tab, log_z, {{0, &all}}, t);
        push_row("all@0 (equality)", lhs, z_of(all));
    }
    // full placement of a pattern event reproduces z^4 exactly
    {
        std::vector<std::pair<int, const PlaquetteEvent*>> pl;
        for (int q = 0; q < t.n_plaquettes(); ++q) pl.emplace_back(q, &events[0]);
        const double lhs = detail::placement_probability(tab, log_z, pl, t);
        push_row("O disseminated (equality)", lhs, std::pow(z[0], 4));
        rep.rows.back().ok = std::abs(lhs - std::pow(z[0], 4)) <= tol;
        rep.all_hold = rep.all_hold && rep.rows.back().ok;
    }

    // subadditivity of the chessboard value over the mixed class
    std::vector<double> zs;
    for (int c = 0; c < 16; ++c)
        if (code_mixed(c)) {
            PlaquetteEvent ev;
            ev.name = "code" + std::to_string(c);
            ev.member.fill(0);
            ev.member[c] = 1;
            zs.push_back(z_of(ev));
        }
    rep.sum_z_mixed_singletons = pairwise_sum(zs);
    rep.subadditive_ok = rep.z_mixed <= rep.sum_z_mixed_singletons + tol;
    rep.all_hold = rep.all_hold && rep.subadditive_ok;

    const auto summary = enumerate_exact(mp);
    rep.r_one_minus_r = summary.r_one_minus_r;
    rep.ratio_to_z_mixed = rep.z_mixed > 0.0
                               ? rep.r_one_minus_r / rep.z_mixed
                               : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace gradgibbs
