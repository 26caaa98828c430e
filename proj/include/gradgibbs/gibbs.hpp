#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "gradgibbs/gaussfield.hpp"
#include "gradgibbs/rng.hpp"
#include "gradgibbs/torus.hpp"
#include "gradgibbs/util.hpp"

namespace gradgibbs {

// P(bond carries the stiff species | its gradient value), the single-site
// conditional the species block of the sampler uses:
//   log-odds = log p - log(1-p) - (kappa_o - kappa_d) eta^2 / 2.
// Kept in log space so extreme couplings and p near the endpoints stay exact.
inline double conditional_kappa_prob(double eta_b, const ModelParams& mp) {
    mp.validate();
    if (mp.p <= 0.0) return 0.0;
    if (mp.p >= 1.0) return 1.0;
    const double t =
        std::log(mp.p) - std::log1p(-mp.p) - 0.5 * (mp.kappa_o - mp.kappa_d) * eta_b * eta_b;
    // logistic, saturating cleanly at both ends
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

enum class Init { Ordered, Disordered };

struct ChainState {
    std::vector<std::uint8_t> ordered;  // species labels, the source of truth
    GradientConfig eta;
    long sweep = 0;
};

// One two-block sweep: an exact joint redraw of the gradient given the
// current species, then an independent per-bond species refresh given the
// gradient. Both conditionals are sampled exactly, so the extended measure is
// invariant with no Metropolis correction. Bonds are refreshed in index order
// and the rng is consumed in a fixed order, making runs bit-reproducible.
inline void sweep(ChainState& st, const ModelParams& mp, const Torus& t,
                  GradientSampler& sampler, CounterRng& rng) {
    sampler.refactor(coupling_from_labels(st.ordered, mp, t), t);
    st.eta = sampler.draw(t, rng);
    for (int b = 0; b < t.n_bonds(); ++b) {
        const double q = conditional_kappa_prob(st.eta.eta[b], mp);
        st.ordered[b] = rng.next_uniform() < q ? 1 : 0;
    }
    ++st.sweep;
}

// Axis-aligned window of sites, wrapped on the torus; its bond set is every
// bond with both endpoints inside.
struct Box {
    int x0 = 0, y0 = 0, w = 0, h = 0;
};

inline Box centered_box(const Torus& t, int w, int h) {
    return Box{(t.L() - w) / 2, (t.L() - h) / 2, w, h};
}

// Per-orientation means of eta over the box's bonds; both components are
// normalised by the full bond count of the box, matching the empirical-tilt
// vector the localisation bound is stated for.
inline std::pair<double, double> empirical_tilt(const GradientConfig& g, const Torus& t,
                                                const Box& box) {
    if (box.w < 1 || box.h < 1 || box.w > t.L() || box.h > t.L())
        throw std::invalid_argument("tilt box must fit inside the torus");
    std::vector<std::uint8_t> in(t.n_sites(), 0);
    for (int i = 0; i < box.w; ++i)
        for (int j = 0; j < box.h; ++j) in[t.site(box.x0 + i, box.y0 + j)] = 1;
    std::vector<double> hs, vs;
    int count = 0;
    for (int b = 0; b < t.n_bonds(); ++b) {
        auto [u, v] = t.bond_ends(b);
        if (!in[u] || !in[v]) continue;
        ++count;
        (t.bond_horizontal(b) ? hs : vs).push_back(g.eta[b]);
    }
    if (count == 0) throw std::invalid_argument("tilt box contains no bonds");
    return {pairwise_sum(hs) / count, pairwise_sum(vs) / count};
}

inline int box_bond_count(const Torus& t, const Box& box) {
    std::vector<std::uint8_t> in(t.n_sites(), 0);
    for (int i = 0; i < box.w; ++i)
        for (int j = 0; j < box.h; ++j) in[t.site(box.x0 + i, box.y0 + j)] = 1;
    int count = 0;
    for (int b = 0; b < t.n_bonds(); ++b) {
        auto [u, v] = t.bond_ends(b);
        if (in[u] && in[v]) ++count;
    }
    return count;
}

// Energy density (1/(2|B|)) sum_b kappa_b eta_b^2. With the Gaussian weight
// exp(-1/2 sum kappa eta^2), its fixed-kappa expectation is the exact
// equipartition value (N-1)/(2|B|) for EVERY coupling config -- 3/16 at L=2,
// 63/256 at L=8, approaching 1/4 -- which is what makes it a sharp
// consistency observable for the sampler.
inline double mean_energy(const GradientConfig& g, const std::vector<std::uint8_t>& ordered,
                          const ModelParams& mp, const Torus& t) {
    std::vector<double> terms(t.n_bonds());
    for (int b = 0; b < t.n_bonds(); ++b) {
        const double k = ordered[b] ? mp.kappa_o : mp.kappa_d;
        terms[b] = k * g.eta[b] * g.eta[b];
    }
    return pairwise_sum(terms) / (2.0 * t.n_bonds());
}

struct ObservableRecord {
    long sweep = 0;
    double r_ord = 0.0;      // ordered fraction
    double tilt_x = 0.0;     // box tilt, horizontal component
    double tilt_y = 0.0;
    double energy = 0.0;     // (1/(2|B|)) sum kappa eta^2
    int n_ordered = 0;
};

struct ChainResult {
    std::vector<ObservableRecord> records;  // one per measurement sweep
    ChainState final_state;
};

// Runs burnin + sweeps two-block sweeps from the requested species start
// (gradients are drawn inside the first sweep) and records observables after
// every post-burnin sweep. The stream name keys the rng, so distinct chains
// under one seed are independent and any chain is reproducible in isolation.
inline ChainResult run_chain(const ModelParams& mp, int L, Init init, long sweeps, long burnin,
                             std::uint64_t seed, const std::string& stream,
                             std::optional<Box> tilt_box = std::nullopt) {
    mp.validate();
    if (sweeps < 1 || burnin < 0) throw std::invalid_argument("need sweeps >= 1 and burnin >= 0");
    Torus t(L);
    // default tilt window: the centered half-torus, but never smaller than
    // 2x2 (a single site has no interior bonds)
    const int side = std::max(2, L / 2);
    const Box box = tilt_box.value_or(centered_box(t, side, side));
    CounterRng rng(seed, stream);

    ChainState st;
    st.ordered.assign(t.n_bonds(), init == Init::Ordered ? 1 : 0);
    st.eta.tag = SpaceTag::Full;
    st.eta.eta.assign(t.n_bonds(), 0.0);
    GradientSampler sampler(coupling_from_labels(st.ordered, mp, t), t);

    ChainResult out;
    out.records.reserve(sweeps);
    for (long i = 0; i < burnin + sweeps; ++i) {
        sweep(st, mp, t, sampler, rng);
        if (i < burnin) continue;
        ObservableRecord rec;
        rec.sweep = st.sweep;
        rec.n_ordered = count_ordered(st.ordered);
        rec.r_ord = rec.n_ordered / static_cast<double>(t.n_bonds());
        auto [tx, ty] = empirical_tilt(st.eta, t, box);
        rec.tilt_x = tx;
        rec.tilt_y = ty;
        rec.energy = mean_energy(st.eta, st.ordered, mp, t);
        out.records.push_back(rec);
    }
    out.final_state = std::move(st);
    return out;
}

inline double mean_r_ord(const ChainResult& r) {
    std::vector<double> v(r.records.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = r.records[i].r_ord;
    return pairwise_sum(v) / v.size();
}

// ---------------------------------------------------------------------------
// Order-parameter scan over p with both cold starts.
// ---------------------------------------------------------------------------

struct ScanProtocol {
    long sweeps = 10000;
    long burnin = 1000;
    int n_seeds = 4;
    double threshold = 0.5;  // |chi_ordered - chi_disordered| above this flags hysteresis
};

struct ScanCell {
    double p = 0.0;
    Init init = Init::Ordered;
    int rep = 0;
    double chi = 0.0;  // time-averaged ordered fraction
};

struct ScanReport {
    std::vector<double> p_grid;
    std::vector<ScanCell> cells;
    std::vector<double> chi_ordered;     // per grid point, averaged over reps
    std::vector<double> chi_disordered;
    std::vector<double> chi_mean;        // both inits pooled
    double jump_p = 0.0;     // midpoint of the steepest chi_mean increment
    double jump_size = 0.0;
    bool has_hysteresis = false;
    double hyst_lo = 0.0, hyst_hi = 0.0;
};

// Chains are farmed out to `workers` threads; every cell owns a named rng
// stream keyed by its grid index / init / repeat, so the merged result is
// identical no matter how the pool schedules them.
inline ScanReport scan_p(const ModelParams& base, const std::vector<double>& p_grid, int L,
                         const ScanProtocol& proto, std::uint64_t seed, int workers) {
    if (p_grid.empty()) throw std::invalid_argument("empty p grid");
    if (proto.n_seeds < 1) throw std::invalid_argument("need at least one seed repeat");
    Torus t(L);  // validates L before any thread spins up

    ScanReport rep;
    rep.p_grid = p_grid;
    rep.cells.resize(p_grid.size() * 2 * proto.n_seeds);
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= rep.cells.size()) return;
            const std::size_t pi = c / (2 * proto.n_seeds);
            const int rest = static_cast<int>(c % (2 * proto.n_seeds));
            const Init init = rest % 2 == 0 ? Init::Ordered : Init::Disordered;
            const int repn = rest / 2;
            ModelParams mp = base;
            mp.p = p_grid[pi];
            const std::string stream = "scan:p" + std::to_string(pi) + ":" +
                                       (init == Init::Ordered ? "ord" : "dis") + ":rep" +
                                       std::to_string(repn);
            const ChainResult r = run_chain(mp, L, init, proto.sweeps, proto.burnin, seed, stream);
            rep.cells[c] = ScanCell{mp.p, init, repn, mean_r_ord(r)};
        }
    };
    const int nw = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int i = 0; i < nw - 1; ++i) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    rep.chi_ordered.assign(p_grid.size(), 0.0);
    rep.chi_disordered.assign(p_grid.size(), 0.0);
    rep.chi_mean.assign(p_grid.size(), 0.0);
    for (std::size_t c = 0; c < rep.cells.size(); ++c) {
        const std::size_t pi = c / (2 * proto.n_seeds);
        const auto& cell = rep.cells[c];
        (cell.init == Init::Ordered ? rep.chi_ordered : rep.chi_disordered)[pi] +=
            cell.chi / proto.n_seeds;
    }
    for (std::size_t i = 0; i < p_grid.size(); ++i)
        rep.chi_mean[i] = 0.5 * (rep.chi_ordered[i] + rep.chi_disordered[i]);

    for (std::size_t i = 0; i + 1 < p_grid.size(); ++i) {
        const double d = std::abs(rep.chi_mean[i + 1] - rep.chi_mean[i]);
        if (d > rep.jump_size) {
            rep.jump_size = d;
            rep.jump_p = 0.5 * (p_grid[i] + p_grid[i + 1]);
        }
    }
    bool any = false;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        if (std::abs(rep.chi_ordered[i] - rep.chi_disordered[i]) > proto.threshold) {
            if (!any) lo = p_grid[i];
            hi = p_grid[i];
            any = true;
        }
    }
    rep.has_hysteresis = any;
    rep.hyst_lo = lo;
    rep.hyst_hi = hi;
    return rep;
}

// Concentration bound on the box tilt under the fixed-coupling gradient
// measure: P(|U| >= delta) <= 4 exp(-kappa_min delta^2 |B_box| / 8). Reported
// next to an empirical tail so the check is honest about how loose it is.
inline double tilt_tail_bound(double delta, double kappa_min, int box_bonds) {
    return 4.0 * std::exp(-0.125 * kappa_min * delta * delta * box_bonds);
}

}  // namespace gradgibbs
