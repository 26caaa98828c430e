#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gradgibbs/gaussfield.hpp"
#include "gradgibbs/torus.hpp"
#include "gradgibbs/util.hpp"

namespace gradgibbs {

struct Momentum {
    double k1 = 0.0;
    double k2 = 0.0;
};

// Spectrum of the unweighted lattice Laplacian.
inline double lattice_propagator(Momentum k) {
    return 4.0 - 2.0 * std::cos(k.k1) - 2.0 * std::cos(k.k2);
}

// |1 -+ e^{ik}|^2: the two edge symbols every block below is assembled from.
inline double edge_minus(double k) { return 2.0 - 2.0 * std::cos(k); }
inline double edge_plus(double k) { return 2.0 + 2.0 * std::cos(k); }

// 2x2 block of the mostly-ordered staircase pattern, coupling momenta k and
// k + pi*e1 (the vertical couplings alternate in x, the horizontal ones are
// uniform, so only a pi shift in k1 appears):
//   [ k_o*am + s*bm      d*bm        ]      s = (k_o+k_d)/2, d = (k_o-k_d)/2,
//   [ d*bm               k_o*ap + s*bm ]    am/ap = |1 -+ e^{ik1}|^2, bm = |1-e^{ik2}|^2.
inline double det_pi_uo(Momentum k, const ModelParams& mp) {
    const double s = 0.5 * (mp.kappa_o + mp.kappa_d);
    const double d = 0.5 * (mp.kappa_o - mp.kappa_d);
    const double am = edge_minus(k.k1), ap = edge_plus(k.k1), bm = edge_minus(k.k2);
    return (mp.kappa_o * am + s * bm) * (mp.kappa_o * ap + s * bm) - d * d * bm * bm;
}

// 4x4 block of the parity-alternating pattern in the r = s/d normalisation,
// acting on the momentum orbit (k, k+pi e1, k+pi e2, k+pi(e1+e2)).
inline Eigen::Matrix4d ma_block(Momentum k, double r) {
    const double am = edge_minus(k.k1), ap = edge_plus(k.k1);
    const double bm = edge_minus(k.k2), bp = edge_plus(k.k2);
    Eigen::Matrix4d m;
    m << r * (am + bm), bm,            am,            0.0,
         bm,            r * (ap + bm), 0.0,           ap,
         am,            0.0,           r * (am + bp), bp,
         0.0,           ap,            bp,            r * (ap + bp);
    return m;
}

inline double det_pi_ma_direct(Momentum k, double r) { return ma_block(k, r).determinant(); }

// Closed-form factorization of det ma_block; the direct determinant above is
// the independent cross-check. The (r^2-1) factor carries the kernel vector
// (1,-1,-1,1) that the block acquires at r = 1.
inline double det_pi_ma_closed(Momentum k, double r) {
    const double am = edge_minus(k.k1), ap = edge_plus(k.k1);
    const double bm = edge_minus(k.k2), bp = edge_plus(k.k2);
    const double cross = ap * am - bp * bm;
    const double prod = (ap + bp) * (am + bp) * (ap + bm) * (am + bm);
    return (r * r - 1.0) * (prod * r * r - cross * cross);
}

inline double det_pi_ma(Momentum k, const ModelParams& mp) {
    if (mp.kappa_o == mp.kappa_d)
        throw std::invalid_argument(
            "det_pi_ma: the r-normalised block is undefined for equal couplings");
    return det_pi_ma_closed(k, mp.r());
}

// The physically weighted alternating block (entries carry s and d instead of
// r and 1): equals d^4 * det_pi_ma, but stays finite at equal couplings where
// it degenerates to the homogeneous spectrum product.
inline double det_ma_weighted(Momentum k, const ModelParams& mp) {
    const double s = 0.5 * (mp.kappa_o + mp.kappa_d);
    const double d = 0.5 * (mp.kappa_o - mp.kappa_d);
    const double am = edge_minus(k.k1), ap = edge_plus(k.k1);
    const double bm = edge_minus(k.k2), bp = edge_plus(k.k2);
    Eigen::Matrix4d m;
    m << s * (am + bm), d * bm,        d * am,        0.0,
         d * bm,        s * (ap + bm), 0.0,           d * ap,
         d * am,        0.0,           s * (am + bp), d * bp,
         0.0,           d * ap,        d * bp,        s * (ap + bp);
    return m.determinant();
}

// ---------------------------------------------------------------------------
// Brillouin-zone quadrature: shifted midpoint tensor grid k = 2pi(n+1/2)/M.
// The shift keeps every grid point away from the integrable log singularities
// at the four half-period momenta, and the midpoint rule converges at O(M^-2)
// for these integrands. Rows are pairwise-reduced for reproducibility.
// ---------------------------------------------------------------------------

struct QuadratureSpec {
    int grid = 512;       // starting M
    double tol = 1e-7;    // doubling stops when |F(2M)-F(M)| < tol
    int max_grid = 4096;
};

inline void check_grid(int m) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("quadrature grid must be even and >= 2");
}

template <class F>
double bz_mean(int m, F&& f) {
    check_grid(m);
    std::vector<double> rows(m);
    std::vector<double> row(m);
    for (int n2 = 0; n2 < m; ++n2) {
        const double k2 = kTwoPi * (n2 + 0.5) / m;
        for (int n1 = 0; n1 < m; ++n1) {
            const double k1 = kTwoPi * (n1 + 0.5) / m;
            row[n1] = f(Momentum{k1, k2});
        }
        rows[n2] = pairwise_sum(row);
    }
    return pairwise_sum(rows) / (static_cast<double>(m) * static_cast<double>(m));
}

// The two lattice constants the coexistence gap is stated through:
//   I = mean over the zone of (1/2) log D(k)   (D = lattice_propagator),
//   J = mean over the zone of log|1 - e^{ik1}|.
// The inner k1 integral is done in closed form -- (1/2pi) int log(c - 2cos t) dt
// = log((c + sqrt(c^2-4))/2) for c >= 2 -- and only k2 is midpointed. For J the
// inner integral vanishes identically (c = 2), and doing it this way matters:
// a 2D midpoint rule has an exact bias of log(2)/M for this line-singular
// integrand, far above the accuracy the constants are needed at.
struct BzConstants {
    double I = 0.0, J = 0.0;
    double err_I = 0.0, err_J = 0.0;
    int grid = 0;
};

namespace detail {
inline double chain_log_integral(double c) {
    // (1/2pi) int_{-pi}^{pi} log(c - 2 cos t) dt, valid for c >= 2
    return std::log(0.5 * (c + std::sqrt(c * c - 4.0)));
}
inline std::pair<double, double> constants_at(int m) {
    std::vector<double> ti(m), tj(m);
    for (int n = 0; n < m; ++n) {
        const double k2 = kTwoPi * (n + 0.5) / m;
        ti[n] = chain_log_integral(4.0 - 2.0 * std::cos(k2));
        tj[n] = 0.5 * chain_log_integral(2.0);
    }
    return {0.5 * pairwise_sum(ti) / m, pairwise_sum(tj) / m};
}
}  // namespace detail

inline BzConstants constants_I_J(int m) {
    check_grid(m);
    BzConstants out;
    auto [i0, j0] = detail::constants_at(m / 2 < 2 ? m : m / 2);
    auto [i1, j1] = detail::constants_at(m);
    out.I = i1;
    out.J = j1;
    out.err_I = std::abs(i1 - i0);
    out.err_J = std::abs(j1 - j0);
    out.grid = m;
    return out;
}

// ---------------------------------------------------------------------------
// Pattern free energies.
// ---------------------------------------------------------------------------

struct FreeEnergyReport {
    Pattern pattern = Pattern::O;
    double p = 0.0, kappa_o = 0.0, kappa_d = 0.0;
    bool infinite_volume = true;
    int L = 0;          // set for the finite-torus route
    int grid = 0;       // final quadrature grid for the infinite route
    double value = 0.0;
    double error = 0.0; // grid-doubling estimate (infinite route only)
};

// -(1/L^2) log of the pattern's a-priori weight, i.e. the p-dependent
// prefactor of the free energy. Infinite at the p endpoints whenever the
// pattern uses the vanishing species.
inline double pattern_prefactor(Pattern a, double p) {
    const double inf = std::numeric_limits<double>::infinity();
    auto lg = [&](double w, double arg) {  // -w*log(arg), with the 0 endpoint -> +inf
        if (w == 0.0) return 0.0;
        return arg > 0.0 ? -w * std::log(arg) : inf;
    };
    switch (a) {
        case Pattern::O: return lg(2.0, p);
        case Pattern::D: return lg(2.0, 1.0 - p);
        case Pattern::UO: return lg(1.5, p) + lg(0.5, 1.0 - p);
        case Pattern::UD: return lg(0.5, p) + lg(1.5, 1.0 - p);
        case Pattern::MP:
        case Pattern::MA: return lg(1.0, p) + lg(1.0, 1.0 - p);
    }
    throw std::logic_error("bad pattern enum");
}

namespace detail {

inline double pattern_integrand(Pattern a, const ModelParams& mp, Momentum k) {
    switch (a) {
        case Pattern::O: return 0.5 * std::log(mp.kappa_o * lattice_propagator(k));
        case Pattern::D: return 0.5 * std::log(mp.kappa_d * lattice_propagator(k));
        case Pattern::MP:
            return 0.5 * std::log(mp.kappa_o * edge_minus(k.k1) + mp.kappa_d * edge_minus(k.k2));
        case Pattern::UO: return 0.25 * std::log(det_pi_uo(k, mp));
        case Pattern::UD: {
            ModelParams sw = mp;  // the mostly-disordered staircase is the
            std::swap(sw.kappa_o, sw.kappa_d);  // kappa-swapped mostly-ordered one
            return 0.25 * std::log(det_pi_uo(k, sw));
        }
        case Pattern::MA:
            if (mp.kappa_o == mp.kappa_d) return 0.125 * std::log(det_ma_weighted(k, mp));
            {
                const double d = 0.5 * (mp.kappa_o - mp.kappa_d);
                return 0.125 * (4.0 * std::log(d) + std::log(det_pi_ma_closed(k, mp.r())));
            }
    }
    throw std::logic_error("bad pattern enum");
}

}  // namespace detail

// The p-independent part of a pattern's infinite-volume free energy: the
// Brillouin-zone mean of its log-determinant density, with the grid doubled
// until the change drops below tol (the change is the reported error).
// Splitting this from the prefactor lets a p-sweep reuse one integral.
struct ZoneIntegral {
    double value = 0.0;
    int grid = 0;
    double error = 0.0;
};

inline ZoneIntegral pattern_zone_integral(Pattern a, const ModelParams& mp,
                                          QuadratureSpec q = {}) {
    mp.validate();
    check_grid(q.grid);
    auto f = [&](Momentum k) { return detail::pattern_integrand(a, mp, k); };
    int m = q.grid;
    double v = bz_mean(m, f);
    double err;
    if (m >= q.max_grid) {
        int half = m / 2;
        if (half % 2 != 0) ++half;  // keep the comparison grid even
        err = half >= 2 ? std::abs(v - bz_mean(half, f)) : std::numeric_limits<double>::infinity();
    } else {
        err = std::numeric_limits<double>::infinity();
        while (m < q.max_grid) {
            const double v2 = bz_mean(2 * m, f);
            err = std::abs(v2 - v);
            v = v2;
            m *= 2;
            if (err < q.tol) break;
        }
    }
    return {v, m, err};
}

// Infinite-volume free energy of a pattern: p-prefactor plus the zone
// integral above.
inline FreeEnergyReport infinite_free_energy(Pattern a, const ModelParams& mp,
                                             QuadratureSpec q = {}) {
    mp.validate();
    check_grid(q.grid);
    FreeEnergyReport rep;
    rep.pattern = a;
    rep.p = mp.p;
    rep.kappa_o = mp.kappa_o;
    rep.kappa_d = mp.kappa_d;
    rep.infinite_volume = true;

    const double pre = pattern_prefactor(a, mp.p);
    if (std::isinf(pre)) {
        rep.value = pre;
        rep.grid = q.grid;
        rep.error = 0.0;
        return rep;
    }
    const ZoneIntegral zi = pattern_zone_integral(a, mp, q);
    rep.value = pre + zi.value;
    rep.grid = zi.grid;
    rep.error = zi.error;
    return rep;
}

// ---------------------------------------------------------------------------
// Finite-torus free energy by momentum sums. For any of the six patterns the
// couplings are 2-periodic with the horizontal field constant in x and the
// vertical field constant in y, so momentum space splits into orbits
// {k, k+pi e1, k+pi e2, k+pi(e1+e2)} coupled by a real symmetric 4x4 block.
// ---------------------------------------------------------------------------

namespace detail {

struct ParityCoefficients {
    // c_hor[q2] = (1/L^2) sum_x kappa_hor(x) e^{i pi q2 x2}; the q1 = pi
    // component must vanish (and symmetrically for vertical), which holds for
    // every pattern handled here -- checked at build time.
    double hor[2] = {0.0, 0.0};
    double vert[2] = {0.0, 0.0};
};

inline ParityCoefficients parity_coefficients(const CouplingConfig& c, const Torus& t) {
    double h[2][2] = {{0, 0}, {0, 0}};  // [q1][q2]
    double v[2][2] = {{0, 0}, {0, 0}};
    for (int b = 0; b < t.n_bonds(); ++b) {
        const int s = t.bond_site(b);
        const int x = t.site_x(s), y = t.site_y(s);
        for (int q1 = 0; q1 < 2; ++q1)
            for (int q2 = 0; q2 < 2; ++q2) {
                const double ph = ((q1 & x) ^ (q2 & y)) & 1 ? -1.0 : 1.0;
                (t.bond_horizontal(b) ? h : v)[q1][q2] += ph * c.kappa[b];
            }
    }
    const double norm = 1.0 / t.n_sites();
    const double tolc = 1e-9 * t.n_sites();
    if (std::abs(h[1][0]) > tolc || std::abs(h[1][1]) > tolc || std::abs(v[0][1]) > tolc ||
        std::abs(v[1][1]) > tolc)
        throw std::invalid_argument(
            "momentum route needs horizontal couplings constant in x and vertical ones constant "
            "in y");
    ParityCoefficients out;
    out.hor[0] = h[0][0] * norm;
    out.hor[1] = h[0][1] * norm;
    out.vert[0] = v[0][0] * norm;
    out.vert[1] = v[1][0] * norm;
    return out;
}

}  // namespace detail

// The 4x4 block on the orbit of grid momentum n = (n1, n2); entry (i, j)
// couples momenta m_i = 2pi n/L + pi j_i and m_j, picking up the parity
// Fourier coefficient of each orientation's coupling field and the edge
// symbol of the shared momentum component. The +1 pins the zero mode.
inline Eigen::Matrix4d momentum_block(const CouplingConfig& c, const Torus& t, int n1, int n2) {
    const auto pc = detail::parity_coefficients(c, t);
    const int L = t.L();
    const std::array<std::array<int, 2>, 4> par = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) {
        const int a1 = (n1 + par[i][0] * L / 2) % L;
        const int a2 = (n2 + par[i][1] * L / 2) % L;
        const double m1 = kTwoPi * a1 / L, m2 = kTwoPi * a2 / L;
        for (int j = 0; j < 4; ++j) {
            const int q1 = par[i][0] ^ par[j][0];
            const int q2 = par[i][1] ^ par[j][1];
            double e = 0.0;
            if (q1 == 0) e += pc.hor[q2] * edge_minus(m1);
            if (q2 == 0) e += pc.vert[q1] * edge_minus(m2);
            if (i == j && a1 == 0 && a2 == 0) e += 1.0;  // zero-mode pin
            m(i, j) = e;
        }
    }
    return m;
}

// Finite-torus pattern free energy:
//   F = -(1/L^2) [ log L + N_O log p + N_D log(1-p) - (1/2) sum_orbits log det block ].
// The log L is the zero-mode volume factor that relates the pinned-height
// normalisation to the momentum product; the independent dense-Cholesky route
// (log_partition) pins its sign and size in the tests.
inline FreeEnergyReport finite_free_energy(Pattern a, const ModelParams& mp, int L) {
    mp.validate();
    Torus t(L);
    FreeEnergyReport rep;
    rep.pattern = a;
    rep.p = mp.p;
    rep.kappa_o = mp.kappa_o;
    rep.kappa_d = mp.kappa_d;
    rep.infinite_volume = false;
    rep.L = L;

    const auto mask = pattern_ordered_mask(a, t);
    const int n_o = count_ordered(mask);
    const int n_d = t.n_bonds() - n_o;
    if ((n_o > 0 && mp.p <= 0.0) || (n_d > 0 && mp.p >= 1.0)) {
        rep.value = std::numeric_limits<double>::infinity();
        return rep;
    }

    const CouplingConfig c = pattern_coupling(a, mp, t);
    std::vector<double> logs;
    logs.reserve(L * L / 4);
    for (int n1 = 0; n1 < L / 2; ++n1)
        for (int n2 = 0; n2 < L / 2; ++n2)
            logs.push_back(std::log(momentum_block(c, t, n1, n2).determinant()));

    double logz = std::log(static_cast<double>(L)) - 0.5 * pairwise_sum(logs);
    if (n_o > 0) logz += n_o * std::log(mp.p);
    if (n_d > 0) logz += n_d * std::log(1.0 - mp.p);
    rep.value = -logz / t.n_sites();
    return rep;
}

// ---------------------------------------------------------------------------
// Coexistence-gap certificate and the two-phase crossing point.
// ---------------------------------------------------------------------------

struct GapReport {
    std::array<double, 6> f{};  // free energies in all_patterns order
    double lhs = 0.0;           // min over mixed patterns - min(F_O, F_D)
    double rhs = 0.0;           // (1/8) log(k_o/k_d) + (1/4) log(1 - k_d/k_o) + (J - I)
    double margin = 0.0;
    bool holds = false;
    double I = 0.0, J = 0.0;
    int grid = 0;
    double error = 0.0;  // worst per-pattern quadrature estimate
};

inline GapReport gap_check(const ModelParams& mp, QuadratureSpec q = {}) {
    mp.validate();
    GapReport rep;
    double err = 0.0;
    int grid = 0;
    for (std::size_t i = 0; i < all_patterns.size(); ++i) {
        const auto r = infinite_free_energy(all_patterns[i], mp, q);
        rep.f[i] = r.value;
        if (std::isfinite(r.value)) {
            err = std::max(err, r.error);
            grid = std::max(grid, r.grid);
        }
    }
    const double pure = std::min(rep.f[0], rep.f[1]);
    const double mixed = std::min(std::min(rep.f[2], rep.f[3]), std::min(rep.f[4], rep.f[5]));
    const auto c = constants_I_J(std::max(q.grid, 2048));
    rep.I = c.I;
    rep.J = c.J;
    rep.lhs = mixed - pure;
    rep.rhs = 0.125 * std::log(mp.ratio()) + 0.25 * std::log(1.0 - mp.xi()) + (c.J - c.I);
    rep.margin = rep.lhs - rep.rhs;
    rep.holds = rep.lhs >= rep.rhs;
    rep.grid = grid;
    rep.error = err;
    return rep;
}

// p at which the two homogeneous free energies cross: the zone integrals
// cancel and only p/(1-p) = (k_o/k_d)^{1/4} survives.
inline double crossing_p(const ModelParams& mp) {
    mp.validate();
    const double tq = std::pow(mp.ratio(), 0.25);
    return tq / (1.0 + tq);
}

}  // namespace gradgibbs
