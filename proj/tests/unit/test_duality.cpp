#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gradgibbs/duality.hpp"
#include "gradgibbs/rng.hpp"

using namespace gradgibbs;

namespace {

CouplingConfig two_state_config(const Torus& t, const ModelParams& mp, CounterRng& rng) {
    std::vector<std::uint8_t> labels(t.n_bonds());
    for (auto& l : labels) l = rng.next_uniform() < 0.5 ? 1 : 0;
    return coupling_from_labels(labels, mp, t);
}

}  // namespace

TEST_CASE("coupling inversion is an involution across the crossing map") {
    Torus t(4);
    CounterRng rng(2, "dual-inv");
    CouplingConfig c;
    c.kappa.resize(t.n_bonds());
    for (auto& k : c.kappa) k = std::exp(4.0 * (rng.next_uniform() - 0.5));
    const CouplingConfig dd = dual_coupling(dual_coupling(c, t), t);
    for (int b = 0; b < t.n_bonds(); ++b)
        CHECK(dd.kappa[b] == Catch::Approx(c.kappa[b]).epsilon(1e-15));
    // the dual of a horizontal bond's coupling lands on its crossing partner
    const int b = t.bond(1, 2, 0);
    const CouplingConfig d1 = dual_coupling(c, t);
    CHECK(d1.kappa[t.dual_bond(b)] == 1.0 / c.kappa[b]);
}

TEST_CASE("fixed-coupling duality identity, homogeneous couplings") {
    for (int L : {2, 4, 8}) {
        Torus t(L);
        for (double kappa : {1.0, 0.3, 7.0}) {
            CouplingConfig c;
            c.kappa.assign(t.n_bonds(), kappa);
            const DualityReport rep = verify_z_rep(c, t);
            CHECK(std::abs(rep.residual) < 1e-10);
            CHECK(rep.L == L);
        }
    }
}

TEST_CASE("fixed-coupling duality identity, two-state and continuous couplings") {
    const ModelParams mp{0.5, 100.0, 0.01};
    for (int L : {2, 4, 8}) {
        Torus t(L);
        CounterRng rng(40 + L, "dual-twostate");
        for (int rep_i = 0; rep_i < 10; ++rep_i) {
            const CouplingConfig c = two_state_config(t, mp, rng);
            CHECK(std::abs(verify_z_rep(c, t).residual) < 1e-8);
        }
        CounterRng rng2(60 + L, "dual-cont");
        for (int rep_i = 0; rep_i < 5; ++rep_i) {
            CouplingConfig c;
            c.kappa.resize(t.n_bonds());
            for (auto& k : c.kappa) k = std::exp(std::log(0.1) + std::log(100.0) * rng2.next_uniform());
            CHECK(std::abs(verify_z_rep(c, t).residual) < 1e-8);
        }
    }
}

TEST_CASE("digest is a stable function of the numbers") {
    Torus t(2);
    CouplingConfig a, b;
    a.kappa.assign(8, 1.0);
    b.kappa.assign(8, 1.0);
    CHECK(coupling_digest(a) == coupling_digest(b));
    b.kappa[7] = 2.0;
    CHECK(coupling_digest(a) != coupling_digest(b));
    CHECK(coupling_digest(a).size() == 16);
}

TEST_CASE("weight map algebra on p") {
    const ModelParams mp{0.5, 100.0, 0.01};
    ModelParams bad{0.5, 100.0, 0.02};
    CHECK_THROWS_AS(dual_p(0.5, bad, Orientation::A), std::invalid_argument);

    for (Orientation o : {Orientation::A, Orientation::B}) {
        for (double p : {0.1, 0.25, 0.5, 0.77, 0.9}) {
            const double ps = dual_p(p, mp, o);
            CHECK(dual_p(ps, mp, o) == Catch::Approx(p).margin(1e-12));
            const double base = o == Orientation::A ? std::sqrt(mp.kappa_d / mp.kappa_o)
                                                    : std::sqrt(mp.kappa_o / mp.kappa_d);
            CHECK((p / (1 - p)) * (ps / (1 - ps)) == Catch::Approx(base).epsilon(1e-10));
        }
        CHECK(dual_p(0.0, mp, o) == 1.0);
        CHECK(dual_p(1.0, mp, o) == 0.0);
        const double sd = self_dual_p(mp, o);
        CHECK(dual_p(sd, mp, o) == Catch::Approx(sd).margin(1e-12));
    }
    // the two fixed points are mirror images
    CHECK(self_dual_p(mp, Orientation::A) + self_dual_p(mp, Orientation::B) ==
          Catch::Approx(1.0).margin(1e-14));
    CHECK(self_dual_p(mp, Orientation::B) == Catch::Approx(10.0 / 11.0).margin(1e-12));
}

TEST_CASE("summed duality at equal couplings holds for both orientations") {
    const ModelParams eq{0.5, 1.0, 1.0};
    for (Orientation o : {Orientation::A, Orientation::B}) {
        for (double p : {0.2, 0.5, 0.8}) {
            const SummedDualityCheck chk = verify_summed_duality(p, eq, o);
            CHECK(std::abs(chk.residual) < 1e-9);
            CHECK(chk.p_dual == Catch::Approx(1.0 - p).margin(1e-14));
        }
    }
}

TEST_CASE("summed duality adjudication: exactly one orientation is an identity") {
    const ModelParams mp{0.5, 100.0, 0.01};
    const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    const OrientationAdjudication adj = adjudicate_orientation(mp, grid);
    // one orientation holds to rounding, the other misses by a mile
    const double worst_win = std::min(adj.worst_a, adj.worst_b);
    const double worst_lose = std::max(adj.worst_a, adj.worst_b);
    CHECK(worst_win < 1e-9);
    CHECK(worst_lose > 1e-3);
    CHECK(adj.winner == Orientation::B);
    // and the winner's fixed point is the spin-wave crossing of the two
    // homogeneous phases
    CHECK(adj.winner_self_dual == Catch::Approx(crossing_p(mp)).margin(1e-12));

    SECTION("the winning identity also holds at the p endpoints") {
        for (double p : {0.0, 1.0}) {
            const SummedDualityCheck chk = verify_summed_duality(p, mp, adj.winner);
            CHECK(std::abs(chk.residual) < 1e-9);
        }
    }
}
