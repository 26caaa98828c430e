#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gradgibbs/rng.hpp"
#include "gradgibbs/torus.hpp"
#include "gradgibbs/util.hpp"

namespace gradgibbs {

inline constexpr int kDenseMaxL = 48;  // dense factorizations stay cheap up to here
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

inline void check_coupling(const CouplingConfig& c, const Torus& t) {
    if (static_cast<int>(c.kappa.size()) != t.n_bonds())
        throw std::invalid_argument("coupling config size mismatch");
    for (double k : c.kappa)
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("couplings must be positive and finite");
}

// Precision matrix of the height field pinned at the origin: the weighted
// graph Laplacian of the torus with the origin row and column removed.
// Coordinate i corresponds to site i+1. The Gaussian with this precision is
// exactly the gradient measure on the FULL constraint space, parameterised by
// heights.
class PinnedPrecision {
public:
    PinnedPrecision(const CouplingConfig& c, const Torus& t) : n_(t.n_sites() - 1) {
        check_coupling(c, t);
        if (t.L() > kDenseMaxL)
            throw std::invalid_argument("dense factorization supported up to L=" +
                                        std::to_string(kDenseMaxL));
        mat_ = Eigen::MatrixXd::Zero(n_, n_);
        for (int b = 0; b < t.n_bonds(); ++b) {
            auto [u, v] = t.bond_ends(b);
            const double k = c.kappa[b];
            if (u != 0) mat_(u - 1, u - 1) += k;
            if (v != 0) mat_(v - 1, v - 1) += k;
            if (u != 0 && v != 0) {
                mat_(u - 1, v - 1) -= k;
                mat_(v - 1, u - 1) -= k;
            }
        }
        llt_.compute(mat_);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("pinned precision matrix is not positive definite");
    }

    int dim() const { return n_; }
    const Eigen::MatrixXd& matrix() const { return mat_; }

    // log det via the Cholesky diagonal, pairwise-accumulated: this is the
    // numerically pinned-down route every partition function goes through.
    double log_det() const {
        std::vector<double> logs(n_);
        const auto d = llt_.matrixLLT().diagonal();
        for (int i = 0; i < n_; ++i) logs[i] = std::log(d(i));
        return 2.0 * pairwise_sum(logs);
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

    // Full covariance (inverse). Fine for the small lattices the exact
    // summaries and variance checks run on.
    Eigen::MatrixXd covariance() const {
        return llt_.solve(Eigen::MatrixXd::Identity(n_, n_));
    }

private:
    int n_;
    Eigen::MatrixXd mat_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

// log of integral exp(-1/2 sum_b kappa_b eta_b^2) over the pinned-height
// (FULL) space: ((N-1)/2) log 2pi - 1/2 log det K.
inline double log_partition(const CouplingConfig& c, const Torus& t) {
    PinnedPrecision K(c, t);
    return 0.5 * K.dim() * std::log(kTwoPi) - 0.5 * K.log_det();
}

// Precision over the STAR space, parameterised by (phi_{x != 0}, S, T) with
// eta_b = grad phi_b + S/L^2 on horizontal bonds and + T/L^2 on vertical
// ones; S and T are the two winding sums. Built as a sum of rank-one terms
// kappa_b D_b D_b^T, so the phi-phi block reproduces PinnedPrecision exactly.
class StarPrecision {
public:
    StarPrecision(const CouplingConfig& c, const Torus& t) : n_(t.n_sites() + 1) {
        check_coupling(c, t);
        if (t.L() > kDenseMaxL)
            throw std::invalid_argument("dense factorization supported up to L=" +
                                        std::to_string(kDenseMaxL));
        const int N = t.n_sites();
        const double w = 1.0 / static_cast<double>(N);
        mat_ = Eigen::MatrixXd::Zero(n_, n_);
        // coordinates: 0..N-2 are phi_{site i+1}; N-1 is S; N is T.
        int idx[3];
        double coef[3];
        for (int b = 0; b < t.n_bonds(); ++b) {
            auto [u, v] = t.bond_ends(b);
            int m = 0;
            if (v != 0) { idx[m] = v - 1; coef[m] = +1.0; ++m; }
            if (u != 0) { idx[m] = u - 1; coef[m] = -1.0; ++m; }
            idx[m] = t.bond_horizontal(b) ? N - 1 : N;
            coef[m] = w;
            ++m;
            const double k = c.kappa[b];
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) mat_(idx[i], idx[j]) += k * coef[i] * coef[j];
        }
        llt_.compute(mat_);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("star precision matrix is not positive definite");
    }

    int dim() const { return n_; }
    const Eigen::MatrixXd& matrix() const { return mat_; }

    double log_det() const {
        std::vector<double> logs(n_);
        const auto d = llt_.matrixLLT().diagonal();
        for (int i = 0; i < n_; ++i) logs[i] = std::log(d(i));
        return 2.0 * pairwise_sum(logs);
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

    Eigen::MatrixXd covariance() const {
        return llt_.solve(Eigen::MatrixXd::Identity(n_, n_));
    }

private:
    int n_;
    Eigen::MatrixXd mat_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

inline double log_partition_star(const CouplingConfig& c, const Torus& t) {
    StarPrecision K(c, t);
    return 0.5 * K.dim() * std::log(kTwoPi) - 0.5 * K.log_det();
}

// Exact Gaussian sampler for the gradient measure at fixed couplings.
// phi solves U phi = z with z standard normal and U the upper Cholesky
// factor, so Cov(phi) = K^{-1} exactly; eta is its lattice gradient.
//
// The factorization is sparse (the precision is a torus Laplacian, so the
// AMD-ordered factor has near-linear fill); that choice is pure runtime, the
// draw is still exact. One object per chain; refactor() reuses the symbolic
// analysis when only the coupling values change, which is what the two-block
// sweep does every iteration.
class GradientSampler {
public:
    GradientSampler(const CouplingConfig& c, const Torus& t) : L_(t.L()), n_(t.n_sites() - 1) {
        check_coupling(c, t);
        build_triplets(c, t);
        K_.resize(n_, n_);
        K_.setFromTriplets(trips_.begin(), trips_.end());
        llt_.analyzePattern(K_);
        llt_.factorize(K_);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("sampler precision matrix is not positive definite");
    }

    void refactor(const CouplingConfig& c, const Torus& t) {
        check_coupling(c, t);
        build_triplets(c, t);
        K_.setFromTriplets(trips_.begin(), trips_.end());
        llt_.factorize(K_);
        if (llt_.info() != Eigen::Success)
            throw std::runtime_error("sampler precision matrix is not positive definite");
    }

    GradientConfig draw(const Torus& t, CounterRng& rng) const {
        Eigen::VectorXd z(n_);
        for (int i = 0; i < n_; ++i) z(i) = rng.next_gaussian();
        // K = P^T L L^T P  =>  phi = P^T L^{-T} z has covariance K^{-1}.
        Eigen::VectorXd y = llt_.matrixU().solve(z);
        Eigen::VectorXd phi = llt_.permutationPinv() * y;
        HeightField h;
        h.phi.assign(t.n_sites(), 0.0);
        for (int s = 1; s < t.n_sites(); ++s) h.phi[s] = phi(s - 1);
        return gradient_of(h, t);
    }

private:
    void build_triplets(const CouplingConfig& c, const Torus& t) {
        trips_.clear();
        trips_.reserve(4 * t.n_bonds());
        for (int b = 0; b < t.n_bonds(); ++b) {
            auto [u, v] = t.bond_ends(b);
            const double k = c.kappa[b];
            if (u != 0) trips_.emplace_back(u - 1, u - 1, k);
            if (v != 0) trips_.emplace_back(v - 1, v - 1, k);
            if (u != 0 && v != 0) {
                trips_.emplace_back(u - 1, v - 1, -k);
                trips_.emplace_back(v - 1, u - 1, -k);
            }
        }
    }

    int L_;
    int n_;
    std::vector<Eigen::Triplet<double>> trips_;
    Eigen::SparseMatrix<double> K_;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

inline GradientConfig sample_eta(const CouplingConfig& c, const Torus& t, CounterRng& rng) {
    GradientSampler s(c, t);
    return s.draw(t, rng);
}

// Var(eta_b) under the fixed-coupling gradient measure, for every bond, from
// the pinned covariance. Site 0 contributes nothing (it is pinned at 0).
inline std::vector<double> bond_variances(const PinnedPrecision& K, const Torus& t) {
    const Eigen::MatrixXd S = K.covariance();
    std::vector<double> var(t.n_bonds());
    for (int b = 0; b < t.n_bonds(); ++b) {
        auto [u, v] = t.bond_ends(b);
        double s = 0.0;
        if (u != 0) s += S(u - 1, u - 1);
        if (v != 0) s += S(v - 1, v - 1);
        if (u != 0 && v != 0) s -= 2.0 * S(u - 1, v - 1);
        var[b] = s;
    }
    return var;
}

}  // namespace gradgibbs
