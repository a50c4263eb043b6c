#ifndef GIBBSLAB_COUPLING_HPP_
#define GIBBSLAB_COUPLING_HPP_

#include <cstdint>
#include <vector>

#include "gibbslab/distribution.hpp"

namespace gibbslab {

// Joint distribution over pairs of configurations with declared marginals.
// Construction verifies total mass, nonnegativity, and that row/column sums
// reproduce the declared marginals within kProbTol.
class Coupling {
public:
    Coupling(FiniteDistribution row_marginal, FiniteDistribution col_marginal,
             std::vector<double> joint);

    const ConfigurationSpace& row_space() const { return row_marginal_.space(); }
    const ConfigurationSpace& col_space() const { return col_marginal_.space(); }
    const FiniteDistribution& row_marginal() const { return row_marginal_; }
    const FiniteDistribution& col_marginal() const { return col_marginal_; }

    std::uint64_t rows() const { return row_marginal_.size(); }
    std::uint64_t cols() const { return col_marginal_.size(); }
    double mass(std::uint64_t i, std::uint64_t j) const {
        return joint_[i * cols() + j];
    }
    const std::vector<double>& joint() const { return joint_; }

private:
    FiniteDistribution row_marginal_;
    FiniteDistribution col_marginal_;
    std::vector<double> joint_;  // row-major, rows() x cols()
};

// Product coupling: joint(i,j) = mu(i)·nu(j).
Coupling independent_coupling(const FiniteDistribution& mu,
                              const FiniteDistribution& nu);

// Diagonal coupling of a distribution with itself; mismatch 0.
Coupling identity_coupling(const FiniteDistribution& mu);

// TV-optimal coupling: the diagonal carries min(mu_i, nu_i) and the excess
// mass is spread as the product of the normalized excess vectors, so
// mismatch(optimal_coupling(mu, nu)) equals tv_distance(mu, nu). The product
// rule is canonical: any excess matching attains optimality, this one needs
// no assignment solver and is order-independent.
Coupling optimal_coupling(const FiniteDistribution& mu,
                          const FiniteDistribution& nu);

// P(X != Y) = 1 - trace mass. Requires row and column spaces compatible.
double mismatch(const Coupling& q);

// Per-site distance tables over a volume. Defaults to the discrete metric
// rho_x(a,b) = 1_{a != b}; weighted metrics are accepted everywhere.
struct SiteMetric {
    Volume volume;
    int alphabet_size = 0;
    std::vector<std::vector<double>> tables;  // [pos in volume][a*q + b]
    double inf_gap = 0.0;  // min over sites and unequal value pairs

    static SiteMetric discrete(Volume volume, int q);
    // Validates symmetry, zero diagonal, positivity off the diagonal, and
    // records inf_gap.
    static SiteMetric from_tables(Volume volume, int q,
                                  std::vector<std::vector<double>> tables);

    double at(int pos, int a, int b) const {
        return tables[pos][a * alphabet_size + b];
    }
};

// E_Q[ r(X,Y) ] with r(eta, xi) = sum_x rho_x(eta_x, xi_x) over the shared
// volume. Satisfies mismatch(Q) <= expected_metric(Q, rho) / inf_gap.
double expected_metric(const Coupling& q, const SiteMetric& rho);

// Sum over x in lambda of E_Q[ rho_x(eta_x, xi_x) ]: the per-volume expected
// distance aggregated site by site.
double rho_volume(const Coupling& q, const SiteMetric& rho,
                  const Volume& lambda);

// Chain of couplings with matching interface spaces:
// col_space(links[j]) compatible with row_space(links[j+1]).
struct PathChain {
    std::vector<Coupling> links;
};

// Sequential conditional composition: draw x_1 from the first row marginal,
// then x_{j+1} from link j conditioned on x_j. The result couples the first
// row marginal with the last column marginal exactly. A conditioning atom of
// zero mass contributes nothing to the joint; its conditional row is fixed
// to the point mass on the lowest-index state, a choice that provably never
// affects the output.
Coupling compose_path(const PathChain& chain);

struct TelescopeCheck {
    double lhs = 0.0;  // expected delta-distance of the composed coupling
    double rhs = 0.0;  // sum of the per-link expected delta-distances
    bool holds = false;
};

// Triangle-inequality telescope over a chain sharing one volume.
TelescopeCheck telescope_bound_check(const PathChain& chain,
                                     const SiteMetric& rho,
                                     const Volume& delta);

struct MonotoneCheck {
    double lhs = 0.0;  // E[f]·E[g]
    double rhs = 0.0;  // E[f·g]
    bool holds = false;
};

// Chebyshev-style positive correlation of two nondecreasing functions
// tabulated on a finite real grid. Rejects non-monotone tables.
MonotoneCheck monotone_correlation_check(const std::vector<double>& grid,
                                         const std::vector<double>& probs,
                                         const std::vector<double>& f,
                                         const std::vector<double>& g);

}  // namespace gibbslab

#endif  // GIBBSLAB_COUPLING_HPP_
