#ifndef GIBBSLAB_DISTRIBUTION_HPP_
#define GIBBSLAB_DISTRIBUTION_HPP_

#include <cstdint>
#include <vector>

#include "gibbslab/configuration.hpp"

namespace gibbslab {

// Absolute tolerance for every probability-identity assertion in this
// module: double sums over at most 2^24 terms stay well inside it.
inline constexpr double kProbTol = 1e-12;

// Exact probability vector over an indexed configuration space.
class FiniteDistribution {
public:
    // Validates length, nonnegativity and normalization (within kProbTol).
    FiniteDistribution(ConfigurationSpace space, std::vector<double> probs);

    const ConfigurationSpace& space() const { return space_; }
    const std::vector<double>& probabilities() const { return probs_; }
    double operator[](std::uint64_t i) const { return probs_[i]; }
    std::uint64_t size() const { return probs_.size(); }

    static FiniteDistribution uniform(ConfigurationSpace space);
    static FiniteDistribution point_mass(ConfigurationSpace space,
                                         std::uint64_t index);

private:
    ConfigurationSpace space_;
    std::vector<double> probs_;
};

// The three equivalent total-variation formulas. half_sum is (1/2)·L1;
// best_event evaluates mu(B)-nu(B) on the maximizing event
// B = {i : mu(i) >= nu(i)}; one_minus_min is 1 - sum_i min(mu_i, nu_i).
enum class TvMethod { half_sum, best_event, one_minus_min };

double tv_distance(const FiniteDistribution& mu, const FiniteDistribution& nu,
                   TvMethod method = TvMethod::half_sum);

// Marginal of mu on a sub-volume: each entry sums mu over the
// configurations agreeing on lambda. lambda == full volume returns mu
// unchanged.
FiniteDistribution project(const FiniteDistribution& mu, const Volume& lambda);

// tv_distance of the two projections.
double projected_tv(const FiniteDistribution& mu, const FiniteDistribution& nu,
                    const Volume& lambda);

// Pointwise convex combination; the residual |sum-1| before renormalizing
// must be within kProbTol.
FiniteDistribution mix(const std::vector<double>& weights,
                       const std::vector<FiniteDistribution>& components);

// Mixture decomposition of a projected specification over the boundary
// patterns that separate psi from the rest of w. Patterns live on the sites
// of w \ psi adjacent to psi (farther sites cannot influence the
// specification); patterns of probability zero are omitted.
struct BoundaryMixture {
    ConfigurationSpace pattern_space;        // sites of w\psi adjacent to psi
    std::vector<double> weights;             // positive, sum to 1
    std::vector<Configuration> patterns;     // aligned with weights
    std::vector<FiniteDistribution> components;  // projections onto lambda
};

// Splits project(specification(model, w, sigma), lambda) into a convex
// mixture of projected psi-specifications, one per boundary pattern, with
// weights equal to the pattern probabilities under the w-specification.
// Requires lambda ⊆ psi ⊆ w.
BoundaryMixture decompose_over_boundary(const PairPotentialModel& model,
                                        const Volume& w,
                                        const Configuration& sigma,
                                        const Volume& psi,
                                        const Volume& lambda);

}  // namespace gibbslab

#endif  // GIBBSLAB_DISTRIBUTION_HPP_
