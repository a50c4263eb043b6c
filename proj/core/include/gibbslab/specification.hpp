#ifndef GIBBSLAB_SPECIFICATION_HPP_
#define GIBBSLAB_SPECIFICATION_HPP_

#include "gibbslab/distribution.hpp"

namespace gibbslab {

// Exact Gibbs specification of `lambda` under the boundary `sigma` (a
// configuration of every site outside lambda): weight of tau is
// exp(-H_lambda(tau ∪ sigma)) normalized. Log-weights are shifted by their
// maximum before exponentiation; forbidden states get probability zero.
// Throws zero_partition_error when no state is admissible.
FiniteDistribution specification(const PairPotentialModel& model,
                                 const Volume& lambda,
                                 const Configuration& sigma);

// Conditional of the lambda-specification on the event that the
// configuration agrees with `tau` on lambda \ delta, computed by direct
// Bayes restriction of the enumerated lambda table. `tau` must assign at
// least lambda \ delta. The result coincides with the delta-specification
// under the combined boundary (tau inside, sigma outside); that identity is
// a theorem about the Hamiltonian split, not a shortcut taken here.
FiniteDistribution condition_specification(const PairPotentialModel& model,
                                           const Volume& lambda,
                                           const Configuration& sigma,
                                           const Volume& delta,
                                           const Configuration& tau);

}  // namespace gibbslab

#endif  // GIBBSLAB_SPECIFICATION_HPP_
