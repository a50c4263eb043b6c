#ifndef GIBBSLAB_DYNAMICS_HPP_
#define GIBBSLAB_DYNAMICS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "gibbslab/coupling.hpp"
#include "gibbslab/specification.hpp"

namespace gibbslab {

// Kernels are materialized as dense row tables only up to this many source
// states; larger spaces serve rows on the fly.
inline constexpr std::uint64_t kKernelRowCap = std::uint64_t{1} << 16;

// Weighted block structure over a volume. Every block must intersect psi and
// every site of psi must lie in at least one block, so the induced dynamics
// can reach every admissible state.
struct BlockSystem {
    Volume psi;
    std::vector<Volume> blocks;   // theta_i; may extend outside psi
    std::vector<double> weights;  // positive, aligned with blocks

    // B(x): indices of the blocks containing the site.
    std::vector<int> membership(int site) const;
    // w_S for an index subset.
    double weight_sum(const std::vector<int>& s) const;
    // Located diagnostics; empty iff all invariants hold.
    std::vector<std::string> validate(const PairPotentialModel& model) const;

    static std::vector<int> all_indices(const BlockSystem& bs);
};

// Markov kernel on the configurations of a fixed volume whose rows move
// only the sites of an update set. Rows are stored sparsely; each row is a
// valid distribution over the space.
class BlockKernel {
public:
    using Entry = std::pair<std::uint64_t, double>;
    using Row = std::vector<Entry>;
    using RowFn = std::function<Row(std::uint64_t)>;

    BlockKernel(ConfigurationSpace space, Volume update_set, RowFn row_fn);

    const ConfigurationSpace& space() const { return space_; }
    const Volume& update_set() const { return update_set_; }
    bool materialized() const { return !cache_.empty(); }

    // Sparse row of transition masses for a source state.
    Row row(std::uint64_t source) const;
    // Row as a dense distribution over the space.
    FiniteDistribution row_distribution(std::uint64_t source) const;

private:
    ConfigurationSpace space_;
    Volume update_set_;
    RowFn row_fn_;
    std::vector<Row> cache_;  // filled when space_.size() <= kKernelRowCap
};

enum class CouplingStrategy { optimal, independent };

// Heat-bath resampling of theta ∩ psi from the specification conditioned on
// everything else: row(eta) fixes eta off the block and redraws the block
// sites from their exact conditional. Throws zero_partition_error when a
// source state's conditional has no admissible extension.
BlockKernel heat_bath_kernel(const PairPotentialModel& model,
                             const Volume& psi, const Configuration& sigma,
                             const Volume& theta);

// Row-wise convex mixture of the kernels indexed by s with weights w_i/w_S.
BlockKernel mixed_kernel(const std::vector<BlockKernel>& kernels,
                         const BlockSystem& bs, const std::vector<int>& s);

// One coupled heat-bath cell K_theta(eta, xi): both sources resample
// theta ∩ psi, the within-block pair is drawn from the chosen coupling of
// the two conditionals, and everything off the block moves deterministically
// to its current values. eta and xi are full-graph configurations carrying
// their own exteriors. When the sources agree off the block the optimal
// strategy degenerates to the identity coupling (mismatch 0).
Coupling coupled_block_kernel(const PairPotentialModel& model,
                              const Volume& psi, const Volume& theta,
                              CouplingStrategy strategy,
                              const Configuration& eta,
                              const Configuration& xi);

// w_S^{-1} sum_{i in S} w_i K_i(eta, xi): convex mixture of the coupled
// cells; the marginals are the mixed kernels' rows.
Coupling coupled_mixed_kernel(const PairPotentialModel& model,
                              const BlockSystem& bs, const std::vector<int>& s,
                              CouplingStrategy strategy,
                              const Configuration& eta,
                              const Configuration& xi);

// One coupled dynamics step on a coupling of two specifications:
// F_S(Q)(a,b) = sum_{eta,xi} Q(eta,xi) · K_S(eta,xi)(a,b). The input's
// declared marginals must be the two specifications (validated against the
// spaces' recorded boundaries); the output is again a coupling of the same
// two specifications, which is exactly the stationarity of the heat-bath
// dynamics.
Coupling advance_coupling(const Coupling& q, const BlockSystem& bs,
                          const std::vector<int>& s,
                          CouplingStrategy strategy);

// Sup-norm residual of gamma·kappa_S - gamma; stationarity means <= kProbTol.
double stationarity_check(const PairPotentialModel& model, const Volume& psi,
                          const Configuration& sigma, const BlockSystem& bs,
                          const std::vector<int>& s);

struct SimulationOptions {
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    // Occupancies are counted after this many steps; defaults to steps/10.
    std::optional<std::uint64_t> burn_in;
    // Optional trajectory sink: called with (step, state index) after every
    // step, including burn-in.
    std::function<void(std::uint64_t, std::uint64_t)> on_step;
};

// Seeded single-chain heat-bath simulation: each step picks block i with
// probability w_i/w_S and redraws theta_i ∩ psi from its exact conditional.
// Starts from the lowest-index admissible state. Returns post-burn-in
// occupancy frequencies; a cross-check of the exact kernels, not an
// estimator of record.
FiniteDistribution simulate_dynamics(const PairPotentialModel& model,
                                     const Volume& psi,
                                     const Configuration& sigma,
                                     const BlockSystem& bs,
                                     const std::vector<int>& s,
                                     const SimulationOptions& options);

}  // namespace gibbslab

#endif  // GIBBSLAB_DYNAMICS_HPP_
