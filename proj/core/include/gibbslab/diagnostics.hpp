#ifndef GIBBSLAB_DIAGNOSTICS_HPP_
#define GIBBSLAB_DIAGNOSTICS_HPP_

#include <string>
#include <vector>

#include "gibbslab/dynamics.hpp"

namespace gibbslab {

struct BoundaryInfluenceResult {
    double sup_tv = 0.0;
    std::uint64_t pairs_checked = 0;
    std::uint64_t infeasible_skipped = 0;  // boundary patterns with no admissible state
};

// Exact maximum of || gamma_psi^tau - gamma_psi^sigma ||_lambda over all
// pairs of boundary patterns. Only the exterior sites adjacent to psi are
// enumerated: by locality the specification is constant in anything farther
// out. Boundary patterns whose partition function vanishes are skipped and
// counted; if none is admissible this throws zero_partition_error.
BoundaryInfluenceResult boundary_influence_detail(
    const PairPotentialModel& model, const Volume& psi, const Volume& lambda);

double boundary_influence(const PairPotentialModel& model, const Volume& psi,
                          const Volume& lambda);

// Boundary influence across a nested family of volumes around a fixed
// observation window, with an empirical decay estimate.
struct InfluenceCurve {
    Volume window;
    std::vector<int> labels;          // m = 1..M
    std::vector<double> sup_tv;       // aligned with labels
    std::vector<double> log_slopes;   // log(v_m / v_{m-1}); NaN when undefined
    double decay_rate = 0.0;          // least-squares slope of log values
    double fit_residual = 0.0;        // RMS residual of that fit
};

// Requires strictly nested volumes each containing the window. The decay
// rate is the least-squares slope of the log values over the last
// max(2, M/2) points.
InfluenceCurve influence_decay_curve(const PairPotentialModel& model,
                                     const Volume& lambda,
                                     const std::vector<Volume>& volumes);

// One row per block of the single-step distance decomposition at a
// single-site discrepancy.
struct StepDecompositionRow {
    int block = 0;
    double lhs = 0.0;           // expected delta-distance under K_i(eta, xi)
    double off_block = 0.0;     // rho_z(eta_z, xi_z) · 1_{z in delta \ theta_i}
    double in_block = 0.0;      // expected (delta ∩ theta_i)-distance
    bool holds = false;         // lhs <= off_block + in_block + kProbTol
};

struct StepDecomposition {
    std::vector<StepDecompositionRow> rows;  // one per index in s
    double mixed_lhs = 0.0;   // expected delta-distance under K_S(eta, xi)
    double covered_sum = 0.0; // w_S^{-1} sum over blocks containing z
    double missed_sum = 0.0;  // w_S^{-1} sum over the remaining blocks
    bool split_holds = false; // mixed_lhs == covered_sum + missed_sum
    bool holds = false;       // all rows and the split
};

// Verifies, per block, that the expected post-step distance on delta is at
// most the untouched discrepancy plus the in-block expected distance, and
// that splitting the block sum by membership of the discrepancy site
// reproduces the mixed-kernel distance exactly. eta and xi must differ at
// exactly the one site z.
StepDecomposition step_decomposition_check(
    const PairPotentialModel& model, const Volume& psi,
    const Configuration& sigma, const BlockSystem& bs,
    const std::vector<int>& s, int z, const Configuration& eta,
    const Configuration& xi, const Volume& delta, const SiteMetric& rho,
    CouplingStrategy strategy = CouplingStrategy::optimal);

struct ContractionReport {
    double max_ratio = 0.0;
    bool contracting = false;        // max_ratio < 1
    int argmax_site = -1;            // site of the worst discrepancy
    int argmax_value_a = -1;
    int argmax_value_b = -1;
    std::uint64_t argmax_base_index = 0;  // index of the worst eta
    CouplingStrategy strategy = CouplingStrategy::optimal;
    // Per-site worst cases, aligned with psi.sites.
    std::vector<double> per_site_max;
    std::vector<int> per_site_value_a;
    std::vector<int> per_site_value_b;
    std::uint64_t pairs_evaluated = 0;
    std::uint64_t inadmissible_skipped = 0;
};

// Worst-case one-step contraction of the coupled dynamics: for every site z
// of psi and every admissible pair (eta, xi) differing only at z, the ratio
// E_{K_S(eta,xi)}[rho_psi] / rho_z(eta_z, xi_z), maximized over everything.
// Pairs whose states carry infinite energy are outside the dynamics' state
// space and are skipped (admissible sources always have well-defined
// conditionals).
ContractionReport contraction_constant(const PairPotentialModel& model,
                                       const Volume& psi,
                                       const Configuration& sigma,
                                       const BlockSystem& bs,
                                       const std::vector<int>& s,
                                       const SiteMetric& rho,
                                       CouplingStrategy strategy);

// Block recipe for the contraction half of the uniqueness report.
enum class BlockRecipe { single_site, full_volume };

struct UniquenessReport {
    InfluenceCurve curve;
    ContractionReport contraction;
    bool decay_observed = false;
    bool contraction_certified = false;
    std::string verdict;  // "decay observed", "contraction certified",
                          // "decay observed; contraction certified", or
                          // "no decay or contraction certified"
};

// Runs both diagnostics: the influence curve over the volumes, and the
// contraction constant on the largest volume with blocks built per the
// recipe (unit weights, zero exterior). The verdict reports only what the
// finite computations showed.
UniquenessReport uniqueness_report(const PairPotentialModel& model,
                                   const Volume& lambda,
                                   const std::vector<Volume>& volumes,
                                   BlockRecipe recipe,
                                   CouplingStrategy strategy =
                                       CouplingStrategy::optimal);

std::string render_report(const UniquenessReport& report,
                          const PairPotentialModel& model);
std::string render_report(const ContractionReport& report,
                          const PairPotentialModel& model);

}  // namespace gibbslab

#endif  // GIBBSLAB_DIAGNOSTICS_HPP_
