#include "gibbslab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "gibbslab/errors.hpp"
#include "gibbslab/rng.hpp"

namespace gibbslab {

std::vector<int> BlockSystem::membership(int site) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].contains(site)) out.push_back(static_cast<int>(i));
    }
    return out;
}

double BlockSystem::weight_sum(const std::vector<int>& s) const {
    double w = 0.0;
    for (int i : s) w += weights.at(i);
    return w;
}

std::vector<std::string> BlockSystem::validate(
    const PairPotentialModel& model) const {
    std::vector<std::string> diags;
    if (psi.empty()) diags.push_back("block system: empty volume");
    for (int site : psi.sites) {
        if (site < 0 || site >= model.graph.site_count()) {
            diags.push_back("block system: volume site " + std::to_string(site) +
                            " is not a graph site");
        }
    }
    if (weights.size() != blocks.size()) {
        diags.push_back("block system: one weight per block required");
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (blocks[i].intersect(psi).empty()) {
            diags.push_back("block " + std::to_string(i) +
                            ": does not intersect the volume");
        }
        for (int site : blocks[i].sites) {
            if (site < 0 || site >= model.graph.site_count()) {
                diags.push_back("block " + std::to_string(i) + ": site " +
                                std::to_string(site) + " is not a graph site");
            }
        }
        if (i < weights.size() && !(weights[i] > 0.0 && std::isfinite(weights[i]))) {
            diags.push_back("block " + std::to_string(i) +
                            ": weight must be positive and finite");
        }
    }
    for (int site : psi.sites) {
        if (membership(site).empty()) {
            diags.push_back("block system: site " + std::to_string(site) +
                            " of the volume is covered by no block");
        }
    }
    return diags;
}

std::vector<int> BlockSystem::all_indices(const BlockSystem& bs) {
    std::vector<int> s(bs.blocks.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<int>(i);
    return s;
}

BlockKernel::BlockKernel(ConfigurationSpace space, Volume update_set,
                         RowFn row_fn)
    : space_(std::move(space)), update_set_(std::move(update_set)),
      row_fn_(std::move(row_fn)) {
    const std::uint64_t n = space_.size();
    if (n <= kKernelRowCap) {
        cache_.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) cache_.push_back(row_fn_(i));
    }
}

BlockKernel::Row BlockKernel::row(std::uint64_t source) const {
    if (source >= space_.size()) {
        throw std::invalid_argument("BlockKernel::row: source out of range");
    }
    if (!cache_.empty()) return cache_[source];
    return row_fn_(source);
}

FiniteDistribution BlockKernel::row_distribution(std::uint64_t source) const {
    std::vector<double> probs(space_.size(), 0.0);
    for (const auto& [target, mass] : row(source)) probs[target] += mass;
    return FiniteDistribution(space_, std::move(probs));
}

namespace {

// Index strides of a sub-volume's sites inside a host space, plus the
// offsets of every sub-volume digit combination.
struct SubIndexing {
    Volume delta;
    std::uint64_t count = 1;              // q^{|delta|}
    std::vector<std::uint64_t> strides;   // per delta site, host-space stride
    std::vector<std::uint64_t> offsets;   // per delta combination

    SubIndexing(const ConfigurationSpace& host, const Volume& sub)
        : delta(sub) {
        const int q = host.alphabet_size;
        strides.reserve(sub.sites.size());
        for (int site : sub.sites) {
            const int pos = host.volume.position(site);
            if (pos < 0) {
                throw std::invalid_argument(
                    "block does not lie inside the kernel volume");
            }
            std::uint64_t s = 1;
            for (int j = 0; j < pos; ++j) s *= static_cast<std::uint64_t>(q);
            strides.push_back(s);
            count *= static_cast<std::uint64_t>(q);
        }
        offsets.assign(count, 0);
        std::vector<int> digits(sub.sites.size(), 0);
        for (std::uint64_t c = 1; c < count; ++c) {
            for (std::size_t i = 0; i < digits.size(); ++i) {
                if (++digits[i] < q) break;
                digits[i] = 0;
            }
            std::uint64_t off = 0;
            for (std::size_t i = 0; i < digits.size(); ++i) {
                off += static_cast<std::uint64_t>(digits[i]) * strides[i];
            }
            offsets[c] = off;
        }
    }

    // Host index with the sub-volume digits zeroed.
    std::uint64_t base_of(std::uint64_t host_index, int q) const {
        for (std::size_t i = 0; i < strides.size(); ++i) {
            const std::uint64_t digit = (host_index / strides[i]) % q;
            host_index -= digit * strides[i];
        }
        return host_index;
    }
};

// Heat-bath conditional of one source: the gamma slice over the block
// combinations, renormalized. Returns false when the slice carries no mass.
bool conditional_slice(const std::vector<double>& gamma, const SubIndexing& sub,
                       std::uint64_t base, std::vector<double>& out) {
    out.resize(sub.count);
    double total = 0.0;
    for (std::uint64_t c = 0; c < sub.count; ++c) {
        out[c] = gamma[base + sub.offsets[c]];
        total += out[c];
    }
    if (total <= 0.0) return false;
    for (double& p : out) p /= total;
    return true;
}

std::string source_error(const ConfigurationSpace& space, std::uint64_t source) {
    std::ostringstream os;
    os << "heat-bath conditional has zero partition function for source "
       << space.label(source);
    return os.str();
}

}  // namespace

BlockKernel heat_bath_kernel(const PairPotentialModel& model,
                             const Volume& psi, const Configuration& sigma,
                             const Volume& theta) {
    const Volume delta = theta.intersect(psi);
    if (delta.empty()) {
        throw std::invalid_argument(
            "heat_bath_kernel: block does not intersect the volume");
    }
    const FiniteDistribution gamma = specification(model, psi, sigma);
    ConfigurationSpace space = gamma.space();
    auto probs = std::make_shared<std::vector<double>>(gamma.probabilities());
    auto sub = std::make_shared<SubIndexing>(space, delta);
    const int q = model.alphabet_size;

    auto row_fn = [probs, sub, q, space](std::uint64_t source) {
        const std::uint64_t base = sub->base_of(source, q);
        std::vector<double> cond;
        if (!conditional_slice(*probs, *sub, base, cond)) {
            throw zero_partition_error(source_error(space, source));
        }
        BlockKernel::Row row;
        row.reserve(sub->count);
        for (std::uint64_t c = 0; c < sub->count; ++c) {
            if (cond[c] > 0.0) row.emplace_back(base + sub->offsets[c], cond[c]);
        }
        return row;
    };
    return BlockKernel(std::move(space), delta, std::move(row_fn));
}

BlockKernel mixed_kernel(const std::vector<BlockKernel>& kernels,
                         const BlockSystem& bs, const std::vector<int>& s) {
    if (s.empty()) throw std::invalid_argument("mixed_kernel: empty block set");
    if (kernels.size() != bs.blocks.size()) {
        throw std::invalid_argument(
            "mixed_kernel: one kernel per block of the system required");
    }
    for (int i : s) {
        if (i < 0 || i >= static_cast<int>(kernels.size())) {
            throw std::invalid_argument("mixed_kernel: block index out of range");
        }
        if (!kernels[i].space().compatible(kernels[s[0]].space())) {
            throw std::invalid_argument("mixed_kernel: kernels on different spaces");
        }
    }
    const double w_s = bs.weight_sum(s);
    Volume update;
    for (int i : s) {
        for (int site : kernels[i].update_set().sites) update.sites.push_back(site);
    }
    update = Volume(std::move(update.sites));

    // Copy what the closure needs; the input kernels may not outlive us.
    auto parts = std::make_shared<std::vector<BlockKernel>>();
    auto scaled = std::make_shared<std::vector<double>>();
    for (int i : s) {
        parts->push_back(kernels[i]);
        scaled->push_back(bs.weights[i] / w_s);
    }
    auto row_fn = [parts, scaled](std::uint64_t source) {
        std::map<std::uint64_t, double> acc;
        for (std::size_t k = 0; k < parts->size(); ++k) {
            for (const auto& [target, mass] : (*parts)[k].row(source)) {
                acc[target] += (*scaled)[k] * mass;
            }
        }
        return BlockKernel::Row(acc.begin(), acc.end());
    };
    return BlockKernel(kernels[s[0]].space(), std::move(update),
                       std::move(row_fn));
}

namespace {

Configuration restrict_to(const Configuration& full, const Volume& volume) {
    std::vector<int> values(volume.sites.size());
    for (int i = 0; i < volume.size(); ++i) {
        values[i] = full.value_at(volume.sites[i]);
    }
    return Configuration(volume, std::move(values));
}

// Dense within-block coupling of two conditionals, row-major q^|delta| square.
std::vector<double> block_pair_coupling(const std::vector<double>& cond_a,
                                        const std::vector<double>& cond_b,
                                        CouplingStrategy strategy) {
    const std::size_t m = cond_a.size();
    std::vector<double> cell(m * m, 0.0);
    if (strategy == CouplingStrategy::independent) {
        for (std::size_t a = 0; a < m; ++a) {
            if (cond_a[a] == 0.0) continue;
            for (std::size_t b = 0; b < m; ++b) {
                cell[a * m + b] = cond_a[a] * cond_b[b];
            }
        }
        return cell;
    }
    // TV-optimal: shared mass on the diagonal, excess spread as a product.
    double total_excess = 0.0;
    std::vector<double> excess_a(m), excess_b(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double shared = std::min(cond_a[i], cond_b[i]);
        excess_a[i] = cond_a[i] - shared;
        excess_b[i] = cond_b[i] - shared;
        cell[i * m + i] = shared;
        total_excess += excess_a[i];
    }
    if (total_excess > 0.0) {
        for (std::size_t a = 0; a < m; ++a) {
            if (excess_a[a] == 0.0) continue;
            const double scale = excess_a[a] / total_excess;
            for (std::size_t b = 0; b < m; ++b) {
                if (excess_b[b] != 0.0) cell[a * m + b] += scale * excess_b[b];
            }
        }
    }
    return cell;
}

struct CoupledSource {
    std::uint64_t base = 0;         // host index, block digits zeroed
    std::vector<double> cond;       // conditional over the block combinations
    ConfigurationSpace host;

    // The conditional scattered over the host space: one heat-bath row.
    FiniteDistribution row(const SubIndexing& sub) const {
        std::vector<double> dense(host.size(), 0.0);
        for (std::uint64_t c = 0; c < sub.count; ++c) {
            dense[base + sub.offsets[c]] = cond[c];
        }
        return FiniteDistribution(host, std::move(dense));
    }
};

CoupledSource coupled_source(const PairPotentialModel& model,
                             const Volume& psi, const Volume& delta,
                             const SubIndexing& sub,
                             const Configuration& full) {
    CoupledSource src;
    const Configuration exterior = restrict_to(full, psi.complement(model.graph));
    const Configuration inside = restrict_to(full, psi);
    src.cond = condition_specification(model, psi, exterior, delta, inside)
                   .probabilities();
    src.host = ConfigurationSpace(psi, model.alphabet_size, &model, exterior);
    src.base = sub.base_of(src.host.index_of(inside), model.alphabet_size);
    return src;
}

}  // namespace

Coupling coupled_block_kernel(const PairPotentialModel& model,
                              const Volume& psi, const Volume& theta,
                              CouplingStrategy strategy,
                              const Configuration& eta,
                              const Configuration& xi) {
    const Volume delta = theta.intersect(psi);
    if (delta.empty()) {
        throw std::invalid_argument(
            "coupled_block_kernel: block does not intersect the volume");
    }
    ConfigurationSpace host(psi, model.alphabet_size, &model);
    const SubIndexing sub(host, delta);

    const CoupledSource a = coupled_source(model, psi, delta, sub, eta);
    const CoupledSource b = coupled_source(model, psi, delta, sub, xi);
    const std::vector<double> cell =
        block_pair_coupling(a.cond, b.cond, strategy);

    const std::uint64_t n = a.host.size();
    std::vector<double> joint(n * n, 0.0);
    for (std::uint64_t ca = 0; ca < sub.count; ++ca) {
        const std::uint64_t r = a.base + sub.offsets[ca];
        for (std::uint64_t cb = 0; cb < sub.count; ++cb) {
            const double mass = cell[ca * sub.count + cb];
            if (mass != 0.0) joint[r * n + b.base + sub.offsets[cb]] = mass;
        }
    }
    return Coupling(a.row(sub), b.row(sub), std::move(joint));
}

Coupling coupled_mixed_kernel(const PairPotentialModel& model,
                              const BlockSystem& bs, const std::vector<int>& s,
                              CouplingStrategy strategy,
                              const Configuration& eta,
                              const Configuration& xi) {
    if (s.empty()) {
        throw std::invalid_argument("coupled_mixed_kernel: empty block set");
    }
    const double w_s = bs.weight_sum(s);
    std::vector<double> joint, row_probs, col_probs;
    std::optional<ConfigurationSpace> row_space, col_space;
    for (int i : s) {
        const Coupling cell =
            coupled_block_kernel(model, bs.psi, bs.blocks.at(i), strategy, eta, xi);
        const double scale = bs.weights[i] / w_s;
        if (joint.empty()) {
            joint.assign(cell.joint().size(), 0.0);
            row_probs.assign(cell.rows(), 0.0);
            col_probs.assign(cell.cols(), 0.0);
            row_space = cell.row_space();
            col_space = cell.col_space();
        }
        for (std::size_t k = 0; k < joint.size(); ++k) {
            joint[k] += scale * cell.joint()[k];
        }
        for (std::uint64_t r = 0; r < cell.rows(); ++r) {
            row_probs[r] += scale * cell.row_marginal()[r];
        }
        for (std::uint64_t c = 0; c < cell.cols(); ++c) {
            col_probs[c] += scale * cell.col_marginal()[c];
        }
    }
    return Coupling(FiniteDistribution(*row_space, std::move(row_probs)),
                    FiniteDistribution(*col_space, std::move(col_probs)),
                    std::move(joint));
}

Coupling advance_coupling(const Coupling& q, const BlockSystem& bs,
                          const std::vector<int>& s,
                          CouplingStrategy strategy) {
    if (s.empty()) throw std::invalid_argument("advance_coupling: empty block set");
    const ConfigurationSpace& row_space = q.row_space();
    const ConfigurationSpace& col_space = q.col_space();
    if (row_space.model == nullptr || !row_space.boundary ||
        col_space.model == nullptr || !col_space.boundary) {
        throw std::invalid_argument(
            "advance_coupling: coupling does not carry specification provenance");
    }
    const PairPotentialModel& model = *row_space.model;
    if (!(bs.psi == row_space.volume)) {
        throw std::invalid_argument(
            "advance_coupling: block system volume differs from the coupling's");
    }

    // The declared marginals must be the two specifications.
    const FiniteDistribution spec_row =
        specification(model, bs.psi, *row_space.boundary);
    const FiniteDistribution spec_col =
        specification(model, bs.psi, *col_space.boundary);
    for (std::uint64_t i = 0; i < q.rows(); ++i) {
        if (std::abs(q.row_marginal()[i] - spec_row[i]) > kProbTol) {
            throw std::invalid_argument(
                "advance_coupling: row marginal is not the specification");
        }
    }
    for (std::uint64_t j = 0; j < q.cols(); ++j) {
        if (std::abs(q.col_marginal()[j] - spec_col[j]) > kProbTol) {
            throw std::invalid_argument(
                "advance_coupling: column marginal is not the specification");
        }
    }

    const int alphabet = model.alphabet_size;
    const std::uint64_t n = q.rows();
    const double w_s = bs.weight_sum(s);

    // Per selected block: sub-indexing plus the full conditional tables of
    // both chains (cond[base + offset] = heat-bath probability).
    struct BlockTables {
        SubIndexing sub;
        double scale;
        std::vector<double> cond_row, cond_col;
    };
    std::vector<BlockTables> tables;
    tables.reserve(s.size());
    for (int i : s) {
        const Volume delta = bs.blocks.at(i).intersect(bs.psi);
        if (delta.empty()) {
            throw std::invalid_argument(
                "advance_coupling: block does not intersect the volume");
        }
        BlockTables t{SubIndexing(row_space, delta), bs.weights[i] / w_s, {}, {}};
        t.cond_row.assign(n, 0.0);
        t.cond_col.assign(n, 0.0);
        std::vector<double> slice;
        for (std::uint64_t base = 0; base < n; ++base) {
            if (t.sub.base_of(base, alphabet) != base) continue;  // not a base
            if (conditional_slice(spec_row.probabilities(), t.sub, base, slice)) {
                for (std::uint64_t c = 0; c < t.sub.count; ++c) {
                    t.cond_row[base + t.sub.offsets[c]] = slice[c];
                }
            }
            if (conditional_slice(spec_col.probabilities(), t.sub, base, slice)) {
                for (std::uint64_t c = 0; c < t.sub.count; ++c) {
                    t.cond_col[base + t.sub.offsets[c]] = slice[c];
                }
            }
        }
        tables.push_back(std::move(t));
    }

    std::vector<double> out(n * n, 0.0);
    std::vector<double> cond_a, cond_b;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) {
            const double q_mass = q.mass(i, j);
            if (q_mass == 0.0) continue;
            for (const BlockTables& t : tables) {
                const std::uint64_t base_a = t.sub.base_of(i, alphabet);
                const std::uint64_t base_b = t.sub.base_of(j, alphabet);
                cond_a.resize(t.sub.count);
                cond_b.resize(t.sub.count);
                double mass_a = 0.0, mass_b = 0.0;
                for (std::uint64_t c = 0; c < t.sub.count; ++c) {
                    cond_a[c] = t.cond_row[base_a + t.sub.offsets[c]];
                    cond_b[c] = t.cond_col[base_b + t.sub.offsets[c]];
                    mass_a += cond_a[c];
                    mass_b += cond_b[c];
                }
                if (mass_a == 0.0 || mass_b == 0.0) {
                    throw zero_partition_error(
                        source_error(row_space, mass_a == 0.0 ? i : j));
                }
                const std::vector<double> cell =
                    block_pair_coupling(cond_a, cond_b, strategy);
                const double scale = q_mass * t.scale;
                for (std::uint64_t ca = 0; ca < t.sub.count; ++ca) {
                    const std::uint64_t r = base_a + t.sub.offsets[ca];
                    for (std::uint64_t cb = 0; cb < t.sub.count; ++cb) {
                        const double mass = cell[ca * t.sub.count + cb];
                        if (mass != 0.0) {
                            out[r * n + base_b + t.sub.offsets[cb]] += scale * mass;
                        }
                    }
                }
            }
        }
    }
    // Declaring the specifications as marginals makes the constructor verify
    // the stationarity identity on the output.
    return Coupling(spec_row, spec_col, std::move(out));
}

double stationarity_check(const PairPotentialModel& model, const Volume& psi,
                          const Configuration& sigma, const BlockSystem& bs,
                          const std::vector<int>& s) {
    if (s.empty()) throw std::invalid_argument("stationarity_check: empty block set");
    std::vector<BlockKernel> kernels;
    kernels.reserve(bs.blocks.size());
    for (const Volume& theta : bs.blocks) {
        kernels.push_back(heat_bath_kernel(model, psi, sigma, theta));
    }
    const BlockKernel kappa_s = mixed_kernel(kernels, bs, s);
    const FiniteDistribution gamma = specification(model, psi, sigma);

    std::vector<double> advanced(gamma.size(), 0.0);
    for (std::uint64_t src = 0; src < gamma.size(); ++src) {
        const double mass = gamma[src];
        if (mass == 0.0) continue;
        for (const auto& [target, p] : kappa_s.row(src)) {
            advanced[target] += mass * p;
        }
    }
    double residual = 0.0;
    for (std::uint64_t i = 0; i < gamma.size(); ++i) {
        residual = std::max(residual, std::abs(advanced[i] - gamma[i]));
    }
    return residual;
}

FiniteDistribution simulate_dynamics(const PairPotentialModel& model,
                                     const Volume& psi,
                                     const Configuration& sigma,
                                     const BlockSystem& bs,
                                     const std::vector<int>& s,
                                     const SimulationOptions& options) {
    if (options.steps < 1) {
        throw std::invalid_argument("simulate_dynamics: need at least one step");
    }
    if (s.empty()) throw std::invalid_argument("simulate_dynamics: empty block set");
    const std::uint64_t burn_in =
        options.burn_in.value_or(options.steps / 10);
    if (burn_in >= options.steps) {
        throw std::invalid_argument("simulate_dynamics: burn-in swallows every step");
    }

    ConfigurationSpace space(psi, model.alphabet_size, &model, sigma);
    const std::uint64_t n = space.size();
    const int q = model.alphabet_size;

    // Start from the lowest-index admissible state.
    std::vector<int> values(model.graph.site_count(), 0);
    for (int site = 0; site < model.graph.site_count(); ++site) {
        if (!psi.contains(site)) values[site] = sigma.value_at(site);
    }
    const Volume everything = Volume::all_sites(model.graph);
    std::uint64_t state = n;
    std::vector<int> digits(psi.size(), 0);
    {
        Configuration probe(everything, values);
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            space.decode(idx, digits);
            for (int i = 0; i < psi.size(); ++i) {
                probe.values[psi.sites[i]] = digits[i];
            }
            if (hamiltonian(model, psi, probe) < kForbidden) {
                state = idx;
                values = probe.values;
                break;
            }
        }
    }
    if (state == n) {
        throw zero_partition_error(
            "simulate_dynamics: no admissible start state");
    }

    // Per selected block: the sites to resample, their strides in the state
    // index, and the energy terms that can change when they move.
    struct BlockPlan {
        std::vector<int> sites;
        std::vector<std::uint64_t> strides;
        std::vector<int> edges;  // edges touching the block
        double cumulative_weight;
    };
    const double w_s = bs.weight_sum(s);
    std::vector<BlockPlan> plans;
    plans.reserve(s.size());
    double cum = 0.0;
    for (int i : s) {
        BlockPlan plan;
        const Volume delta = bs.blocks.at(i).intersect(psi);
        if (delta.empty()) {
            throw std::invalid_argument(
                "simulate_dynamics: block does not intersect the volume");
        }
        plan.sites = delta.sites;
        for (int site : delta.sites) {
            std::uint64_t stride = 1;
            for (int j = 0; j < psi.position(site); ++j) {
                stride *= static_cast<std::uint64_t>(q);
            }
            plan.strides.push_back(stride);
        }
        for (int e = 0; e < model.graph.edge_count(); ++e) {
            const auto& [a, b] = model.graph.edges[e];
            if (delta.contains(a) || delta.contains(b)) plan.edges.push_back(e);
        }
        cum += bs.weights[i] / w_s;
        plan.cumulative_weight = cum;
        plans.push_back(std::move(plan));
    }
    plans.back().cumulative_weight = 1.0;  // guard against rounding

    Rng rng(options.seed);
    std::vector<std::uint64_t> counts(n, 0);
    std::vector<double> local_energy;
    std::vector<int> local_digits;

    for (std::uint64_t step = 0; step < options.steps; ++step) {
        const double pick = rng.uniform01();
        std::size_t chosen = 0;
        while (plans[chosen].cumulative_weight <= pick) ++chosen;
        const BlockPlan& plan = plans[chosen];

        // Exact conditional over the block: only terms touching it vary.
        const std::size_t k = plan.sites.size();
        std::uint64_t combos = 1;
        for (std::size_t i = 0; i < k; ++i) combos *= static_cast<std::uint64_t>(q);
        local_energy.assign(combos, 0.0);
        local_digits.assign(k, 0);
        double max_log_w = -kForbidden;
        for (std::uint64_t c = 0; c < combos; ++c) {
            for (std::size_t i = 0; i < k; ++i) {
                values[plan.sites[i]] = local_digits[i];
            }
            double h = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                h += model.self(plan.sites[i], values[plan.sites[i]]);
            }
            for (int e : plan.edges) {
                const auto& [a, b] = model.graph.edges[e];
                h += model.pair(e, values[a], values[b]);
            }
            local_energy[c] = -h;
            max_log_w = std::max(max_log_w, -h);
            for (std::size_t i = 0; i < k; ++i) {
                if (++local_digits[i] < q) break;
                local_digits[i] = 0;
            }
        }
        double z = 0.0;
        for (std::uint64_t c = 0; c < combos; ++c) {
            local_energy[c] = std::exp(local_energy[c] - max_log_w);
            z += local_energy[c];
        }
        const double u = rng.uniform01() * z;
        double acc = 0.0;
        std::uint64_t drawn = combos - 1;
        for (std::uint64_t c = 0; c < combos; ++c) {
            acc += local_energy[c];
            if (u < acc) {
                drawn = c;
                break;
            }
        }
        // Write the drawn combination back into the state index and buffer.
        // The digit difference may wrap as unsigned; the final sum is exact
        // modulo 2^64 and lands back in range.
        std::uint64_t rest = drawn;
        for (std::size_t i = 0; i < k; ++i) {
            const std::uint64_t new_digit = rest % q;
            rest /= q;
            const std::uint64_t old_digit = (state / plan.strides[i]) % q;
            state += (new_digit - old_digit) * plan.strides[i];
            values[plan.sites[i]] = static_cast<int>(new_digit);
        }
        if (options.on_step) options.on_step(step, state);
        if (step >= burn_in) ++counts[state];
    }

    const double samples = static_cast<double>(options.steps - burn_in);
    std::vector<double> freq(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        freq[i] = static_cast<double>(counts[i]) / samples;
    }
    return FiniteDistribution(std::move(space), std::move(freq));
}

}  // namespace gibbslab
