#include "gibbslab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "gibbslab/csv.hpp"
#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

// Exterior sites adjacent to psi; only these can influence the
// specification.
Volume frontier_of(const PairPotentialModel& model, const Volume& psi) {
    const auto adj = model.graph.adjacency();
    std::vector<int> sites;
    for (int site = 0; site < model.graph.site_count(); ++site) {
        if (psi.contains(site)) continue;
        for (int nbr : adj[site]) {
            if (psi.contains(nbr)) {
                sites.push_back(site);
                break;
            }
        }
    }
    return Volume(std::move(sites));
}

Configuration boundary_from_pattern(const PairPotentialModel& model,
                                    const Volume& psi, const Volume& frontier,
                                    const Configuration& pattern) {
    const Volume exterior = psi.complement(model.graph);
    std::vector<int> values(exterior.sites.size(), 0);
    for (int i = 0; i < exterior.size(); ++i) {
        if (frontier.contains(exterior.sites[i])) {
            values[i] = pattern.value_at(exterior.sites[i]);
        }
    }
    return Configuration(exterior, std::move(values));
}

}  // namespace

BoundaryInfluenceResult boundary_influence_detail(
    const PairPotentialModel& model, const Volume& psi, const Volume& lambda) {
    if (!lambda.subset_of(psi)) {
        throw std::invalid_argument(
            "boundary_influence: window is not contained in the volume");
    }
    const Volume frontier = frontier_of(model, psi);
    ConfigurationSpace pattern_space(frontier, model.alphabet_size, &model);
    const std::uint64_t patterns = pattern_space.size();

    BoundaryInfluenceResult result;
    std::vector<FiniteDistribution> projections;
    projections.reserve(patterns);
    for (std::uint64_t p = 0; p < patterns; ++p) {
        const Configuration boundary = boundary_from_pattern(
            model, psi, frontier, pattern_space.at(p));
        try {
            projections.push_back(project(specification(model, psi, boundary),
                                          lambda));
        } catch (const zero_partition_error&) {
            ++result.infeasible_skipped;
        }
    }
    if (projections.empty()) {
        throw zero_partition_error(
            "boundary_influence: every boundary pattern is infeasible");
    }
    for (std::size_t i = 0; i < projections.size(); ++i) {
        for (std::size_t j = i + 1; j < projections.size(); ++j) {
            result.sup_tv = std::max(
                result.sup_tv, tv_distance(projections[i], projections[j]));
            ++result.pairs_checked;
        }
    }
    return result;
}

double boundary_influence(const PairPotentialModel& model, const Volume& psi,
                          const Volume& lambda) {
    return boundary_influence_detail(model, psi, lambda).sup_tv;
}

InfluenceCurve influence_decay_curve(const PairPotentialModel& model,
                                     const Volume& lambda,
                                     const std::vector<Volume>& volumes) {
    if (volumes.empty()) {
        throw std::invalid_argument("influence_decay_curve: no volumes");
    }
    for (std::size_t m = 0; m < volumes.size(); ++m) {
        if (!lambda.subset_of(volumes[m])) {
            throw std::invalid_argument(
                "influence_decay_curve: a volume does not contain the window");
        }
        if (m > 0 && !(volumes[m - 1].subset_of(volumes[m]) &&
                       volumes[m - 1].size() < volumes[m].size())) {
            throw std::invalid_argument(
                "influence_decay_curve: volumes must be strictly nested");
        }
    }
    InfluenceCurve curve;
    curve.window = lambda;
    for (std::size_t m = 0; m < volumes.size(); ++m) {
        curve.labels.push_back(static_cast<int>(m) + 1);
        curve.sup_tv.push_back(boundary_influence(model, volumes[m], lambda));
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    curve.log_slopes.assign(curve.sup_tv.size(), nan);
    for (std::size_t m = 1; m < curve.sup_tv.size(); ++m) {
        if (curve.sup_tv[m] > 0.0 && curve.sup_tv[m - 1] > 0.0) {
            curve.log_slopes[m] = std::log(curve.sup_tv[m] / curve.sup_tv[m - 1]);
        }
    }

    // Least-squares slope of the log values over the tail of the curve.
    const std::size_t count = curve.sup_tv.size();
    if (count >= 2) {
        const std::size_t window =
            std::min(count, std::max<std::size_t>(2, count / 2));
        const std::size_t first = count - window;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t m = first; m < count; ++m) {
            const double x = static_cast<double>(curve.labels[m]);
            const double y = std::log(std::max(curve.sup_tv[m], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double nw = static_cast<double>(window);
        curve.decay_rate = (nw * sxy - sx * sy) / (nw * sxx - sx * sx);
        const double intercept = (sy - curve.decay_rate * sx) / nw;
        double rss = 0.0;
        for (std::size_t m = first; m < count; ++m) {
            const double x = static_cast<double>(curve.labels[m]);
            const double y = std::log(std::max(curve.sup_tv[m], 1e-300));
            const double r = y - (curve.decay_rate * x + intercept);
            rss += r * r;
        }
        curve.fit_residual = std::sqrt(rss / nw);
    } else {
        curve.decay_rate = nan;
        curve.fit_residual = nan;
    }
    return curve;
}

StepDecomposition step_decomposition_check(
    const PairPotentialModel& model, const Volume& psi,
    const Configuration& sigma, const BlockSystem& bs,
    const std::vector<int>& s, int z, const Configuration& eta,
    const Configuration& xi, const Volume& delta, const SiteMetric& rho,
    CouplingStrategy strategy) {
    if (s.empty()) {
        throw std::invalid_argument("step_decomposition_check: empty block set");
    }
    if (!psi.contains(z)) {
        throw std::invalid_argument(
            "step_decomposition_check: discrepancy site outside the volume");
    }
    for (int site = 0; site < model.graph.site_count(); ++site) {
        if (site != z && eta.value_at(site) != xi.value_at(site)) {
            throw std::invalid_argument(
                "step_decomposition_check: sources differ away from the "
                "discrepancy site " + model.graph.site_names[site]);
        }
    }
    (void)sigma;  // the sources carry their own exteriors

    const int zpos = rho.volume.position(z);
    if (zpos < 0) {
        throw std::invalid_argument(
            "step_decomposition_check: metric does not cover the site");
    }
    const double rho_z =
        rho.at(zpos, eta.value_at(z), xi.value_at(z));

    StepDecomposition result;
    const double w_s = bs.weight_sum(s);
    double covered = 0.0, missed = 0.0;
    for (int i : s) {
        const Volume& theta = bs.blocks.at(i);
        const Coupling cell =
            coupled_block_kernel(model, psi, theta, strategy, eta, xi);
        StepDecompositionRow row;
        row.block = i;
        row.lhs = rho_volume(cell, rho, delta);
        row.off_block =
            (delta.contains(z) && !theta.contains(z)) ? rho_z : 0.0;
        row.in_block = rho_volume(cell, rho, delta.intersect(theta));
        row.holds = row.lhs <= row.off_block + row.in_block + kProbTol;
        result.rows.push_back(row);

        const double contribution = bs.weights[i] / w_s * row.lhs;
        if (theta.contains(z)) {
            covered += contribution;
        } else {
            missed += contribution;
        }
    }
    const Coupling mixed =
        coupled_mixed_kernel(model, bs, s, strategy, eta, xi);
    result.mixed_lhs = rho_volume(mixed, rho, delta);
    result.covered_sum = covered;
    result.missed_sum = missed;
    result.split_holds =
        std::abs(result.mixed_lhs - (covered + missed)) <= kProbTol;
    result.holds = result.split_holds;
    for (const auto& row : result.rows) result.holds = result.holds && row.holds;
    return result;
}

namespace {

// Sub-volume indexing mirror of the one in dynamics.cpp, local to the
// contraction sweep.
struct BlockIndexing {
    Volume delta;
    std::uint64_t count = 1;
    std::vector<std::uint64_t> strides;
    std::vector<std::uint64_t> offsets;
    std::vector<int> digit_table;  // [combo][site] flattened
    std::vector<int> metric_pos;   // positions of delta sites in rho.volume
    bool contains_z = false;

    std::uint64_t base_of(std::uint64_t index, int q) const {
        for (std::size_t i = 0; i < strides.size(); ++i) {
            const std::uint64_t digit = (index / strides[i]) % q;
            index -= digit * strides[i];
        }
        return index;
    }
};

BlockIndexing make_block_indexing(const ConfigurationSpace& host,
                                  const Volume& delta, const SiteMetric& rho) {
    BlockIndexing b;
    b.delta = delta;
    const int q = host.alphabet_size;
    for (int site : delta.sites) {
        std::uint64_t stride = 1;
        for (int j = 0; j < host.volume.position(site); ++j) {
            stride *= static_cast<std::uint64_t>(q);
        }
        b.strides.push_back(stride);
        b.count *= static_cast<std::uint64_t>(q);
        b.metric_pos.push_back(rho.volume.position(site));
    }
    b.offsets.assign(b.count, 0);
    b.digit_table.assign(b.count * delta.sites.size(), 0);
    std::vector<int> digits(delta.sites.size(), 0);
    for (std::uint64_t c = 0; c < b.count; ++c) {
        std::uint64_t off = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            off += static_cast<std::uint64_t>(digits[i]) * b.strides[i];
            b.digit_table[c * digits.size() + i] = digits[i];
        }
        b.offsets[c] = off;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (++digits[i] < q) break;
            digits[i] = 0;
        }
    }
    return b;
}

// Expected within-block distance of the strategy coupling of two
// conditional slices.
double within_block_distance(const BlockIndexing& b, const SiteMetric& rho,
                             const std::vector<double>& cond_a,
                             const std::vector<double>& cond_b,
                             CouplingStrategy strategy) {
    const std::size_t k = b.delta.sites.size();
    const int q = rho.alphabet_size;
    auto pair_distance = [&](std::uint64_t ca, std::uint64_t cb) {
        double d = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const int da = b.digit_table[ca * k + i];
            const int db = b.digit_table[cb * k + i];
            d += rho.tables[b.metric_pos[i]][da * q + db];
        }
        return d;
    };
    double acc = 0.0;
    if (strategy == CouplingStrategy::independent) {
        for (std::uint64_t ca = 0; ca < b.count; ++ca) {
            if (cond_a[ca] == 0.0) continue;
            for (std::uint64_t cb = 0; cb < b.count; ++cb) {
                if (cond_b[cb] == 0.0) continue;
                acc += cond_a[ca] * cond_b[cb] * pair_distance(ca, cb);
            }
        }
        return acc;
    }
    // Optimal: only the excess-product part moves off the diagonal.
    double total_excess = 0.0;
    std::vector<double> excess_a(b.count), excess_b(b.count);
    for (std::uint64_t c = 0; c < b.count; ++c) {
        const double shared = std::min(cond_a[c], cond_b[c]);
        excess_a[c] = cond_a[c] - shared;
        excess_b[c] = cond_b[c] - shared;
        total_excess += excess_a[c];
    }
    if (total_excess == 0.0) return 0.0;
    for (std::uint64_t ca = 0; ca < b.count; ++ca) {
        if (excess_a[ca] == 0.0) continue;
        const double scale = excess_a[ca] / total_excess;
        for (std::uint64_t cb = 0; cb < b.count; ++cb) {
            if (excess_b[cb] == 0.0) continue;
            acc += scale * excess_b[cb] * pair_distance(ca, cb);
        }
    }
    return acc;
}

}  // namespace

ContractionReport contraction_constant(const PairPotentialModel& model,
                                       const Volume& psi,
                                       const Configuration& sigma,
                                       const BlockSystem& bs,
                                       const std::vector<int>& s,
                                       const SiteMetric& rho,
                                       CouplingStrategy strategy) {
    if (s.empty()) {
        throw std::invalid_argument("contraction_constant: empty block set");
    }
    if (!(rho.volume == psi)) {
        throw std::invalid_argument(
            "contraction_constant: metric volume must equal psi");
    }
    {
        const auto diags = bs.validate(model);
        if (!diags.empty()) {
            throw std::invalid_argument("contraction_constant: " + diags.front());
        }
    }
    const FiniteDistribution gamma = specification(model, psi, sigma);
    const ConfigurationSpace& space = gamma.space();
    const std::uint64_t n = space.size();
    const int q = model.alphabet_size;

    // Admissibility by energy: states with infinite Hamiltonian are outside
    // the dynamics and are skipped in the sweep.
    std::vector<char> admissible(n, 0);
    {
        std::vector<int> values(model.graph.site_count(), 0);
        for (int site = 0; site < model.graph.site_count(); ++site) {
            if (!psi.contains(site)) values[site] = sigma.value_at(site);
        }
        Configuration probe(Volume::all_sites(model.graph), values);
        std::vector<int> digits;
        for (std::uint64_t idx = 0; idx < n; ++idx) {
            space.decode(idx, digits);
            for (int i = 0; i < psi.size(); ++i) {
                probe.values[psi.sites[i]] = digits[i];
            }
            admissible[idx] = hamiltonian(model, psi, probe) < kForbidden;
        }
    }

    // Full conditional tables per selected block.
    const double w_s = bs.weight_sum(s);
    std::vector<BlockIndexing> indexing;
    std::vector<std::vector<double>> cond_tables;
    std::vector<double> scales;
    for (int i : s) {
        const Volume delta = bs.blocks.at(i).intersect(psi);
        BlockIndexing b = make_block_indexing(space, delta, rho);
        std::vector<double> table(n, 0.0);
        std::vector<double> slice;
        for (std::uint64_t base = 0; base < n; ++base) {
            if (b.base_of(base, q) != base) continue;
            slice.assign(b.count, 0.0);
            double total = 0.0;
            for (std::uint64_t c = 0; c < b.count; ++c) {
                slice[c] = gamma[base + b.offsets[c]];
                total += slice[c];
            }
            if (total > 0.0) {
                for (std::uint64_t c = 0; c < b.count; ++c) {
                    table[base + b.offsets[c]] = slice[c] / total;
                }
            }
        }
        indexing.push_back(std::move(b));
        cond_tables.push_back(std::move(table));
        scales.push_back(bs.weights[i] / w_s);
    }

    ContractionReport report;
    report.strategy = strategy;
    report.per_site_max.assign(psi.sites.size(), 0.0);
    report.per_site_value_a.assign(psi.sites.size(), -1);
    report.per_site_value_b.assign(psi.sites.size(), -1);

    std::vector<double> cond_a, cond_b;
    for (int zp = 0; zp < psi.size(); ++zp) {
        const int z = psi.sites[zp];
        std::uint64_t stride_z = 1;
        for (int j = 0; j < zp; ++j) stride_z *= static_cast<std::uint64_t>(q);
        for (std::size_t k = 0; k < indexing.size(); ++k) {
            indexing[k].contains_z = indexing[k].delta.contains(z);
        }
        for (std::uint64_t eta = 0; eta < n; ++eta) {
            const int a = static_cast<int>((eta / stride_z) % q);
            if (!admissible[eta]) {
                // Unordered pairs with b > a would all involve eta.
                for (int b = a + 1; b < q; ++b) ++report.inadmissible_skipped;
                continue;
            }
            for (int b = a + 1; b < q; ++b) {
                const std::uint64_t xi =
                    eta + static_cast<std::uint64_t>(b - a) * stride_z;
                if (!admissible[xi]) {
                    ++report.inadmissible_skipped;
                    continue;
                }
                const double dist_z = rho.at(zp, a, b);
                double expected = 0.0;
                for (std::size_t k = 0; k < indexing.size(); ++k) {
                    const BlockIndexing& blk = indexing[k];
                    double within = 0.0;
                    if (blk.contains_z &&
                        strategy == CouplingStrategy::optimal) {
                        // Identical conditionals couple as the identity.
                        within = 0.0;
                    } else {
                        const std::uint64_t base_a = blk.base_of(eta, q);
                        const std::uint64_t base_b = blk.base_of(xi, q);
                        cond_a.resize(blk.count);
                        cond_b.resize(blk.count);
                        double mass_a = 0.0, mass_b = 0.0;
                        for (std::uint64_t c = 0; c < blk.count; ++c) {
                            cond_a[c] = cond_tables[k][base_a + blk.offsets[c]];
                            cond_b[c] = cond_tables[k][base_b + blk.offsets[c]];
                            mass_a += cond_a[c];
                            mass_b += cond_b[c];
                        }
                        if (mass_a == 0.0 || mass_b == 0.0) {
                            throw zero_partition_error(
                                "contraction_constant: conditional slice lost "
                                "all mass (energies beyond the exp range)");
                        }
                        within = within_block_distance(blk, rho, cond_a, cond_b,
                                                       strategy);
                    }
                    const double off = blk.contains_z ? 0.0 : dist_z;
                    expected += scales[k] * (within + off);
                }
                const double ratio = expected / dist_z;
                ++report.pairs_evaluated;
                if (ratio > report.per_site_max[zp] ||
                    report.per_site_value_a[zp] < 0) {
                    report.per_site_max[zp] = ratio;
                    report.per_site_value_a[zp] = a;
                    report.per_site_value_b[zp] = b;
                }
                if (ratio > report.max_ratio || report.argmax_site < 0) {
                    report.max_ratio = ratio;
                    report.argmax_site = z;
                    report.argmax_value_a = a;
                    report.argmax_value_b = b;
                    report.argmax_base_index = eta;
                }
            }
        }
    }
    if (report.pairs_evaluated == 0) {
        throw zero_partition_error(
            "contraction_constant: no admissible discrepancy pair");
    }
    report.contracting = report.max_ratio < 1.0;
    return report;
}

UniquenessReport uniqueness_report(const PairPotentialModel& model,
                                   const Volume& lambda,
                                   const std::vector<Volume>& volumes,
                                   BlockRecipe recipe,
                                   CouplingStrategy strategy) {
    UniquenessReport report;
    report.curve = influence_decay_curve(model, lambda, volumes);

    const Volume& psi = volumes.back();
    BlockSystem bs;
    bs.psi = psi;
    if (recipe == BlockRecipe::single_site) {
        for (int site : psi.sites) {
            bs.blocks.push_back(Volume({site}));
            bs.weights.push_back(1.0);
        }
    } else {
        bs.blocks.push_back(psi);
        bs.weights.push_back(1.0);
    }
    const Volume exterior = psi.complement(model.graph);
    const Configuration sigma(exterior,
                              std::vector<int>(exterior.sites.size(), 0));
    report.contraction = contraction_constant(
        model, psi, sigma, bs, BlockSystem::all_indices(bs),
        SiteMetric::discrete(psi, model.alphabet_size), strategy);

    const auto& tv = report.curve.sup_tv;
    bool monotone = true;
    for (std::size_t m = 1; m < tv.size(); ++m) {
        if (tv[m] > tv[m - 1] + kProbTol) monotone = false;
    }
    report.decay_observed =
        tv.back() <= 1e-9 ||
        (monotone && report.curve.decay_rate < -1e-6);
    report.contraction_certified = report.contraction.contracting;

    if (report.decay_observed && report.contraction_certified) {
        report.verdict = "decay observed; contraction certified";
    } else if (report.decay_observed) {
        report.verdict = "decay observed";
    } else if (report.contraction_certified) {
        report.verdict = "contraction certified";
    } else {
        report.verdict = "neither decay nor contraction certified";
    }
    return report;
}

std::string render_report(const ContractionReport& report,
                          const PairPotentialModel& model) {
    std::ostringstream os;
    os << "contraction report\n";
    os << "  strategy: "
       << (report.strategy == CouplingStrategy::optimal ? "optimal"
                                                        : "independent")
       << "\n";
    os << "  max ratio: " << format_real(report.max_ratio) << "\n";
    if (report.argmax_site >= 0) {
        os << "  worst site: " << model.graph.site_names[report.argmax_site]
           << " values " << report.argmax_value_a << "/"
           << report.argmax_value_b << " at state "
           << report.argmax_base_index << "\n";
    }
    os << "  contracting: " << (report.contracting ? "yes" : "no") << "\n";
    os << "  pairs evaluated: " << report.pairs_evaluated
       << " (inadmissible skipped: " << report.inadmissible_skipped << ")\n";
    return os.str();
}

std::string render_report(const UniquenessReport& report,
                          const PairPotentialModel& model) {
    std::ostringstream os;
    os << "uniqueness diagnostics\n";
    os << "  window:";
    for (int site : report.curve.window.sites) {
        os << " " << model.graph.site_names[site];
    }
    os << "\n  influence curve:";
    for (std::size_t m = 0; m < report.curve.sup_tv.size(); ++m) {
        os << " " << format_real(report.curve.sup_tv[m]);
    }
    os << "\n  decay rate: " << format_real(report.curve.decay_rate)
       << " (rms residual " << format_real(report.curve.fit_residual) << ")\n";
    os << "  decay observed: " << (report.decay_observed ? "yes" : "no")
       << "\n";
    os << render_report(report.contraction, model);
    os << "  verdict: " << report.verdict << "\n";
    return os.str();
}

}  // namespace gibbslab
