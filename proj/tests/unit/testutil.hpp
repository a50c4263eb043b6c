#ifndef GIBBSLAB_TESTS_TESTUTIL_HPP_
#define GIBBSLAB_TESTS_TESTUTIL_HPP_

// Shared test fixtures: small reference models, seeded random generators,
// and brute-force oracles kept deliberately independent of the library's
// computation paths.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "gibbslab/coupling.hpp"
#include "gibbslab/distribution.hpp"
#include "gibbslab/dynamics.hpp"
#include "gibbslab/model.hpp"
#include "gibbslab/rng.hpp"

namespace gibbslab::test {

// ---------------------------------------------------------------- models --

inline double ising_pair_energy(double beta, int a, int b) {
    const double sa = a == 0 ? -1.0 : 1.0;
    const double sb = b == 0 ? -1.0 : 1.0;
    return -beta * sa * sb;
}

// Single edge x-y with U(a,b) = -beta*s(a)*s(b), spins +-1, zero fields.
inline PairPotentialModel make_ising_edge(double beta) {
    PairPotentialModel model;
    model.graph.site_names = {"x", "y"};
    model.graph.edges = {{0, 1}};
    model.alphabet_size = 2;
    model.self_potentials.assign(2, {0.0, 0.0});
    model.pair_potentials.assign(1, std::vector<double>(4));
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            model.pair_potentials[0][a * 2 + b] = ising_pair_energy(beta, a, b);
        }
    }
    return model;
}

// Path p1 - p2 - ... - pn of Ising spins.
inline PairPotentialModel make_ising_path(int n, double beta) {
    PairPotentialModel model;
    model.alphabet_size = 2;
    for (int i = 0; i < n; ++i) {
        model.graph.site_names.push_back("p" + std::to_string(i + 1));
    }
    model.self_potentials.assign(n, {0.0, 0.0});
    for (int i = 0; i + 1 < n; ++i) {
        model.graph.edges.emplace_back(i, i + 1);
        std::vector<double> table(4);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                table[a * 2 + b] = ising_pair_energy(beta, a, b);
            }
        }
        model.pair_potentials.push_back(std::move(table));
    }
    return model;
}

// 2x2 periodic-free grid: g00-g10, g01-g11, g00-g01, g10-g11.
inline PairPotentialModel make_ising_grid2(double beta) {
    PairPotentialModel model;
    model.alphabet_size = 2;
    model.graph.site_names = {"g00", "g10", "g01", "g11"};
    model.graph.edges = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
    model.self_potentials.assign(4, {0.0, 0.0});
    std::vector<double> table(4);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) table[a * 2 + b] = ising_pair_energy(beta, a, b);
    }
    model.pair_potentials.assign(4, table);
    return model;
}

// Hard-core path: value 1 = occupied, adjacent occupation forbidden.
inline PairPotentialModel make_hardcore_path(int n) {
    PairPotentialModel model;
    model.alphabet_size = 2;
    for (int i = 0; i < n; ++i) {
        model.graph.site_names.push_back("h" + std::to_string(i + 1));
    }
    model.self_potentials.assign(n, {0.0, 0.0});
    for (int i = 0; i + 1 < n; ++i) {
        model.graph.edges.emplace_back(i, i + 1);
        model.pair_potentials.push_back({0.0, 0.0, 0.0, kForbidden});
    }
    return model;
}

// All-zero potentials over a given graph shape.
inline PairPotentialModel make_free_model(int n, int q,
                                          std::vector<std::pair<int, int>> edges) {
    PairPotentialModel model;
    model.alphabet_size = q;
    for (int i = 0; i < n; ++i) {
        model.graph.site_names.push_back("s" + std::to_string(i));
    }
    model.graph.edges = std::move(edges);
    model.self_potentials.assign(n, std::vector<double>(q, 0.0));
    model.pair_potentials.assign(model.graph.edges.size(),
                                 std::vector<double>(q * q, 0.0));
    return model;
}

struct RandomModelOptions {
    int sites = 4;
    int alphabet = 2;
    double edge_prob = 0.6;
    bool dyadic = false;      // energies k/256 so floating sums are exact
    double hard_prob = 0.0;   // chance of a +inf pair entry
};

inline double random_energy(Rng& rng, const RandomModelOptions& opt) {
    if (opt.hard_prob > 0.0 && rng.uniform01() < opt.hard_prob) return kForbidden;
    if (opt.dyadic) {
        return (static_cast<double>(rng.below(1025)) - 512.0) / 256.0;
    }
    return rng.uniform01() * 3.0 - 1.5;
}

inline PairPotentialModel random_model(Rng& rng, const RandomModelOptions& opt) {
    PairPotentialModel model;
    model.alphabet_size = opt.alphabet;
    for (int i = 0; i < opt.sites; ++i) {
        model.graph.site_names.push_back("s" + std::to_string(i));
    }
    for (int a = 0; a < opt.sites; ++a) {
        for (int b = a + 1; b < opt.sites; ++b) {
            if (rng.uniform01() < opt.edge_prob) model.graph.edges.emplace_back(a, b);
        }
    }
    model.self_potentials.resize(opt.sites);
    for (auto& table : model.self_potentials) {
        table.resize(opt.alphabet);
        for (double& u : table) u = random_energy(rng, opt);
    }
    model.pair_potentials.resize(model.graph.edges.size());
    for (auto& table : model.pair_potentials) {
        table.resize(static_cast<std::size_t>(opt.alphabet) * opt.alphabet);
        for (double& u : table) u = random_energy(rng, opt);
    }
    return model;
}

// ----------------------------------------------------------- assignments --

inline Volume random_volume(Rng& rng, int n_sites, bool nonempty = true) {
    std::vector<int> sites;
    for (int i = 0; i < n_sites; ++i) {
        if (rng.uniform01() < 0.5) sites.push_back(i);
    }
    if (nonempty && sites.empty()) {
        sites.push_back(static_cast<int>(rng.below(n_sites)));
    }
    return Volume(std::move(sites));
}

inline Volume random_subvolume(Rng& rng, const Volume& parent,
                               bool nonempty = true) {
    std::vector<int> sites;
    for (int site : parent.sites) {
        if (rng.uniform01() < 0.5) sites.push_back(site);
    }
    if (nonempty && sites.empty() && !parent.empty()) {
        sites.push_back(
            parent.sites[rng.below(parent.sites.size())]);
    }
    return Volume(std::move(sites));
}

inline Configuration random_configuration(Rng& rng, const Volume& volume,
                                          int q) {
    std::vector<int> values(volume.sites.size());
    for (auto& v : values) v = static_cast<int>(rng.below(q));
    return Configuration(volume, std::move(values));
}

inline Configuration random_boundary(Rng& rng, const PairPotentialModel& model,
                                     const Volume& lambda) {
    return random_configuration(rng, lambda.complement(model.graph),
                                model.alphabet_size);
}

inline Configuration zero_boundary(const PairPotentialModel& model,
                                   const Volume& lambda) {
    const Volume exterior = lambda.complement(model.graph);
    return Configuration(exterior, std::vector<int>(exterior.sites.size(), 0));
}

// -------------------------------------------------------- distributions --

inline FiniteDistribution random_distribution(Rng& rng,
                                              const ConfigurationSpace& space,
                                              double zero_prob = 0.0) {
    const std::uint64_t n = space.size();
    std::vector<double> probs(n);
    double total = 0.0;
    for (auto& p : probs) {
        p = (zero_prob > 0.0 && rng.uniform01() < zero_prob)
                ? 0.0
                : rng.uniform01() + 1e-3;
        total += p;
    }
    if (total == 0.0) {
        probs[0] = 1.0;
        total = 1.0;
    }
    for (auto& p : probs) p /= total;
    return FiniteDistribution(space, std::move(probs));
}

inline Coupling random_coupling(Rng& rng, const ConfigurationSpace& space,
                                double zero_prob = 0.3) {
    const std::uint64_t n = space.size();
    std::vector<double> joint(n * n);
    double total = 0.0;
    for (auto& m : joint) {
        m = rng.uniform01() < zero_prob ? 0.0 : rng.uniform01();
        total += m;
    }
    if (total == 0.0) {
        joint[0] = 1.0;
        total = 1.0;
    }
    for (auto& m : joint) m /= total;
    // Declared marginals are the joint's own sums, accumulated in the same
    // order the validator uses.
    std::vector<double> row(n, 0.0), col(n, 0.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::uint64_t j = 0; j < n; ++j) row[i] += joint[i * n + j];
    }
    for (std::uint64_t j = 0; j < n; ++j) {
        for (std::uint64_t i = 0; i < n; ++i) col[j] += joint[i * n + j];
    }
    return Coupling(FiniteDistribution(space, std::move(row)),
                    FiniteDistribution(space, std::move(col)),
                    std::move(joint));
}

// Chain of couplings with matching interfaces; later links are built from
// random row-stochastic conditionals over the previous column marginal.
inline PathChain random_chain(Rng& rng, const ConfigurationSpace& space,
                              int length, double zero_prob = 0.2) {
    PathChain chain;
    chain.links.push_back(random_coupling(rng, space, zero_prob));
    for (int j = 1; j < length; ++j) {
        const FiniteDistribution& prev = chain.links.back().col_marginal();
        const std::uint64_t n = prev.size();
        std::vector<double> joint(n * n, 0.0), col(n, 0.0);
        for (std::uint64_t x = 0; x < n; ++x) {
            if (prev[x] == 0.0) continue;
            std::vector<double> row(n);
            double total = 0.0;
            for (auto& p : row) {
                p = rng.uniform01() < zero_prob ? 0.0 : rng.uniform01() + 1e-3;
                total += p;
            }
            if (total == 0.0) {
                row[0] = 1.0;
                total = 1.0;
            }
            for (std::uint64_t y = 0; y < n; ++y) {
                joint[x * n + y] = prev[x] * (row[y] / total);
            }
        }
        for (std::uint64_t y = 0; y < n; ++y) {
            for (std::uint64_t x = 0; x < n; ++x) col[y] += joint[x * n + y];
        }
        double colsum = 0.0;
        for (double c : col) colsum += c;
        for (double& c : col) c /= colsum;
        for (auto& m : joint) m /= colsum;
        std::vector<double> row_marg(n, 0.0);
        for (std::uint64_t x = 0; x < n; ++x) {
            for (std::uint64_t y = 0; y < n; ++y) row_marg[x] += joint[x * n + y];
        }
        chain.links.emplace_back(FiniteDistribution(space, std::move(row_marg)),
                                 FiniteDistribution(space, std::move(col)),
                                 std::move(joint));
    }
    return chain;
}

// Per-site metrics of the form rho(a,b) = r_a + r_b (a != b): symmetric,
// positive, and triangle-respecting for any radii r > 0.
inline SiteMetric random_metric(Rng& rng, const Volume& volume, int q,
                                double discrete_prob = 0.3) {
    if (rng.uniform01() < discrete_prob) {
        return SiteMetric::discrete(volume, q);
    }
    std::vector<std::vector<double>> tables(volume.sites.size());
    for (auto& table : tables) {
        std::vector<double> radius(q);
        for (auto& r : radius) r = 0.25 + rng.uniform01() * 1.25;
        table.assign(static_cast<std::size_t>(q) * q, 0.0);
        for (int a = 0; a < q; ++a) {
            for (int b = 0; b < q; ++b) {
                if (a != b) table[a * q + b] = radius[a] + radius[b];
            }
        }
    }
    return SiteMetric::from_tables(volume, q, std::move(tables));
}

// Random covering block system over psi.
inline BlockSystem random_blocksystem(Rng& rng, const Volume& psi,
                                      int extra_blocks = 2) {
    BlockSystem bs;
    bs.psi = psi;
    for (int b = 0; b < extra_blocks; ++b) {
        Volume block = random_subvolume(rng, psi, true);
        bs.blocks.push_back(std::move(block));
        bs.weights.push_back(0.5 + rng.uniform01() * 1.5);
    }
    for (int site : psi.sites) {
        if (bs.membership(site).empty()) {
            bs.blocks.push_back(Volume({site}));
            bs.weights.push_back(0.5 + rng.uniform01() * 1.5);
        }
    }
    return bs;
}

// ---------------------------------------------------------------- oracles --

// Specification by the defining formula, no log-shift: exp(-H)/Z.
inline std::vector<double> oracle_specification(const PairPotentialModel& model,
                                                const Volume& lambda,
                                                const Configuration& sigma) {
    ConfigurationSpace space(lambda, model.alphabet_size, &model);
    const std::uint64_t n = space.size();
    const Volume everything = Volume::all_sites(model.graph);
    std::vector<int> values(model.graph.site_count(), 0);
    for (int site = 0; site < model.graph.site_count(); ++site) {
        if (!lambda.contains(site)) values[site] = sigma.value_at(site);
    }
    std::vector<double> weights(n);
    double z = 0.0;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        Configuration tau = space.at(idx);
        for (int i = 0; i < lambda.size(); ++i) {
            values[lambda.sites[i]] = tau.values[i];
        }
        const double h =
            hamiltonian(model, lambda, Configuration(everything, values));
        weights[idx] = h == kForbidden ? 0.0 : std::exp(-h);
        z += weights[idx];
    }
    for (auto& w : weights) w /= z;
    return weights;
}

// Marginal by grouping decoded configurations, independent of the engine's
// stride arithmetic.
inline std::vector<double> oracle_marginal(const FiniteDistribution& mu,
                                           const Volume& lambda) {
    std::map<std::vector<int>, double> groups;
    for (std::uint64_t idx = 0; idx < mu.size(); ++idx) {
        const Configuration config = mu.space().at(idx);
        std::vector<int> key;
        for (int site : lambda.sites) key.push_back(config.value_at(site));
        groups[key] += mu[idx];
    }
    ConfigurationSpace lambda_space(lambda, mu.space().alphabet_size);
    std::vector<double> out(lambda_space.size(), 0.0);
    for (const auto& [key, mass] : groups) {
        out[lambda_space.index_of(Configuration(lambda, key))] += mass;
    }
    return out;
}

// Expected per-site distance by the plain double sum over decoded pairs.
inline double oracle_rho_volume(const Coupling& q, const SiteMetric& rho,
                                const Volume& lambda) {
    double acc = 0.0;
    for (std::uint64_t i = 0; i < q.rows(); ++i) {
        const Configuration a = q.row_space().at(i);
        for (std::uint64_t j = 0; j < q.cols(); ++j) {
            const double mass = q.mass(i, j);
            if (mass == 0.0) continue;
            const Configuration b = q.col_space().at(j);
            double dist = 0.0;
            for (int site : lambda.sites) {
                const int pos = rho.volume.position(site);
                dist += rho.tables[pos][a.value_at(site) * rho.alphabet_size +
                                        b.value_at(site)];
            }
            acc += mass * dist;
        }
    }
    return acc;
}

// Path composition by enumerating whole trajectories of the chain.
inline std::vector<double> oracle_compose(const PathChain& chain) {
    const std::uint64_t n0 = chain.links.front().rows();
    const std::uint64_t nl = chain.links.back().cols();
    std::vector<double> joint(n0 * nl, 0.0);
    const std::size_t links = chain.links.size();

    // Odometer over whole trajectories; mass multiplies conditionals.
    std::vector<std::uint64_t> sizes(links + 1);
    sizes[0] = n0;
    for (std::size_t j = 0; j < links; ++j) sizes[j + 1] = chain.links[j].cols();

    std::vector<std::uint64_t> idx(links + 1, 0);
    for (;;) {
        double mass = chain.links.front().row_marginal()[idx[0]];
        for (std::size_t j = 0; j < links && mass != 0.0; ++j) {
            const auto& link = chain.links[j];
            const double rm = link.row_marginal()[idx[j]];
            double cond;
            if (rm > 0.0) {
                cond = link.mass(idx[j], idx[j + 1]) / rm;
            } else {
                cond = idx[j + 1] == 0 ? 1.0 : 0.0;  // lowest-index convention
            }
            mass *= cond;
        }
        joint[idx[0] * nl + idx[links]] += mass;

        std::size_t k = 0;
        while (k <= links && ++idx[k] == sizes[k]) {
            idx[k] = 0;
            ++k;
        }
        if (k > links) break;
    }
    return joint;
}

// Exhaustive best-event total variation over all 2^n events (n <= 16).
inline double oracle_event_tv(const std::vector<double>& p,
                              const std::vector<double>& r) {
    const std::size_t n = p.size();
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::uint64_t{1} << i)) diff += p[i] - r[i];
        }
        best = std::max(best, diff);
    }
    return best;
}

inline double sup_norm_diff(const std::vector<double>& a,
                            const std::vector<double>& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sup = std::max(sup, std::abs(a[i] - b[i]));
    }
    return sup;
}

}  // namespace gibbslab::test

#endif  // GIBBSLAB_TESTS_TESTUTIL_HPP_
