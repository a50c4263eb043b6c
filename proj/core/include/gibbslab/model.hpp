#ifndef GIBBSLAB_MODEL_HPP_
#define GIBBSLAB_MODEL_HPP_

#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gibbslab {

// Energy of a forbidden (hard-excluded) local arrangement.
inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

// Finite graph of interaction sites. The declared site order is total and
// frozen: it defines configuration indexing everywhere downstream.
struct SpinGraph {
    std::vector<std::string> site_names;
    // Edges keep their declared endpoint order; duplicates compare as
    // unordered pairs.
    std::vector<std::pair<int, int>> edges;

    int site_count() const { return static_cast<int>(site_names.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    // Index of a named site, -1 if absent.
    int site_index(std::string_view name) const;

    // Neighbor lists in ascending site order, deduplicated.
    std::vector<std::vector<int>> adjacency() const;
};

// Subset of graph sites, kept in ascending (declared) order.
struct Volume {
    std::vector<int> sites;

    Volume() = default;
    explicit Volume(std::vector<int> s);

    int size() const { return static_cast<int>(sites.size()); }
    bool empty() const { return sites.empty(); }
    bool contains(int site) const;
    bool subset_of(const Volume& other) const;
    // Position of `site` inside this volume, -1 if absent.
    int position(int site) const;

    static Volume all_sites(const SpinGraph& g);
    // Complement within the graph's site set.
    Volume complement(const SpinGraph& g) const;
    // Set difference this \ other.
    Volume minus(const Volume& other) const;
    // Set intersection.
    Volume intersect(const Volume& other) const;

    bool operator==(const Volume& other) const { return sites == other.sites; }
};

// Pairwise-interacting spin model: per-site self potentials and per-edge pair
// potentials over an alphabet {0,..,q-1}. Entries are finite energies or
// kForbidden for hard exclusions. The pair table of an edge is stored once in
// the declared endpoint order and queried symmetrically.
struct PairPotentialModel {
    SpinGraph graph;
    int alphabet_size = 0;
    std::vector<std::vector<double>> self_potentials;  // [site][value]
    std::vector<std::vector<double>> pair_potentials;  // [edge][a*q + b]

    double self(int site, int value) const {
        return self_potentials[site][value];
    }
    // Value of edge `e` with `va` at the declared first endpoint.
    double pair(int e, int va, int vb) const {
        return pair_potentials[e][va * alphabet_size + vb];
    }
    // Symmetric query by site pair; transposes when (x, y) is reversed.
    double pair_between(int e, int x, int vx, int vy) const {
        return graph.edges[e].first == x ? pair(e, vx, vy) : pair(e, vy, vx);
    }
};

// Checks every structural invariant of the model; returns one located
// message per violation. Total: never throws on malformed input.
std::vector<std::string> validate_model(const PairPotentialModel& model);

struct Configuration;  // defined in configuration.hpp

// H_Lambda(sigma): self terms over Lambda plus every edge touching Lambda,
// each edge counted once. `sigma` must assign all graph sites. Terms
// accumulate in the canonical order: sites ascending, then edges in declared
// order. Returns kForbidden when any term is forbidden.
double hamiltonian(const PairPotentialModel& model, const Volume& lambda,
                   const Configuration& sigma);

// Terms of H_Lambda that avoid Delta entirely: self terms over Lambda\Delta
// and edges touching Lambda with neither endpoint in Delta. Same canonical
// term order as hamiltonian(), so the two split H_Lambda exactly.
double boundary_hamiltonian(const PairPotentialModel& model,
                            const Volume& lambda, const Volume& delta,
                            const Configuration& sigma);

}  // namespace gibbslab

#endif  // GIBBSLAB_MODEL_HPP_
