#include "gibbslab/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gibbslab/configuration.hpp"

namespace gibbslab {

int SpinGraph::site_index(std::string_view name) const {
    for (int i = 0; i < site_count(); ++i) {
        if (site_names[i] == name) return i;
    }
    return -1;
}

std::vector<std::vector<int>> SpinGraph::adjacency() const {
    std::vector<std::set<int>> nbr(site_names.size());
    for (const auto& [a, b] : edges) {
        if (a >= 0 && b >= 0 && a < site_count() && b < site_count() && a != b) {
            nbr[a].insert(b);
            nbr[b].insert(a);
        }
    }
    std::vector<std::vector<int>> out(site_names.size());
    for (std::size_t i = 0; i < nbr.size(); ++i) {
        out[i].assign(nbr[i].begin(), nbr[i].end());
    }
    return out;
}

Volume::Volume(std::vector<int> s) : sites(std::move(s)) {
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
}

bool Volume::contains(int site) const {
    return std::binary_search(sites.begin(), sites.end(), site);
}

bool Volume::subset_of(const Volume& other) const {
    return std::includes(other.sites.begin(), other.sites.end(),
                         sites.begin(), sites.end());
}

int Volume::position(int site) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), site);
    if (it == sites.end() || *it != site) return -1;
    return static_cast<int>(it - sites.begin());
}

Volume Volume::all_sites(const SpinGraph& g) {
    std::vector<int> s(g.site_count());
    for (int i = 0; i < g.site_count(); ++i) s[i] = i;
    return Volume(std::move(s));
}

Volume Volume::complement(const SpinGraph& g) const {
    std::vector<int> out;
    out.reserve(g.site_count() - size());
    for (int i = 0; i < g.site_count(); ++i) {
        if (!contains(i)) out.push_back(i);
    }
    return Volume(std::move(out));
}

Volume Volume::minus(const Volume& other) const {
    std::vector<int> out;
    std::set_difference(sites.begin(), sites.end(), other.sites.begin(),
                        other.sites.end(), std::back_inserter(out));
    return Volume(std::move(out));
}

Volume Volume::intersect(const Volume& other) const {
    std::vector<int> out;
    std::set_intersection(sites.begin(), sites.end(), other.sites.begin(),
                          other.sites.end(), std::back_inserter(out));
    return Volume(std::move(out));
}

namespace {

std::string edge_name(const PairPotentialModel& model, int e) {
    const auto& [a, b] = model.graph.edges[e];
    std::ostringstream os;
    os << "edge " << e << " (";
    if (a >= 0 && a < model.graph.site_count()) {
        os << model.graph.site_names[a];
    } else {
        os << "#" << a;
    }
    os << ",";
    if (b >= 0 && b < model.graph.site_count()) {
        os << model.graph.site_names[b];
    } else {
        os << "#" << b;
    }
    os << ")";
    return os.str();
}

bool admissible_energy(double u) {
    // Finite or +inf; -inf and NaN are malformed.
    return (std::isfinite(u) || u == kForbidden);
}

}  // namespace

std::vector<std::string> validate_model(const PairPotentialModel& model) {
    std::vector<std::string> diags;
    const int n = model.graph.site_count();
    const int q = model.alphabet_size;

    if (q <= 0) diags.push_back("alphabet: size must be positive");

    std::set<std::string> seen_names;
    for (int i = 0; i < n; ++i) {
        if (!seen_names.insert(model.graph.site_names[i]).second) {
            diags.push_back("site " + model.graph.site_names[i] +
                            ": duplicate name");
        }
    }

    std::set<std::pair<int, int>> seen_edges;
    for (int e = 0; e < model.graph.edge_count(); ++e) {
        const auto& [a, b] = model.graph.edges[e];
        if (a < 0 || a >= n || b < 0 || b >= n) {
            diags.push_back(edge_name(model, e) + ": endpoint not a declared site");
            continue;
        }
        if (a == b) {
            diags.push_back(edge_name(model, e) + ": self-loop");
            continue;
        }
        auto key = std::minmax(a, b);
        if (!seen_edges.insert(key).second) {
            diags.push_back(edge_name(model, e) + ": duplicate edge");
        }
    }

    if (static_cast<int>(model.self_potentials.size()) != n) {
        std::ostringstream os;
        os << "self potentials: " << model.self_potentials.size()
           << " tables for " << n << " sites";
        diags.push_back(os.str());
    }
    if (q > 0) {
        const int m = std::min<int>(n, model.self_potentials.size());
        for (int i = 0; i < m; ++i) {
            if (static_cast<int>(model.self_potentials[i].size()) != q) {
                std::ostringstream os;
                os << "site " << model.graph.site_names[i] << ": self table has "
                   << model.self_potentials[i].size() << " entries, expected " << q;
                diags.push_back(os.str());
            } else {
                for (double u : model.self_potentials[i]) {
                    if (!admissible_energy(u)) {
                        diags.push_back("site " + model.graph.site_names[i] +
                                        ": self energy must be finite or inf");
                        break;
                    }
                }
            }
        }
    }

    if (model.pair_potentials.size() != model.graph.edges.size()) {
        std::ostringstream os;
        os << "pair potentials: " << model.pair_potentials.size()
           << " tables for " << model.graph.edges.size() << " edges";
        diags.push_back(os.str());
    }
    if (q > 0) {
        const std::size_t m =
            std::min(model.pair_potentials.size(), model.graph.edges.size());
        for (std::size_t e = 0; e < m; ++e) {
            const auto& table = model.pair_potentials[e];
            if (static_cast<int>(table.size()) != q * q) {
                std::ostringstream os;
                os << edge_name(model, static_cast<int>(e)) << ": pair table has "
                   << table.size() << " entries, expected " << q * q;
                diags.push_back(os.str());
            } else {
                for (double u : table) {
                    if (!admissible_energy(u)) {
                        diags.push_back(edge_name(model, static_cast<int>(e)) +
                                        ": pair energy must be finite or inf");
                        break;
                    }
                }
            }
        }
    }
    return diags;
}

double hamiltonian(const PairPotentialModel& model, const Volume& lambda,
                   const Configuration& sigma) {
    // Canonical term order: self terms over lambda (ascending site), then
    // every edge with an endpoint in lambda (declared edge order).
    double h = 0.0;
    for (int site : lambda.sites) {
        h += model.self(site, sigma.value_at(site));
    }
    for (int e = 0; e < model.graph.edge_count(); ++e) {
        const auto& [a, b] = model.graph.edges[e];
        if (lambda.contains(a) || lambda.contains(b)) {
            h += model.pair(e, sigma.value_at(a), sigma.value_at(b));
        }
    }
    return h;
}

double boundary_hamiltonian(const PairPotentialModel& model,
                            const Volume& lambda, const Volume& delta,
                            const Configuration& sigma) {
    if (!delta.subset_of(lambda)) {
        throw std::invalid_argument(
            "boundary_hamiltonian: delta is not contained in lambda");
    }
    double h = 0.0;
    for (int site : lambda.sites) {
        if (!delta.contains(site)) {
            h += model.self(site, sigma.value_at(site));
        }
    }
    for (int e = 0; e < model.graph.edge_count(); ++e) {
        const auto& [a, b] = model.graph.edges[e];
        if ((lambda.contains(a) || lambda.contains(b)) && !delta.contains(a) &&
            !delta.contains(b)) {
            h += model.pair(e, sigma.value_at(a), sigma.value_at(b));
        }
    }
    return h;
}

}  // namespace gibbslab
