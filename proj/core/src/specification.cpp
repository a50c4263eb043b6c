#include "gibbslab/specification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

std::string volume_names(const PairPotentialModel& model, const Volume& v) {
    std::ostringstream os;
    os << "{";
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << model.graph.site_names[v.sites[i]];
    }
    os << "}";
    return os.str();
}

// Values for every graph site: the boundary fixed, lambda mutable.
std::vector<int> full_buffer(const PairPotentialModel& model,
                             const Volume& lambda,
                             const Configuration& sigma) {
    std::vector<int> values(model.graph.site_count(), 0);
    for (int site = 0; site < model.graph.site_count(); ++site) {
        if (!lambda.contains(site)) {
            if (!sigma.defines(site)) {
                throw std::invalid_argument(
                    "specification: boundary does not assign site " +
                    model.graph.site_names[site]);
            }
            values[site] = sigma.value_at(site);
        }
    }
    return values;
}

// Terms of H_lambda, frozen in the canonical order.
struct TermList {
    std::vector<int> self_sites;
    std::vector<int> edges;
};

TermList collect_terms(const PairPotentialModel& model, const Volume& lambda) {
    TermList t;
    t.self_sites = lambda.sites;
    for (int e = 0; e < model.graph.edge_count(); ++e) {
        const auto& [a, b] = model.graph.edges[e];
        if (lambda.contains(a) || lambda.contains(b)) t.edges.push_back(e);
    }
    return t;
}

double energy_of(const PairPotentialModel& model, const TermList& terms,
                 const std::vector<int>& values) {
    double h = 0.0;
    for (int site : terms.self_sites) h += model.self(site, values[site]);
    for (int e : terms.edges) {
        const auto& [a, b] = model.graph.edges[e];
        h += model.pair(e, values[a], values[b]);
    }
    return h;
}

}  // namespace

FiniteDistribution specification(const PairPotentialModel& model,
                                 const Volume& lambda,
                                 const Configuration& sigma) {
    ConfigurationSpace space(lambda, model.alphabet_size, &model, sigma);
    const std::uint64_t n = space.size();
    const TermList terms = collect_terms(model, lambda);

    std::vector<int> values = full_buffer(model, lambda, sigma);
    const int q = model.alphabet_size;
    const int k = lambda.size();

    std::vector<double> log_w(n);
    double max_log_w = -kForbidden;
    std::vector<int> digits(k, 0);
    for (int i = 0; i < k; ++i) values[lambda.sites[i]] = 0;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        log_w[idx] = -energy_of(model, terms, values);
        max_log_w = std::max(max_log_w, log_w[idx]);
        // little-endian odometer
        for (int i = 0; i < k; ++i) {
            if (++digits[i] < q) {
                values[lambda.sites[i]] = digits[i];
                break;
            }
            digits[i] = 0;
            values[lambda.sites[i]] = 0;
        }
    }

    if (!(max_log_w > -kForbidden)) {
        throw zero_partition_error(
            "specification: no admissible configuration on " +
            volume_names(model, lambda) + " under boundary " +
            volume_names(model, lambda.complement(model.graph)));
    }

    // Shift by the maximum log-weight so the largest term exponentiates to 1.
    std::vector<double> probs(n);
    double z = 0.0;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        probs[idx] = std::exp(log_w[idx] - max_log_w);
        z += probs[idx];
    }
    for (double& p : probs) p /= z;
    return FiniteDistribution(std::move(space), std::move(probs));
}

FiniteDistribution condition_specification(const PairPotentialModel& model,
                                           const Volume& lambda,
                                           const Configuration& sigma,
                                           const Volume& delta,
                                           const Configuration& tau) {
    if (!delta.subset_of(lambda)) {
        throw std::invalid_argument(
            "condition_specification: delta is not contained in lambda");
    }
    const FiniteDistribution gamma = specification(model, lambda, sigma);
    // Conditioning on nothing: the whole table, untouched.
    if (delta == lambda) return gamma;

    const Volume fixed = lambda.minus(delta);
    // Lambda-space digits of the conditioning event, delta positions zeroed.
    std::vector<int> lambda_values(lambda.size(), 0);
    for (int i = 0; i < fixed.size(); ++i) {
        if (!tau.defines(fixed.sites[i])) {
            throw std::invalid_argument(
                "condition_specification: tau does not fix site " +
                model.graph.site_names[fixed.sites[i]]);
        }
        lambda_values[lambda.position(fixed.sites[i])] =
            tau.value_at(fixed.sites[i]);
    }

    // Boundary of the conditional: tau on lambda\delta, sigma outside lambda.
    const Volume delta_exterior = delta.complement(model.graph);
    std::vector<int> boundary_values(delta_exterior.size());
    for (int i = 0; i < delta_exterior.size(); ++i) {
        int site = delta_exterior.sites[i];
        boundary_values[i] = fixed.contains(site) ? tau.value_at(site)
                                                  : sigma.value_at(site);
    }
    Configuration boundary(delta_exterior, std::move(boundary_values));

    ConfigurationSpace delta_space(delta, model.alphabet_size, &model,
                                   std::move(boundary));
    const std::uint64_t n = delta_space.size();
    std::vector<int> delta_positions(delta.size());
    for (int i = 0; i < delta.size(); ++i) {
        delta_positions[i] = lambda.position(delta.sites[i]);
    }

    // Bayes restriction of the full table to the event {agrees with tau}.
    std::vector<double> probs(n);
    std::vector<int> delta_digits;
    double event_mass = 0.0;
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        delta_space.decode(idx, delta_digits);
        for (int i = 0; i < delta.size(); ++i) {
            lambda_values[delta_positions[i]] = delta_digits[i];
        }
        std::uint64_t lambda_index = 0;
        std::uint64_t radix = 1;
        for (int i = 0; i < lambda.size(); ++i) {
            lambda_index += static_cast<std::uint64_t>(lambda_values[i]) * radix;
            radix *= static_cast<std::uint64_t>(model.alphabet_size);
        }
        probs[idx] = gamma[lambda_index];
        event_mass += probs[idx];
    }

    if (event_mass <= 0.0) {
        throw zero_partition_error(
            "condition_specification: conditioning event has probability zero "
            "on " + volume_names(model, delta));
    }
    for (double& p : probs) p /= event_mass;
    return FiniteDistribution(std::move(delta_space), std::move(probs));
}

}  // namespace gibbslab
