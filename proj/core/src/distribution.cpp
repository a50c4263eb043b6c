#include "gibbslab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gibbslab/specification.hpp"

namespace gibbslab {

FiniteDistribution::FiniteDistribution(ConfigurationSpace space,
                                       std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
    if (probs_.size() != space_.size()) {
        std::ostringstream os;
        os << "FiniteDistribution: " << probs_.size() << " probabilities for a "
           << space_.size() << "-state space";
        throw std::invalid_argument(os.str());
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (p < 0.0 || std::isnan(p)) {
            throw std::invalid_argument(
                "FiniteDistribution: negative or NaN probability");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbTol) {
        std::ostringstream os;
        os << "FiniteDistribution: probabilities sum to " << sum;
        throw std::invalid_argument(os.str());
    }
}

FiniteDistribution FiniteDistribution::uniform(ConfigurationSpace space) {
    const std::uint64_t n = space.size();
    return FiniteDistribution(std::move(space),
                              std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

FiniteDistribution FiniteDistribution::point_mass(ConfigurationSpace space,
                                                  std::uint64_t index) {
    std::vector<double> probs(space.size(), 0.0);
    probs.at(index) = 1.0;
    return FiniteDistribution(std::move(space), std::move(probs));
}

namespace {

void require_compatible(const FiniteDistribution& mu,
                        const FiniteDistribution& nu, const char* who) {
    if (!mu.space().compatible(nu.space())) {
        throw std::invalid_argument(std::string(who) +
                                    ": distributions live on different spaces");
    }
}

}  // namespace

double tv_distance(const FiniteDistribution& mu, const FiniteDistribution& nu,
                   TvMethod method) {
    require_compatible(mu, nu, "tv_distance");
    const auto& p = mu.probabilities();
    const auto& r = nu.probabilities();
    switch (method) {
        case TvMethod::half_sum: {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - r[i]);
            return 0.5 * acc;
        }
        case TvMethod::best_event: {
            // mu(B) - nu(B) on the maximizing event B = {i : mu_i >= nu_i}.
            double acc = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] >= r[i]) acc += p[i] - r[i];
            }
            return acc;
        }
        case TvMethod::one_minus_min: {
            double acc = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) acc += std::min(p[i], r[i]);
            return 1.0 - acc;
        }
    }
    throw std::invalid_argument("tv_distance: unknown method");
}

FiniteDistribution project(const FiniteDistribution& mu, const Volume& lambda) {
    const ConfigurationSpace& w_space = mu.space();
    if (!lambda.subset_of(w_space.volume)) {
        throw std::invalid_argument(
            "project: lambda is not contained in the distribution's volume");
    }
    if (lambda == w_space.volume) return mu;

    const int q = w_space.alphabet_size;
    ConfigurationSpace lambda_space(lambda, q, w_space.model, w_space.boundary);
    std::vector<double> out(lambda_space.size(), 0.0);

    // Odometer over the full space keeping the projected index in step: the
    // contribution of digit i to the lambda index is q^{position in lambda}
    // (zero for dropped sites).
    const int k = w_space.volume.size();
    std::vector<std::uint64_t> stride(k, 0);
    {
        std::uint64_t radix = 1;
        for (int i = 0; i < k; ++i) {
            int pos = lambda.position(w_space.volume.sites[i]);
            if (pos >= 0) {
                std::uint64_t s = 1;
                for (int j = 0; j < pos; ++j) s *= static_cast<std::uint64_t>(q);
                stride[i] = s;
            }
            radix *= static_cast<std::uint64_t>(q);
        }
    }
    std::vector<int> digits(k, 0);
    std::uint64_t lambda_index = 0;
    const std::uint64_t n = w_space.size();
    const auto& p = mu.probabilities();
    for (std::uint64_t idx = 0; idx < n; ++idx) {
        out[lambda_index] += p[idx];
        for (int i = 0; i < k; ++i) {
            if (++digits[i] < q) {
                lambda_index += stride[i];
                break;
            }
            digits[i] = 0;
            lambda_index -= stride[i] * static_cast<std::uint64_t>(q - 1);
        }
    }
    return FiniteDistribution(std::move(lambda_space), std::move(out));
}

double projected_tv(const FiniteDistribution& mu, const FiniteDistribution& nu,
                    const Volume& lambda) {
    require_compatible(mu, nu, "projected_tv");
    return tv_distance(project(mu, lambda), project(nu, lambda));
}

FiniteDistribution mix(const std::vector<double>& weights,
                       const std::vector<FiniteDistribution>& components) {
    if (components.empty() || weights.size() != components.size()) {
        throw std::invalid_argument("mix: need one weight per component");
    }
    double wsum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || std::isnan(w)) {
            throw std::invalid_argument("mix: weights must be nonnegative");
        }
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > kProbTol) {
        throw std::invalid_argument("mix: weights must sum to 1");
    }
    for (std::size_t c = 1; c < components.size(); ++c) {
        if (!components[c].space().compatible(components[0].space())) {
            throw std::invalid_argument("mix: components live on different spaces");
        }
    }
    std::vector<double> out(components[0].size(), 0.0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& p = components[c].probabilities();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += weights[c] * p[i];
    }
    double residual = 0.0;
    for (double p : out) residual += p;
    if (std::abs(residual - 1.0) > kProbTol) {
        throw std::invalid_argument("mix: mixture mass drifted beyond tolerance");
    }
    for (double& p : out) p /= residual;
    return FiniteDistribution(components[0].space(), std::move(out));
}

BoundaryMixture decompose_over_boundary(const PairPotentialModel& model,
                                        const Volume& w,
                                        const Configuration& sigma,
                                        const Volume& psi,
                                        const Volume& lambda) {
    if (!lambda.subset_of(psi) || !psi.subset_of(w)) {
        throw std::invalid_argument(
            "decompose_over_boundary: need lambda ⊆ psi ⊆ w");
    }
    const FiniteDistribution full = specification(model, w, sigma);

    // Only the sites of w\psi adjacent to psi can influence the
    // psi-specification.
    const Volume annulus = w.minus(psi);
    std::vector<int> adjacent;
    const auto adj = model.graph.adjacency();
    for (int site : annulus.sites) {
        for (int nbr : adj[site]) {
            if (psi.contains(nbr)) {
                adjacent.push_back(site);
                break;
            }
        }
    }
    const Volume frontier(std::move(adjacent));

    const FiniteDistribution pattern_dist = project(full, frontier);
    const ConfigurationSpace& pattern_space = pattern_dist.space();

    const Volume psi_exterior = psi.complement(model.graph);
    BoundaryMixture mixture;
    mixture.pattern_space = pattern_space;
    for (std::uint64_t pat = 0; pat < pattern_dist.size(); ++pat) {
        const double weight = pattern_dist[pat];
        if (weight <= 0.0) continue;
        Configuration pattern = pattern_space.at(pat);

        // Boundary of psi: the pattern on the frontier, sigma outside w,
        // zero on the rest of w\psi (the specification never reads those).
        std::vector<int> values(psi_exterior.size(), 0);
        for (int i = 0; i < psi_exterior.size(); ++i) {
            int site = psi_exterior.sites[i];
            if (frontier.contains(site)) {
                values[i] = pattern.value_at(site);
            } else if (!w.contains(site)) {
                values[i] = sigma.value_at(site);
            }
        }
        Configuration boundary(psi_exterior, std::move(values));
        mixture.components.push_back(
            project(specification(model, psi, boundary), lambda));
        mixture.weights.push_back(weight);
        mixture.patterns.push_back(std::move(pattern));
    }
    return mixture;
}

}  // namespace gibbslab
