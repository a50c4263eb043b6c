#include "gibbslab/configuration.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

#include "gibbslab/errors.hpp"

namespace gibbslab {

Configuration::Configuration(Volume vol, std::vector<int> vals)
    : volume(std::move(vol)), values(std::move(vals)) {
    if (values.size() != volume.sites.size()) {
        throw std::invalid_argument(
            "Configuration: one value per site of the volume required");
    }
}

int Configuration::value_at(int site) const {
    int pos = volume.position(site);
    if (pos < 0) {
        throw std::invalid_argument("Configuration: site " +
                                    std::to_string(site) +
                                    " is outside the volume");
    }
    return values[pos];
}

ConfigurationSpace::ConfigurationSpace(Volume vol, int q,
                                       const PairPotentialModel* m,
                                       std::optional<Configuration> bnd)
    : volume(std::move(vol)), alphabet_size(q), model(m),
      boundary(std::move(bnd)) {
    if (q <= 0) {
        throw std::invalid_argument("ConfigurationSpace: alphabet must be positive");
    }
}

std::uint64_t ConfigurationSpace::size() const {
    std::uint64_t n = 1;
    for (int i = 0; i < volume.size(); ++i) {
        if (n > kStateCap / static_cast<std::uint64_t>(alphabet_size)) {
            std::ostringstream os;
            os << "configuration space " << alphabet_size << "^"
               << volume.size() << " exceeds the cap of " << kStateCap
               << " states";
            throw state_space_cap_error(os.str());
        }
        n *= static_cast<std::uint64_t>(alphabet_size);
    }
    if (n > kStateCap) {
        std::ostringstream os;
        os << "configuration space " << alphabet_size << "^" << volume.size()
           << " exceeds the cap of " << kStateCap << " states";
        throw state_space_cap_error(os.str());
    }
    return n;
}

std::uint64_t ConfigurationSpace::index_of(const Configuration& config) const {
    if (!(config.volume == volume)) {
        throw std::invalid_argument("index_of: configuration volume mismatch");
    }
    std::uint64_t index = 0;
    std::uint64_t radix = 1;
    for (int i = 0; i < volume.size(); ++i) {
        int v = config.values[i];
        if (v < 0 || v >= alphabet_size) {
            throw std::invalid_argument("index_of: value out of alphabet range");
        }
        index += static_cast<std::uint64_t>(v) * radix;
        radix *= static_cast<std::uint64_t>(alphabet_size);
    }
    return index;
}

void ConfigurationSpace::decode(std::uint64_t index,
                                std::vector<int>& values) const {
    values.resize(volume.sites.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = static_cast<int>(index % alphabet_size);
        index /= alphabet_size;
    }
}

Configuration ConfigurationSpace::at(std::uint64_t index) const {
    if (index >= size()) {
        throw std::invalid_argument("ConfigurationSpace::at: index out of range");
    }
    std::vector<int> values;
    decode(index, values);
    return Configuration(volume, std::move(values));
}

std::string ConfigurationSpace::label(std::uint64_t index) const {
    std::vector<int> values;
    decode(index, values);
    std::ostringstream os;
    if (alphabet_size <= 10) {
        for (int v : values) os << v;
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) os << ':';
            os << values[i];
        }
    }
    return os.str();
}

std::vector<Configuration> enumerate_volume(const PairPotentialModel& model,
                                            const Volume& lambda) {
    ConfigurationSpace space(lambda, model.alphabet_size, &model);
    const std::uint64_t n = space.size();
    std::vector<Configuration> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        out.push_back(space.at(i));
    }
    return out;
}

Configuration merge_configurations(
    const std::vector<const Configuration*>& parts) {
    std::map<int, int> assignment;
    for (const Configuration* part : parts) {
        for (int i = 0; i < part->volume.size(); ++i) {
            assignment[part->volume.sites[i]] = part->values[i];
        }
    }
    std::vector<int> sites, values;
    sites.reserve(assignment.size());
    values.reserve(assignment.size());
    for (const auto& [site, value] : assignment) {
        sites.push_back(site);
        values.push_back(value);
    }
    return Configuration(Volume(std::move(sites)), std::move(values));
}

}  // namespace gibbslab
