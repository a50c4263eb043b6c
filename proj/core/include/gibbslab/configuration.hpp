#ifndef GIBBSLAB_CONFIGURATION_HPP_
#define GIBBSLAB_CONFIGURATION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbslab/model.hpp"

namespace gibbslab {

// Enumeration refuses configuration spaces larger than this.
inline constexpr std::uint64_t kStateCap = std::uint64_t{1} << 24;

// Assignment of one spin value per site of a volume.
//
// Indexing is little-endian mixed radix over the volume's site order: the
// first site is the least significant digit, so a volume (x, y) with q = 3
// puts configuration (2, 1) at index 2 + 1*3 = 5. This rule is frozen; CSV
// exports and cross-module index arithmetic all rely on it.
struct Configuration {
    Volume volume;
    std::vector<int> values;  // aligned with volume.sites

    Configuration() = default;
    Configuration(Volume vol, std::vector<int> vals);

    // Value at a graph site; the site must belong to the volume.
    int value_at(int site) const;
    bool defines(int site) const { return volume.contains(site); }
};

// Indexed configuration space of a volume. The model pointer and boundary
// are provenance: they record where a distribution came from but do not
// participate in space compatibility (two Gibbs specifications with
// different boundaries share one indexed space).
struct ConfigurationSpace {
    Volume volume;
    int alphabet_size = 0;
    const PairPotentialModel* model = nullptr;
    std::optional<Configuration> boundary;  // fixed exterior, when known

    ConfigurationSpace() = default;
    ConfigurationSpace(Volume vol, int q,
                       const PairPotentialModel* m = nullptr,
                       std::optional<Configuration> bnd = std::nullopt);

    // q^{|volume|}; throws state_space_cap_error beyond kStateCap.
    std::uint64_t size() const;

    std::uint64_t index_of(const Configuration& config) const;
    Configuration at(std::uint64_t index) const;
    // Decode into an existing value buffer without allocating.
    void decode(std::uint64_t index, std::vector<int>& values) const;

    // Same site list and alphabet; boundary and model are ignored.
    bool compatible(const ConfigurationSpace& other) const {
        return alphabet_size == other.alphabet_size &&
               volume == other.volume;
    }

    // Per-site digits in volume order, e.g. "01"; values >= 10 are
    // colon-separated instead.
    std::string label(std::uint64_t index) const;
};

// All configurations of the volume in index order.
std::vector<Configuration> enumerate_volume(const PairPotentialModel& model,
                                            const Volume& lambda);

// Merge assignments from disjoint or agreeing configurations into one
// configuration over the union of their volumes. Later arguments win on
// overlap (callers only pass agreeing overlaps).
Configuration merge_configurations(const std::vector<const Configuration*>& parts);

}  // namespace gibbslab

#endif  // GIBBSLAB_CONFIGURATION_HPP_
