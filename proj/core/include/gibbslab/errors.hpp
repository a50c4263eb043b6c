#ifndef GIBBSLAB_ERRORS_HPP_
#define GIBBSLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace gibbslab {

// No admissible configuration: every state of the volume has infinite energy
// under the given boundary, so the normalizer vanishes.
class zero_partition_error : public std::runtime_error {
public:
    explicit zero_partition_error(const std::string& what)
        : std::runtime_error(what) {}
};

// Requested configuration space exceeds the enumeration cap.
class state_space_cap_error : public std::runtime_error {
public:
    explicit state_space_cap_error(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace gibbslab

#endif  // GIBBSLAB_ERRORS_HPP_
