#ifndef GIBBSLAB_MODEL_IO_HPP_
#define GIBBSLAB_MODEL_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbslab/model.hpp"

namespace gibbslab {

// Named block declarations as they appear in a model file; resolved into a
// BlockSystem once a volume is chosen.
struct BlockDeclaration {
    std::string name;
    double weight = 1.0;
    std::vector<std::string> sites;
};

struct ModelFile {
    PairPotentialModel model;
    std::vector<BlockDeclaration> blocks;
};

// Parses the sectioned key-value model format:
//
//   [alphabet]
//   q = 2
//
//   [graph]
//   sites = x y
//   edges = x-y
//
//   [potentials.self]
//   x = 0.0 0.0            # q energies, value order 0..q-1
//
//   [potentials.pair]
//   x-y = 0.5 -0.5 -0.5 0.5  # q*q energies, row-major, rows = first endpoint
//
//   [blocks]
//   b0 = 1.0 x             # weight, then sites
//
// Energies are finite decimals or the literal "inf". Unlisted self tables
// default to all-zero; every declared edge must have a pair table. '#'
// starts a comment. Throws std::runtime_error with a line-located message
// on malformed input; the parsed model is additionally validated.
ModelFile parse_model_file(std::istream& in);
ModelFile load_model_file(const std::string& path);

// Writes a file that re-parses to an identical model (energies via
// format_real, so the round trip is bit-exact).
void write_model_file(std::ostream& out, const ModelFile& file);

}  // namespace gibbslab

#endif  // GIBBSLAB_MODEL_IO_HPP_
