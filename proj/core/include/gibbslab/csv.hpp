#ifndef GIBBSLAB_CSV_HPP_
#define GIBBSLAB_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "gibbslab/coupling.hpp"
#include "gibbslab/diagnostics.hpp"
#include "gibbslab/distribution.hpp"
#include "gibbslab/dynamics.hpp"

namespace gibbslab {

// 17 significant digits; lowercase scientific when |x| < 1e-4 or >= 1e6.
// Round-trips every finite double exactly. Infinity prints as "inf".
std::string format_real(double x);

// Header: index,configuration,probability
void write_distribution_csv(std::ostream& out, const FiniteDistribution& mu);

// Header: row_index,col_index,mass — nonzero entries only.
void write_coupling_csv(std::ostream& out, const Coupling& q);

// Header: source,target,mass — nonzero entries only, row by row.
void write_kernel_csv(std::ostream& out, const BlockKernel& kernel);

// Header: m,sup_tv,log_slope
void write_curve_csv(std::ostream& out, const InfluenceCurve& curve);

// Header: site,value_a,value_b,ratio — per-site worst contraction ratios.
void write_contraction_csv(std::ostream& out, const ContractionReport& report,
                           const PairPotentialModel& model);

// Distribution CSV as written by write_distribution_csv, without model
// context: indices, configuration labels and probabilities.
struct CsvDistribution {
    std::vector<std::uint64_t> indices;
    std::vector<std::string> labels;
    std::vector<double> probabilities;
};

CsvDistribution read_distribution_csv(std::istream& in);

// Half-sum / best-event / one-minus-min on two aligned CSV distributions;
// validates that the index and label columns agree row by row.
double csv_tv_distance(const CsvDistribution& a, const CsvDistribution& b,
                       TvMethod method);

}  // namespace gibbslab

#endif  // GIBBSLAB_CSV_HPP_
