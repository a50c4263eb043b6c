#include "gibbslab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gibbslab {

std::string format_real(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";
    char buf[64];
    const double ax = std::abs(x);
    if (ax < 1e-4 || ax >= 1e6) {
        std::snprintf(buf, sizeof(buf), "%.16e", x);
    } else {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
    }
    return buf;
}

void write_distribution_csv(std::ostream& out, const FiniteDistribution& mu) {
    out << "index,configuration,probability\n";
    for (std::uint64_t i = 0; i < mu.size(); ++i) {
        out << i << ',' << mu.space().label(i) << ',' << format_real(mu[i])
            << '\n';
    }
}

void write_coupling_csv(std::ostream& out, const Coupling& q) {
    out << "row_index,col_index,mass\n";
    for (std::uint64_t i = 0; i < q.rows(); ++i) {
        for (std::uint64_t j = 0; j < q.cols(); ++j) {
            const double mass = q.mass(i, j);
            if (mass != 0.0) {
                out << i << ',' << j << ',' << format_real(mass) << '\n';
            }
        }
    }
}

void write_kernel_csv(std::ostream& out, const BlockKernel& kernel) {
    out << "source,target,mass\n";
    const std::uint64_t n = kernel.space().size();
    for (std::uint64_t src = 0; src < n; ++src) {
        for (const auto& [target, mass] : kernel.row(src)) {
            if (mass != 0.0) {
                out << src << ',' << target << ',' << format_real(mass) << '\n';
            }
        }
    }
}

void write_curve_csv(std::ostream& out, const InfluenceCurve& curve) {
    out << "m,sup_tv,log_slope\n";
    for (std::size_t i = 0; i < curve.sup_tv.size(); ++i) {
        out << curve.labels[i] << ',' << format_real(curve.sup_tv[i]) << ','
            << format_real(curve.log_slopes[i]) << '\n';
    }
}

void write_contraction_csv(std::ostream& out, const ContractionReport& report,
                           const PairPotentialModel& model) {
    (void)model;
    out << "site,value_a,value_b,ratio\n";
    for (std::size_t i = 0; i < report.per_site_max.size(); ++i) {
        out << i << ',' << report.per_site_value_a[i] << ','
            << report.per_site_value_b[i] << ','
            << format_real(report.per_site_max[i]) << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

CsvDistribution read_distribution_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "index,configuration,probability") {
        throw std::runtime_error(
            "distribution csv: missing or unexpected header");
    }
    CsvDistribution dist;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw std::runtime_error("distribution csv: line " +
                                     std::to_string(line_no) +
                                     ": expected 3 fields");
        }
        try {
            dist.indices.push_back(std::stoull(fields[0]));
            dist.labels.push_back(fields[1]);
            dist.probabilities.push_back(std::stod(fields[2]));
        } catch (const std::exception&) {
            throw std::runtime_error("distribution csv: line " +
                                     std::to_string(line_no) +
                                     ": malformed number");
        }
    }
    double sum = 0.0;
    for (double p : dist.probabilities) {
        if (p < 0.0 || std::isnan(p)) {
            throw std::runtime_error("distribution csv: negative probability");
        }
        sum += p;
    }
    if (dist.probabilities.empty() || std::abs(sum - 1.0) > kProbTol) {
        throw std::runtime_error(
            "distribution csv: probabilities do not sum to 1");
    }
    return dist;
}

double csv_tv_distance(const CsvDistribution& a, const CsvDistribution& b,
                       TvMethod method) {
    if (a.indices.size() != b.indices.size()) {
        throw std::runtime_error("tv: distributions have different sizes");
    }
    for (std::size_t i = 0; i < a.indices.size(); ++i) {
        if (a.indices[i] != b.indices[i] || a.labels[i] != b.labels[i]) {
            throw std::runtime_error(
                "tv: distributions are indexed over different spaces (row " +
                std::to_string(i) + ")");
        }
    }
    const auto& p = a.probabilities;
    const auto& r = b.probabilities;
    double acc = 0.0;
    switch (method) {
        case TvMethod::half_sum:
            for (std::size_t i = 0; i < p.size(); ++i) {
                acc += std::abs(p[i] - r[i]);
            }
            return 0.5 * acc;
        case TvMethod::best_event:
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p[i] >= r[i]) acc += p[i] - r[i];
            }
            return acc;
        case TvMethod::one_minus_min:
            for (std::size_t i = 0; i < p.size(); ++i) {
                acc += std::min(p[i], r[i]);
            }
            return 1.0 - acc;
    }
    throw std::runtime_error("tv: unknown method");
}

}  // namespace gibbslab
