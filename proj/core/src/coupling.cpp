#include "gibbslab/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbslab {

Coupling::Coupling(FiniteDistribution row_marginal,
                   FiniteDistribution col_marginal, std::vector<double> joint)
    : row_marginal_(std::move(row_marginal)),
      col_marginal_(std::move(col_marginal)), joint_(std::move(joint)) {
    const std::uint64_t r = rows(), c = cols();
    if (joint_.size() != r * c) {
        throw std::invalid_argument("Coupling: joint table has the wrong shape");
    }
    double total = 0.0;
    for (double m : joint_) {
        if (m < 0.0 || std::isnan(m)) {
            throw std::invalid_argument("Coupling: negative or NaN mass");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > kProbTol) {
        throw std::invalid_argument("Coupling: total mass drifted from 1");
    }
    // Row and column sums must reproduce the declared marginals.
    for (std::uint64_t i = 0; i < r; ++i) {
        double sum = 0.0;
        for (std::uint64_t j = 0; j < c; ++j) sum += joint_[i * c + j];
        if (std::abs(sum - row_marginal_[i]) > kProbTol) {
            std::ostringstream os;
            os << "Coupling: row " << i << " sums to " << sum
               << ", declared marginal is " << row_marginal_[i];
            throw std::invalid_argument(os.str());
        }
    }
    for (std::uint64_t j = 0; j < c; ++j) {
        double sum = 0.0;
        for (std::uint64_t i = 0; i < r; ++i) sum += joint_[i * c + j];
        if (std::abs(sum - col_marginal_[j]) > kProbTol) {
            std::ostringstream os;
            os << "Coupling: column " << j << " sums to " << sum
               << ", declared marginal is " << col_marginal_[j];
            throw std::invalid_argument(os.str());
        }
    }
}

Coupling independent_coupling(const FiniteDistribution& mu,
                              const FiniteDistribution& nu) {
    const std::uint64_t r = mu.size(), c = nu.size();
    std::vector<double> joint(r * c);
    for (std::uint64_t i = 0; i < r; ++i) {
        for (std::uint64_t j = 0; j < c; ++j) joint[i * c + j] = mu[i] * nu[j];
    }
    return Coupling(mu, nu, std::move(joint));
}

Coupling identity_coupling(const FiniteDistribution& mu) {
    const std::uint64_t n = mu.size();
    std::vector<double> joint(n * n, 0.0);
    for (std::uint64_t i = 0; i < n; ++i) joint[i * n + i] = mu[i];
    return Coupling(mu, mu, std::move(joint));
}

Coupling optimal_coupling(const FiniteDistribution& mu,
                          const FiniteDistribution& nu) {
    if (!mu.space().compatible(nu.space())) {
        throw std::invalid_argument(
            "optimal_coupling: distributions live on different spaces");
    }
    const std::uint64_t n = mu.size();
    std::vector<double> excess_row(n), excess_col(n);
    double total_excess = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double m = std::min(mu[i], nu[i]);
        excess_row[i] = mu[i] - m;
        excess_col[i] = nu[i] - m;
        total_excess += excess_row[i];
    }
    if (total_excess == 0.0) return identity_coupling(mu);

    std::vector<double> joint(n * n, 0.0);
    for (std::uint64_t i = 0; i < n; ++i) {
        joint[i * n + i] = std::min(mu[i], nu[i]);
        if (excess_row[i] == 0.0) continue;
        const double scale = excess_row[i] / total_excess;
        for (std::uint64_t j = 0; j < n; ++j) {
            if (excess_col[j] != 0.0) joint[i * n + j] += scale * excess_col[j];
        }
    }
    return Coupling(mu, nu, std::move(joint));
}

double mismatch(const Coupling& q) {
    if (!q.row_space().compatible(q.col_space())) {
        throw std::invalid_argument(
            "mismatch: row and column spaces must coincide");
    }
    double trace = 0.0;
    for (std::uint64_t i = 0; i < q.rows(); ++i) trace += q.mass(i, i);
    return 1.0 - trace;
}

SiteMetric SiteMetric::discrete(Volume volume, int q) {
    std::vector<std::vector<double>> tables(volume.sites.size());
    for (auto& t : tables) {
        t.assign(static_cast<std::size_t>(q) * q, 1.0);
        for (int a = 0; a < q; ++a) t[a * q + a] = 0.0;
    }
    return from_tables(std::move(volume), q, std::move(tables));
}

SiteMetric SiteMetric::from_tables(Volume volume, int q,
                                   std::vector<std::vector<double>> tables) {
    if (tables.size() != volume.sites.size()) {
        throw std::invalid_argument("SiteMetric: one table per site required");
    }
    double inf_gap = kForbidden;
    for (const auto& t : tables) {
        if (static_cast<int>(t.size()) != q * q) {
            throw std::invalid_argument("SiteMetric: table must be q x q");
        }
        for (int a = 0; a < q; ++a) {
            if (t[a * q + a] != 0.0) {
                throw std::invalid_argument("SiteMetric: rho(a,a) must be 0");
            }
            for (int b = 0; b < a; ++b) {
                const double d = t[a * q + b];
                if (d != t[b * q + a]) {
                    throw std::invalid_argument("SiteMetric: table must be symmetric");
                }
                if (!(d > 0.0)) {
                    throw std::invalid_argument(
                        "SiteMetric: rho(a,b) must be positive for a != b");
                }
                inf_gap = std::min(inf_gap, d);
            }
        }
    }
    SiteMetric rho;
    rho.volume = std::move(volume);
    rho.alphabet_size = q;
    rho.tables = std::move(tables);
    rho.inf_gap = (rho.volume.empty() || q < 2) ? 0.0 : inf_gap;
    return rho;
}

namespace {

void require_shared_volume(const Coupling& q, const SiteMetric& rho,
                           const char* who) {
    if (!q.row_space().compatible(q.col_space())) {
        throw std::invalid_argument(std::string(who) +
                                    ": row and column spaces must coincide");
    }
    if (!(rho.volume == q.row_space().volume) ||
        rho.alphabet_size != q.row_space().alphabet_size) {
        throw std::invalid_argument(std::string(who) +
                                    ": metric volume does not match the coupling");
    }
}

// Digits of every state, laid out [state][site position].
std::vector<int> digit_table(const ConfigurationSpace& space) {
    const std::uint64_t n = space.size();
    const int k = space.volume.size();
    std::vector<int> table(static_cast<std::size_t>(n) * k);
    std::vector<int> digits;
    for (std::uint64_t i = 0; i < n; ++i) {
        space.decode(i, digits);
        std::copy(digits.begin(), digits.end(), table.begin() + i * k);
    }
    return table;
}

}  // namespace

double rho_volume(const Coupling& q, const SiteMetric& rho,
                  const Volume& lambda) {
    require_shared_volume(q, rho, "rho_volume");
    if (!lambda.subset_of(rho.volume)) {
        throw std::invalid_argument("rho_volume: lambda outside the shared volume");
    }
    if (lambda.empty()) return 0.0;

    std::vector<int> positions(lambda.sites.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        positions[i] = rho.volume.position(lambda.sites[i]);
    }
    const std::vector<int> digits = digit_table(q.row_space());
    const int k = q.row_space().volume.size();
    const std::uint64_t n = q.rows();

    double acc = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const int* di = digits.data() + i * k;
        for (std::uint64_t j = 0; j < n; ++j) {
            const double mass = q.mass(i, j);
            if (mass == 0.0) continue;
            const int* dj = digits.data() + j * k;
            double dist = 0.0;
            for (int p : positions) dist += rho.tables[p][di[p] * rho.alphabet_size + dj[p]];
            acc += mass * dist;
        }
    }
    return acc;
}

double expected_metric(const Coupling& q, const SiteMetric& rho) {
    return rho_volume(q, rho, rho.volume);
}

Coupling compose_path(const PathChain& chain) {
    if (chain.links.empty()) {
        throw std::invalid_argument("compose_path: empty chain");
    }
    for (std::size_t j = 0; j + 1 < chain.links.size(); ++j) {
        if (!chain.links[j].col_space().compatible(
                chain.links[j + 1].row_space())) {
            std::ostringstream os;
            os << "compose_path: link " << j << " and link " << j + 1
               << " do not share an interface space";
            throw std::invalid_argument(os.str());
        }
    }
    // Forward accumulation: start from L_1 and fold in each later link as a
    // conditional (row-stochastic) matrix.
    std::vector<double> joint = chain.links[0].joint();
    std::uint64_t rows = chain.links[0].rows();
    std::uint64_t cols = chain.links[0].cols();

    for (std::size_t j = 1; j < chain.links.size(); ++j) {
        const Coupling& link = chain.links[j];
        const std::uint64_t mid = link.rows();
        const std::uint64_t next = link.cols();
        const auto& marginal = link.row_marginal();

        std::vector<double> folded(rows * next, 0.0);
        for (std::uint64_t x = 0; x < mid; ++x) {
            if (marginal[x] > 0.0) {
                const double inv = 1.0 / marginal[x];
                for (std::uint64_t i = 0; i < rows; ++i) {
                    const double carried = joint[i * cols + x];
                    if (carried == 0.0) continue;
                    for (std::uint64_t y = 0; y < next; ++y) {
                        folded[i * next + y] += carried * link.mass(x, y) * inv;
                    }
                }
            } else {
                // Zero-mass conditioning atom: its conditional row is the
                // point mass on the lowest-index state. Any carried mass is
                // itself zero, so the pick cannot change the result.
                for (std::uint64_t i = 0; i < rows; ++i) {
                    folded[i * next] += joint[i * cols + x];
                }
            }
        }
        joint.swap(folded);
        cols = next;
    }
    return Coupling(chain.links.front().row_marginal(),
                    chain.links.back().col_marginal(), std::move(joint));
}

TelescopeCheck telescope_bound_check(const PathChain& chain,
                                     const SiteMetric& rho,
                                     const Volume& delta) {
    TelescopeCheck check;
    check.lhs = rho_volume(compose_path(chain), rho, delta);
    check.rhs = 0.0;
    for (const Coupling& link : chain.links) {
        check.rhs += rho_volume(link, rho, delta);
    }
    check.holds = check.lhs <= check.rhs + kProbTol;
    return check;
}

MonotoneCheck monotone_correlation_check(const std::vector<double>& grid,
                                         const std::vector<double>& probs,
                                         const std::vector<double>& f,
                                         const std::vector<double>& g) {
    const std::size_t n = grid.size();
    if (n == 0 || probs.size() != n || f.size() != n || g.size() != n) {
        throw std::invalid_argument(
            "monotone_correlation_check: grid, probs, f, g must share a length");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw std::invalid_argument(
                "monotone_correlation_check: grid must be strictly increasing");
        }
        if (f[i] < f[i - 1]) {
            throw std::invalid_argument(
                "monotone_correlation_check: f is not nondecreasing");
        }
        if (g[i] < g[i - 1]) {
            throw std::invalid_argument(
                "monotone_correlation_check: g is not nondecreasing");
        }
    }
    double psum = 0.0;
    for (double p : probs) {
        if (p < 0.0) {
            throw std::invalid_argument(
                "monotone_correlation_check: negative probability");
        }
        psum += p;
    }
    if (std::abs(psum - 1.0) > kProbTol) {
        throw std::invalid_argument(
            "monotone_correlation_check: probabilities must sum to 1");
    }
    double ef = 0.0, eg = 0.0, efg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ef += probs[i] * f[i];
        eg += probs[i] * g[i];
        efg += probs[i] * f[i] * g[i];
    }
    MonotoneCheck check;
    check.lhs = ef * eg;
    check.rhs = efg;
    check.holds = check.lhs <= check.rhs + kProbTol;
    return check;
}

}  // namespace gibbslab
