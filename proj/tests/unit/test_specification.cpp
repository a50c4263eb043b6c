#include <cmath>
#include <vector>

#include "doctest.h"
#include "gibbslab/errors.hpp"
#include "gibbslab/specification.hpp"
#include "testutil.hpp"

using namespace gibbslab;
using namespace gibbslab::test;

namespace {

Configuration empty_boundary() { return Configuration(Volume({}), {}); }

}  // namespace

TEST_CASE("zero potentials give the uniform specification") {
    const auto model = make_free_model(2, 2, {{0, 1}});
    const auto gamma = specification(model, Volume({0, 1}), empty_boundary());
    REQUIRE(gamma.size() == 4);
    for (std::uint64_t i = 0; i < 4; ++i) CHECK(gamma[i] == 0.25);
}

TEST_CASE("one-edge Ising at beta 0.5 with free boundary") {
    const auto model = make_ising_edge(0.5);
    const auto gamma = specification(model, Volume({0, 1}), empty_boundary());
    // P(++) = e^{1/2} / (2 e^{1/2} + 2 e^{-1/2})
    const double expected =
        std::exp(0.5) / (2.0 * std::exp(0.5) + 2.0 * std::exp(-0.5));
    CHECK(gamma[3] == doctest::Approx(expected).epsilon(1e-14));
    CHECK(gamma[0] == doctest::Approx(expected).epsilon(1e-14));  // --
    CHECK(gamma[1] == doctest::Approx(0.5 - expected).epsilon(1e-14));
    double sum = 0.0;
    for (std::uint64_t i = 0; i < 4; ++i) sum += gamma[i];
    CHECK(std::abs(sum - 1.0) <= kProbTol);
}

TEST_CASE("hard-core site surrounded by occupied neighbors is pinned empty") {
    const auto model = make_hardcore_path(3);
    const Volume lambda({1});
    const Configuration boundary(Volume({0, 2}), {1, 1});
    const auto gamma = specification(model, lambda, boundary);
    CHECK(gamma[0] == 1.0);
    CHECK(gamma[1] == 0.0);
}

TEST_CASE("fully forbidden volume raises a located zero-partition error") {
    auto model = make_hardcore_path(2);
    model.self_potentials[0] = {kForbidden, kForbidden};
    const Volume lambda({0});
    const Configuration boundary(Volume({1}), {0});
    CHECK_THROWS_WITH_AS(specification(model, lambda, boundary),
                         doctest::Contains("h1"), zero_partition_error);
}

TEST_CASE("large couplings survive the log-shift") {
    // exp(200) would overflow a raw Boltzmann weight.
    const auto model = make_ising_edge(200.0);
    const auto gamma = specification(model, Volume({0, 1}), empty_boundary());
    CHECK(gamma[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gamma[3] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gamma[1] <= 1e-12);
}

TEST_CASE("specification ignores boundary values at non-adjacent sites") {
    const auto model = make_ising_path(4, 0.8);
    const Volume lambda({0, 1});
    // Sites 2 is adjacent to lambda, site 3 is not.
    const Configuration near_and_far(Volume({2, 3}), {1, 0});
    const Configuration far_flipped(Volume({2, 3}), {1, 1});
    const auto a = specification(model, lambda, near_and_far);
    const auto b = specification(model, lambda, far_flipped);
    for (std::uint64_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);  // bit-identical
    }
}

TEST_CASE("specification matches the unshifted defining formula") {
    Rng rng(77);
    RandomModelOptions opt;
    opt.sites = 5;
    opt.alphabet = 3;
    for (int rep = 0; rep < 20; ++rep) {
        const auto model = random_model(rng, opt);
        const Volume lambda = random_volume(rng, opt.sites);
        const Configuration sigma = random_boundary(rng, model, lambda);
        const auto gamma = specification(model, lambda, sigma);
        const auto oracle = oracle_specification(model, lambda, sigma);
        CHECK(sup_norm_diff(gamma.probabilities(), oracle) <= kProbTol);
    }
}

TEST_CASE("conditioning on nothing returns the specification unchanged") {
    const auto model = make_ising_edge(0.5);
    const Volume lambda({0, 1});
    const auto gamma = specification(model, lambda, empty_boundary());
    const auto conditioned = condition_specification(
        model, lambda, empty_boundary(), lambda, Configuration(lambda, {0, 0}));
    for (std::uint64_t i = 0; i < gamma.size(); ++i) {
        CHECK(conditioned[i] == gamma[i]);
    }
}

TEST_CASE("conditioning a free model stays uniform") {
    const auto model = make_free_model(3, 2, {{0, 1}, {1, 2}});
    const Volume lambda({0, 1, 2});
    const Volume delta({0, 2});
    const auto conditioned =
        condition_specification(model, lambda, empty_boundary(), delta,
                                Configuration(lambda, {0, 1, 0}));
    REQUIRE(conditioned.size() == 4);
    for (std::uint64_t i = 0; i < 4; ++i) {
        CHECK(conditioned[i] == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("conditioning event of probability zero is rejected") {
    auto model = make_hardcore_path(2);
    model.self_potentials[1] = {0.0, kForbidden};  // site h2 cannot be occupied
    const Volume lambda({0, 1});
    const Volume delta({0});
    CHECK_THROWS_AS(
        condition_specification(model, lambda, empty_boundary(), delta,
                                Configuration(lambda, {0, 1})),
        zero_partition_error);
}

TEST_CASE("consistency: conditioning equals the sub-volume specification") {
    Rng rng(91);
    for (int rep = 0; rep < 40; ++rep) {
        RandomModelOptions opt;
        opt.sites = 3 + static_cast<int>(rng.below(4));  // up to 6
        opt.alphabet = 2 + static_cast<int>(rng.below(2));
        const auto model = random_model(rng, opt);
        const Volume lambda = random_volume(rng, opt.sites);
        const Volume delta = random_subvolume(rng, lambda);
        const Configuration sigma = random_boundary(rng, model, lambda);
        const Configuration tau =
            random_configuration(rng, lambda, opt.alphabet);

        const auto conditioned =
            condition_specification(model, lambda, sigma, delta, tau);
        // The provenance boundary of the result is exactly the combined
        // boundary of the consistency identity.
        const auto direct =
            specification(model, delta, conditioned.space().boundary.value());
        CHECK(sup_norm_diff(conditioned.probabilities(),
                            direct.probabilities()) <= kProbTol);
    }
}

TEST_CASE("conditional agrees with brute-force Bayes on the oracle table") {
    Rng rng(92);
    RandomModelOptions opt;
    opt.sites = 4;
    opt.alphabet = 2;
    for (int rep = 0; rep < 20; ++rep) {
        const auto model = random_model(rng, opt);
        const Volume lambda({0, 1, 2, 3});
        const Volume delta = random_subvolume(rng, lambda);
        const Configuration sigma = random_boundary(rng, model, lambda);
        const Configuration tau = random_configuration(rng, lambda, 2);

        // Restrict the independently computed joint table by hand.
        const auto joint = oracle_specification(model, lambda, sigma);
        ConfigurationSpace lambda_space(lambda, 2);
        ConfigurationSpace delta_space(delta, 2);
        std::vector<double> expected(delta_space.size(), 0.0);
        double event = 0.0;
        for (std::uint64_t idx = 0; idx < lambda_space.size(); ++idx) {
            const Configuration config = lambda_space.at(idx);
            bool agrees = true;
            for (int site : lambda.minus(delta).sites) {
                if (config.value_at(site) != tau.value_at(site)) agrees = false;
            }
            if (!agrees) continue;
            std::vector<int> key;
            for (int site : delta.sites) key.push_back(config.value_at(site));
            expected[delta_space.index_of(Configuration(delta, key))] +=
                joint[idx];
            event += joint[idx];
        }
        for (auto& p : expected) p /= event;

        const auto conditioned =
            condition_specification(model, lambda, sigma, delta, tau);
        CHECK(sup_norm_diff(conditioned.probabilities(), expected) <= kProbTol);
    }
}
