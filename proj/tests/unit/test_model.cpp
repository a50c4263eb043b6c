#include <string>
#include <vector>

#include "doctest.h"
#include "gibbslab/configuration.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/model.hpp"
#include "testutil.hpp"

using namespace gibbslab;
using namespace gibbslab::test;

TEST_CASE("validate_model accepts a well-formed Ising edge") {
    CHECK(validate_model(make_ising_edge(0.5)).empty());
}

TEST_CASE("validate_model locates an edge endpoint that was never declared") {
    auto model = make_ising_edge(0.5);
    model.graph.edges.push_back({0, 7});
    model.pair_potentials.push_back(std::vector<double>(4, 0.0));
    const auto diags = validate_model(model);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("edge 1") != std::string::npos);
    CHECK(diags[0].find("not a declared site") != std::string::npos);
}

TEST_CASE("validate_model flags a pair table of the wrong shape") {
    auto model = make_ising_edge(0.5);
    model.pair_potentials[0] = std::vector<double>(9, 0.0);  // 3x3 for q=2
    const auto diags = validate_model(model);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].find("9 entries, expected 4") != std::string::npos);
}

TEST_CASE("validate_model flags self-loops, duplicates and bad energies") {
    auto model = make_ising_edge(0.5);
    model.graph.edges.push_back({1, 1});
    model.pair_potentials.push_back(std::vector<double>(4, 0.0));
    model.graph.edges.push_back({1, 0});  // duplicate of {0,1}
    model.pair_potentials.push_back(std::vector<double>(4, 0.0));
    model.self_potentials[0][1] = -kForbidden;
    const auto diags = validate_model(model);
    CHECK(diags.size() == 3);
}

TEST_CASE("volume set algebra") {
    const auto model = make_ising_path(5, 0.3);
    const Volume all = Volume::all_sites(model.graph);
    const Volume mid({1, 2, 3});
    CHECK(mid.subset_of(all));
    CHECK(mid.complement(model.graph) == Volume({0, 4}));
    CHECK(mid.minus(Volume({2})) == Volume({1, 3}));
    CHECK(mid.intersect(Volume({0, 1, 2})) == Volume({1, 2}));
    CHECK(mid.position(2) == 1);
    CHECK(mid.position(0) == -1);
}

TEST_CASE("configuration indexing is little-endian mixed radix") {
    SUBCASE("q=2 over two sites") {
        ConfigurationSpace space(Volume({0, 1}), 2);
        REQUIRE(space.size() == 4);
        CHECK(space.at(0).values == std::vector<int>{0, 0});
        CHECK(space.at(1).values == std::vector<int>{1, 0});
        CHECK(space.at(2).values == std::vector<int>{0, 1});
        CHECK(space.at(3).values == std::vector<int>{1, 1});
    }
    SUBCASE("q=3: index of (2,1) is 2 + 1*3") {
        ConfigurationSpace space(Volume({0, 1}), 3);
        REQUIRE(space.size() == 9);
        CHECK(space.index_of(Configuration(Volume({0, 1}), {2, 1})) == 5);
    }
    SUBCASE("round trip") {
        ConfigurationSpace space(Volume({0, 2, 3}), 3);
        for (std::uint64_t i = 0; i < space.size(); ++i) {
            CHECK(space.index_of(space.at(i)) == i);
        }
    }
}

TEST_CASE("enumerate_volume") {
    const auto model = make_ising_path(3, 0.5);
    SUBCASE("empty volume yields the single empty configuration") {
        const auto configs = enumerate_volume(model, Volume({}));
        REQUIRE(configs.size() == 1);
        CHECK(configs[0].values.empty());
    }
    SUBCASE("order matches the index rule") {
        const auto configs = enumerate_volume(model, Volume({0, 1}));
        REQUIRE(configs.size() == 4);
        CHECK(configs[2].values == std::vector<int>{0, 1});
    }
    SUBCASE("cap is enforced") {
        PairPotentialModel wide = make_free_model(30, 2, {});
        CHECK_THROWS_AS(enumerate_volume(wide, Volume::all_sites(wide.graph)),
                        state_space_cap_error);
    }
}

TEST_CASE("hamiltonian on reference models") {
    const Volume both({0, 1});
    SUBCASE("zero potentials give zero energy") {
        const auto model = make_free_model(2, 2, {{0, 1}});
        const Configuration sigma(both, {1, 0});
        CHECK(hamiltonian(model, both, sigma) == 0.0);
    }
    SUBCASE("one-edge Ising, aligned spins, beta 0.5") {
        const auto model = make_ising_edge(0.5);
        const Configuration aligned(both, {1, 1});
        CHECK(hamiltonian(model, both, aligned) == doctest::Approx(-0.5));
    }
    SUBCASE("hard-core edge with both endpoints occupied") {
        const auto model = make_hardcore_path(2);
        const Configuration occupied(both, {1, 1});
        CHECK(hamiltonian(model, both, occupied) == kForbidden);
    }
    SUBCASE("edges touching the volume are counted exactly once") {
        const auto model = make_ising_path(3, 1.0);
        const Configuration sigma(Volume({0, 1, 2}), {1, 1, 1});
        // Both edges touch the middle site; energy is -1 per edge.
        CHECK(hamiltonian(model, Volume({1}), sigma) == doctest::Approx(-2.0));
    }
}

TEST_CASE("boundary_hamiltonian splits the energy") {
    SUBCASE("delta = lambda leaves nothing") {
        const auto model = make_ising_path(3, 0.7);
        const Configuration sigma(Volume({0, 1, 2}), {1, 0, 1});
        const Volume lambda({0, 1});
        CHECK(boundary_hamiltonian(model, lambda, lambda, sigma) == 0.0);
    }
    SUBCASE("three-site path with delta at the middle") {
        auto model = make_ising_path(3, 0.7);
        model.self_potentials[0] = {0.25, 0.5};
        model.self_potentials[2] = {0.125, 1.0};
        const Configuration sigma(Volume({0, 1, 2}), {1, 0, 0});
        const Volume lambda({0, 1, 2});
        // Both edges touch the middle site, so only the two outer self
        // potentials survive.
        CHECK(boundary_hamiltonian(model, lambda, Volume({1}), sigma) ==
              0.5 + 0.125);
    }
    SUBCASE("delta not inside lambda is rejected") {
        const auto model = make_ising_path(3, 0.7);
        const Configuration sigma(Volume({0, 1, 2}), {0, 0, 0});
        CHECK_THROWS_AS(
            boundary_hamiltonian(model, Volume({0}), Volume({1}), sigma),
            std::invalid_argument);
    }
}

TEST_CASE("energy split is exact for dyadic potentials") {
    Rng rng(2024);
    RandomModelOptions opt;
    opt.sites = 6;
    opt.alphabet = 3;
    opt.dyadic = true;
    const Volume all({0, 1, 2, 3, 4, 5});
    for (int rep = 0; rep < 50; ++rep) {
        const auto model = random_model(rng, opt);
        const Volume lambda = random_volume(rng, 6);
        const Volume delta = random_subvolume(rng, lambda, false);
        const Configuration sigma = random_configuration(rng, all, 3);
        // Dyadic energies make every partial sum exact, so the split is an
        // identity of doubles, not an approximation.
        CHECK(hamiltonian(model, lambda, sigma) ==
              hamiltonian(model, delta, sigma) +
                  boundary_hamiltonian(model, lambda, delta, sigma));
    }
}

TEST_CASE("energy split holds within tolerance for arbitrary potentials") {
    Rng rng(2025);
    RandomModelOptions opt;
    opt.sites = 5;
    opt.alphabet = 2;
    const Volume all({0, 1, 2, 3, 4});
    for (int rep = 0; rep < 50; ++rep) {
        const auto model = random_model(rng, opt);
        const Volume lambda = random_volume(rng, 5);
        const Volume delta = random_subvolume(rng, lambda, false);
        const Configuration sigma = random_configuration(rng, all, 2);
        const double lhs = hamiltonian(model, lambda, sigma);
        const double rhs = hamiltonian(model, delta, sigma) +
                           boundary_hamiltonian(model, lambda, delta, sigma);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("pair potential symmetric query transposes") {
    auto model = make_ising_edge(0.3);
    model.pair_potentials[0] = {0.0, 1.0, 2.0, 3.0};  // asymmetric table
    CHECK(model.pair_between(0, 0, 0, 1) == 1.0);  // x=0,y=1 in declared order
    CHECK(model.pair_between(0, 1, 1, 0) == 1.0);  // same query from y's side
    CHECK(model.pair_between(0, 1, 0, 1) == 2.0);  // y=0,x=1 transposes
}
