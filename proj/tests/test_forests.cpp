#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "confstrata/errors.hpp"
#include "confstrata/forests.hpp"

using namespace confstrata;
using namespace confstrata::forests;
using setcat::FiniteSet;
using setcat::SetMap;

namespace {

// Laminar families of {0..n-1} containing every singleton, by exhaustive
// search over families of non-singleton subsets.
std::set<std::vector<Block>> brute_force_forests(int n) {
    std::vector<Block> candidates;
    for (Block u = 1; u < (Block{1} << n); ++u) {
        if (std::popcount(u) >= 2) candidates.push_back(u);
    }
    std::set<std::vector<Block>> out;
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << candidates.size()); ++pick) {
        std::vector<Block> fam;
        for (int i = 0; i < n; ++i) fam.push_back(Block{1} << i);
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if ((pick >> c) & 1U) fam.push_back(candidates[c]);
        }
        bool laminar = true;
        for (std::size_t a = 0; a < fam.size() && laminar; ++a) {
            for (std::size_t b = a + 1; b < fam.size(); ++b) {
                const Block x = fam[a] & fam[b];
                if (x != 0 && x != fam[a] && x != fam[b]) {
                    laminar = false;
                    break;
                }
            }
        }
        if (!laminar) continue;
        std::sort(fam.begin(), fam.end());
        out.insert(fam);
    }
    return out;
}

std::vector<Block> sorted_blocks(const Forest& f) {
    std::vector<Block> b(f.blocks().begin(), f.blocks().end());
    std::sort(b.begin(), b.end());
    return b;
}

Forest random_forest(int n, std::mt19937& rng) {
    const auto all = enumerate_forests(n);
    return all[rng() % all.size()];
}

SetMap random_injection(int s, int t, std::mt19937& rng) {
    std::vector<std::uint32_t> pool(t);
    for (int i = 0; i < t; ++i) pool[i] = static_cast<std::uint32_t>(i);
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(s);
    return SetMap(FiniteSet::range(s), FiniteSet::range(t), pool);
}

}  // namespace

TEST_CASE("enumeration agrees with an exhaustive laminar-family oracle for n <= 4") {
    for (int n = 0; n <= 4; ++n) {
        const auto oracle = brute_force_forests(n);
        std::set<std::vector<Block>> got;
        for (const auto& f : enumerate_forests(n)) got.insert(sorted_blocks(f));
        CHECK(got == oracle);
        CHECK(enumerate_forests(n).size() == oracle.size());
    }
}

TEST_CASE("forest counts are twice the Schröder fourth-problem numbers") {
    // Total phylogenetic trees on n leaves: 1, 1, 4, 26, 236, 2752, 39208 for n = 1..7.
    const std::vector<std::size_t> schroeder = {0, 1, 1, 4, 26, 236, 2752, 39208};
    CHECK(enumerate_forests(0).size() == 1);
    CHECK(enumerate_forests(1).size() == 1);
    for (int n = 2; n <= 6; ++n) CHECK(enumerate_forests(n).size() == 2 * schroeder[n]);
    CHECK(enumerate_forests_recursive(7, true).size() == 2 * 39208);
    CHECK_THROWS_AS(enumerate_forests(7), CapExceeded);
}

TEST_CASE("the two enumeration strategies agree") {
    for (int n = 0; n <= 4; ++n) CHECK(enumerate_forests_by_filtering(n) == enumerate_forests_recursive(n));
}

TEST_CASE("forest validation") {
    const auto s = FiniteSet::range(3);
    CHECK(is_forest(s, {{1}, {2}, {3}, {1, 2}}));
    CHECK_FALSE(is_forest(s, {{1}, {2}, {3}, {1, 2}, {2, 3}}));
    CHECK_THROWS_AS(Forest::from_labels(s, {{1}, {2}, {3}, {1, 2}, {2, 3}}), InputError);
    CHECK_THROWS_AS(is_forest(s, {{1, 4}}), InputError);
    const auto phi = Forest::from_labels(s, {{1}, {2}, {3}, {1, 2}});
    CHECK(phi.non_singleton_count() == 1);
    CHECK(phi == Forest::from_labels(s, {{1, 2}, {3}, {2}, {1}}));
}

TEST_CASE("union_if_forest") {
    const auto s = FiniteSet::range(3);
    const auto a = Forest::from_labels(s, {{1}, {2}, {3}, {1, 2}});
    const auto b = Forest::from_labels(s, {{1}, {2}, {3}, {1, 2, 3}});
    const auto c = Forest::from_labels(s, {{1}, {2}, {3}, {2, 3}});
    const auto u = union_if_forest(a, b);
    REQUIRE(u);
    CHECK(u->size() == 5);
    CHECK_FALSE(union_if_forest(a, c));
}

TEST_CASE("pullback is functorial along injections") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 400; ++trial) {
        const int t = 2 + static_cast<int>(rng() % 4);
        const int s = 1 + static_cast<int>(rng() % t);
        const int r = 1 + static_cast<int>(rng() % s);
        const auto psi = random_forest(t, rng);
        const auto j = random_injection(s, t, rng);
        const auto i = random_injection(r, s, rng);
        CHECK(pullback(setcat::compose(j, i), psi) == pullback(i, pullback(j, psi)));
        CHECK(pullback(SetMap::identity(psi.ground()), psi) == psi);
    }
}

TEST_CASE("pullback example") {
    const auto t = FiniteSet::range(3);
    const auto psi = Forest::from_labels(t, {{1}, {2}, {3}, {2, 3}, {1, 2, 3}});
    const SetMap j(FiniteSet::range(2), t, std::vector<std::uint32_t>{0, 2});
    CHECK(pullback(j, psi) == Forest::from_labels(FiniteSet::range(2), {{1}, {2}, {1, 2}}));
}

TEST_CASE("trees of a forest") {
    const auto phi = Forest::from_labels(FiniteSet::range(4), {{1}, {2}, {3}, {4}, {1, 2}});
    const auto trees = trees_of(phi);
    CHECK(trees.size() == 3);
}

TEST_CASE("poset round trip and forest conditions for n <= 4") {
    for (int n = 0; n <= 4; ++n) {
        for (const auto& f : enumerate_forests(n)) {
            const auto p = to_poset(f);
            CHECK(p.forest_violations().empty());
            CHECK(from_poset(p) == f);
        }
    }
}

TEST_CASE("posets violating the forest conditions are rejected") {
    // a, b below c with a, b incomparable: the down-set of c is not a chain.
    const ForestPoset v({Label{std::string("a")}, Label{std::string("b")}, Label{std::string("c")}}, {{0, 2}, {1, 2}});
    CHECK_FALSE(v.forest_violations().empty());
    CHECK_THROWS_AS(from_poset(v), InputError);
    CHECK_THROWS_AS(ForestPoset({Label{std::int64_t{1}}, Label{std::int64_t{2}}}, {{0, 1}, {1, 0}}), InputError);
}

TEST_CASE("hom counts on small forests") {
    const auto pt = Forest::minimal(FiniteSet::range(1));
    const auto m2 = Forest::minimal(FiniteSet::range(2));
    const auto f2 = Forest::from_labels(FiniteSet::range(2), {{1}, {2}, {1, 2}});
    // A point maps to either leaf of {1},{2}; the two injections pull back alike.
    auto h = hom_count(pt, m2);
    CHECK(h.poset_maps == 2);
    CHECK(h.injections == 2);
    CHECK(h.quotient_classes == 1);
    // Poset maps from a point can also hit the root {1,2}.
    h = hom_count(pt, f2);
    CHECK(h.poset_maps == 3);
    CHECK(h.injections == 2);
    CHECK(hom_count(f2, m2).injections == 0);
    CHECK(hom_count(f2, f2).quotient_classes == 1);
}

TEST_CASE("morphisms from injections and poset maps") {
    const auto phi = Forest::minimal(FiniteSet::range(2));
    const auto psi = Forest::from_labels(FiniteSet::range(3), {{1}, {2}, {3}, {1, 2}});
    const auto m = ForMorphism::from_injection(phi, psi, {0, 1});
    CHECK_FALSE(poset_map_violation(phi, psi, m.block_map()));
    CHECK(m.pulled_back() == Forest::from_labels(FiniteSet::range(2), {{1}, {2}, {1, 2}}));
    const auto same = ForMorphism::from_block_map(phi, psi, {m.block_map().begin(), m.block_map().end()});
    CHECK(same_poset_map(m, same));
    CHECK(ForMorphism::identity(psi).is_identity());
    const auto bad = Forest::from_labels(FiniteSet::range(2), {{1}, {2}, {1, 2}});
    CHECK_THROWS_AS(ForMorphism::from_injection(bad, psi, {0, 2}), InputError);
}

TEST_CASE("level functor on chains") {
    // {x} -> {u, z} -> {y}
    const FiniteSet s0({Label{std::string("x")}});
    const FiniteSet s1({Label{std::string("u")}, Label{std::string("z")}});
    const FiniteSet s2({Label{std::string("y")}});
    const auto chain = setcat::FinChain::from_maps({SetMap(s0, s1, std::vector<std::uint32_t>{0}),
                                                    SetMap(s1, s2, std::vector<std::uint32_t>{0, 0})});
    const auto f = level_functor_object(chain);
    CHECK(f.ground().size() == 2);
    CHECK(f.non_singleton_count() == 1);
    // Degeneracies insert identities and leave F unchanged.
    CHECK(level_functor_object(setcat::degeneracy(chain, 1)) == f);
    CHECK(level_functor_morphism(setcat::identity_map(chain)).is_identity());
    const auto d = level_functor_morphism(setcat::degeneracy_map(chain, 0));
    CHECK(d.is_identity());
}

TEST_CASE("DOT rendering") {
    const auto phi = Forest::from_labels(FiniteSet::range(3), {{1}, {2}, {3}, {1, 2}});
    const auto dot = to_dot(phi);
    CHECK(dot.rfind("graph", 0) == 0);
    CHECK(dot.find("tooltip=\"{1,2}\"") != std::string::npos);
    CHECK(dot.find("--") != std::string::npos);
}
