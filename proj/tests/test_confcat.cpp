#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confstrata/confcat.hpp"
#include "confstrata/errors.hpp"

using namespace confstrata;
using namespace confstrata::confcat;
using forests::Forest;
using setcat::FiniteSet;

TEST_CASE("codimension counts non-singleton blocks") {
    for (int n = 0; n <= 5; ++n) {
        for (const auto& f : forests::enumerate_forests(n)) CHECK(stratum_codim(f) == f.non_singleton_count());
    }
}

TEST_CASE("intersections are forest unions") {
    for (int n = 0; n <= 4; ++n) {
        const auto all = forests::enumerate_forests(n);
        for (const auto& a : all) {
            CHECK(stratum_intersect(a, a) == make_stratum(a));
            for (const auto& b : all) {
                const auto ab = stratum_intersect(a, b);
                const auto u = forests::union_if_forest(a, b);
                REQUIRE(ab.has_value() == u.has_value());
                CHECK(stratum_intersect(b, a) == ab);
                if (ab) {
                    CHECK(ab->forest == *u);
                    CHECK(ab->codim >= std::max(stratum_codim(a), stratum_codim(b)));
                    CHECK(a.is_subfamily_of(ab->forest));
                }
            }
        }
    }
    CHECK_THROWS_AS(stratum_intersect(Forest::minimal(FiniteSet::range(2)), Forest::minimal(FiniteSet::range(3))),
                    InputError);
}

TEST_CASE("stratum poset") {
    const auto p = strata_poset(3);
    CHECK(p.strata.size() == 8);
    CHECK(p.strata.front().codim == 0);
    for (auto [a, b] : p.covers) {
        CHECK(p.strata[a].forest.is_subfamily_of(p.strata[b].forest));
        CHECK(p.strata[b].codim == p.strata[a].codim + 1);
    }
    // Each of the three pairs plus the full set covers the interior.
    std::size_t from_interior = 0;
    for (auto [a, b] : p.covers) from_interior += a == 0 ? 1 : 0;
    CHECK(from_interior == 4);
    CHECK_THROWS_AS(strata_poset(6), CapExceeded);
    CHECK(strata_dot(p).find("digraph") != std::string::npos);
}

TEST_CASE("inclusion, forgetful and composite stratum maps") {
    const auto t = FiniteSet::range(3);
    const auto phi = Forest::from_labels(t, {{1}, {2}, {3}, {1, 2}});
    const auto psi = Forest::from_labels(t, {{1}, {2}, {3}, {1, 2}, {1, 2, 3}});
    const auto inc = inclusion_map(psi, phi);
    CHECK(inc.kind == MapKind::inclusion);
    CHECK_FALSE(stratum_map_violation(inc));
    CHECK_THROWS_AS(inclusion_map(phi, psi), InputError);

    const auto s = FiniteSet::range(2);
    const auto fg = forgetful_map(psi, s, {0, 2});
    CHECK(fg.kind == MapKind::forgetful);
    CHECK(fg.target.forest == Forest::from_labels(s, {{1}, {2}, {1, 2}}));
    CHECK_FALSE(stratum_map_violation(fg));

    const auto m = forests::ForMorphism::from_injection(Forest::minimal(s), psi, {0, 2});
    const auto sm = stratum_map(m);
    CHECK(sm.kind == MapKind::composite);
    CHECK(sm.components.size() == 2);
    CHECK_FALSE(stratum_map_violation(sm));
    const auto id = stratum_map(forests::ForMorphism::identity(psi));
    CHECK(id.kind == MapKind::identity);
    CHECK(same_stratum_map(compose(inc, id), inc));
}

TEST_CASE("level functor and con are functorial up to equal pullbacks") {
    const auto f = check_level_functor(3, 2, true);
    CHECK(f.ok());
    CHECK(f.identity_failures == 0);
    // As maps of block posets the composites can differ.
    CHECK(f.poset_failures > 0);
    const auto c = check_con_functor(2, 2);
    CHECK(c.ok());
    CHECK(c.pairs > 0);
}

TEST_CASE("con on objects") {
    const auto chain = setcat::FinChain::from_maps(
        {setcat::SetMap(FiniteSet::range(2), FiniteSet::range(1), std::vector<std::uint32_t>{0, 0})});
    const auto s = con_object(chain);
    CHECK(s.codim == 1);
    CHECK(s.forest.ground().size() == 2);
    const auto m = con_morphism(setcat::face_map(chain, 1));
    CHECK_FALSE(stratum_map_violation(m));
}
