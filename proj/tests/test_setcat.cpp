#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "confstrata/errors.hpp"
#include "confstrata/setcat.hpp"

using namespace confstrata;
using namespace confstrata::setcat;

namespace {

FinChain chain_of(const std::vector<std::vector<std::uint32_t>>& images, const std::vector<int>& sizes) {
    std::vector<SetMap> maps;
    for (std::size_t i = 0; i < images.size(); ++i) {
        maps.emplace_back(FiniteSet::range(sizes[i]), FiniteSet::range(sizes[i + 1]), images[i]);
    }
    if (maps.empty()) return FinChain::single(FiniteSet::range(sizes[0]));
    return FinChain::from_maps(std::move(maps));
}

std::int64_t binomial(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

TEST_CASE("finite sets are sorted and reject duplicates") {
    FiniteSet s({Label{std::int64_t{3}}, Label{std::int64_t{1}}, Label{std::string("a")}});
    CHECK(s.size() == 3);
    CHECK(s.index_of(Label{std::int64_t{1}}) == 0);
    CHECK_THROWS_AS(FiniteSet({Label{std::int64_t{1}}, Label{std::int64_t{1}}}), InputError);
    CHECK(FiniteSet::range(0).empty());
}

TEST_CASE("maps compose and classify") {
    const SetMap f(FiniteSet::range(2), FiniteSet::range(3), std::vector<std::uint32_t>{2, 0});
    const SetMap g(FiniteSet::range(3), FiniteSet::range(1), std::vector<std::uint32_t>{0, 0, 0});
    CHECK(f.is_injective());
    CHECK_FALSE(f.is_surjective());
    CHECK(g.is_surjective());
    const auto gf = compose(g, f);
    CHECK(gf.source() == FiniteSet::range(2));
    CHECK(gf(0) == 0);
    CHECK(gf(1) == 0);
    CHECK_THROWS_AS(compose(f, f), InputError);
    CHECK_THROWS_AS(SetMap(FiniteSet::range(2), FiniteSet::range(1), std::vector<std::uint32_t>{0, 1}), InputError);
}

TEST_CASE("chain validation reports mismatched maps") {
    FinChain c;
    c.sets = {FiniteSet::range(1), FiniteSet::range(2)};
    c.maps = {SetMap::identity(FiniteSet::range(1))};
    const auto v = validate_chain(c);
    CHECK_FALSE(v.ok);
    CHECK_FALSE(v.violations.empty());
    CHECK_THROWS_AS(face(c, 0), InputError);
}

TEST_CASE("faces and degeneracies of a small chain") {
    // {1} -> {1,2} -> {1}
    const auto c = chain_of({{1}, {0, 0}}, {1, 2, 1});
    const auto d0 = face(c, 0);
    CHECK(d0.level_count() == 1);
    CHECK(d0.sets[0] == FiniteSet::range(2));
    const auto d1 = face(c, 1);
    CHECK(d1.level_count() == 1);
    CHECK(d1.maps[0](0) == 0);
    const auto d2 = face(c, 2);
    CHECK(d2.sets.back() == FiniteSet::range(2));
    const auto s1 = degeneracy(c, 1);
    CHECK(s1.level_count() == 3);
    CHECK(s1.maps[1].is_identity());
    CHECK(face(s1, 1) == c);
    CHECK(face(s1, 2) == c);
}

TEST_CASE("monotone map counts match the binomial formula") {
    for (int k = 0; k <= 4; ++k) {
        for (int l = 0; l <= 4; ++l) {
            CHECK(static_cast<std::int64_t>(monotone_maps(k, l).size()) == binomial(k + l + 1, k + 1));
        }
    }
}

TEST_CASE("cosimplicial identities on monotone maps") {
    for (int k = 0; k <= 3; ++k) {
        for (int j = 0; j <= k + 2; ++j) {
            for (int i = 0; i < j; ++i) {
                CHECK(compose(coface(k + 1, j), coface(k, i)) == compose(coface(k + 1, i), coface(k, j - 1)));
            }
        }
    }
    for (int k = 1; k <= 3; ++k) {
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i <= j; ++i) {
                CHECK(compose(codegeneracy(k, i), codegeneracy(k + 1, j + 1)) ==
                      compose(codegeneracy(k, j), codegeneracy(k + 1, i)));
            }
        }
    }
}

TEST_CASE("simplicial identities, exhaustive small ranges") {
    const auto a = check_simplicial_identities(3, 3);
    CHECK(a.ok());
    CHECK(a.chains == 51760);
    const auto b = check_simplicial_identities(2, 4);
    CHECK(b.ok());
    CHECK(b.chains > 0);
}

TEST_CASE("simplicial identities on random chains of level 4") {
    std::mt19937 rng(20261014);
    SimplicialReport report;
    for (int trial = 0; trial < 300; ++trial) {
        const int k = 4;
        std::vector<int> sizes(k + 1);
        for (auto& s : sizes) s = 1 + static_cast<int>(rng() % 4);
        std::vector<std::vector<std::uint32_t>> images(k);
        for (int i = 0; i < k; ++i) {
            for (int x = 0; x < sizes[i]; ++x) images[i].push_back(static_cast<std::uint32_t>(rng() % sizes[i + 1]));
        }
        check_simplicial_identities(chain_of(images, sizes), report);
    }
    CHECK(report.ok());
    CHECK(report.chains == 300);
}

TEST_CASE("simplex maps compose like monotone maps") {
    const auto c = chain_of({{0, 1}, {0, 0}}, {2, 2, 1});
    const auto id = identity_map(c);
    const auto f = face_map(c, 1);
    CHECK(validate_simplex_map(f));
    const auto ff = compose(id, f);
    CHECK(ff.delta == f.delta);
    const auto s = degeneracy_map(c, 0);
    const auto back = compose(s, face_map(s.source, 0));
    CHECK(back.source == c);
}
