#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "confstrata/errors.hpp"
#include "confstrata/io.hpp"
#include "confstrata/weightalg.hpp"

using namespace confstrata;
using namespace confstrata::weightalg;

namespace {

using Series = std::vector<std::int64_t>;

// Π_{j<n} (P_X(t) + j t^{2d}) truncated after degree N.
Series product_formula(const VarietyDescriptor& x, int n, int N) {
    Series acc(N + 1, 0);
    acc[0] = 1;
    for (int j = 0; j < n; ++j) {
        Series f(N + 1, 0);
        for (const auto& [deg, w] : x.cohomology.by_degree()) {
            if (deg <= N) f[deg] += w.total();
        }
        if (2 * x.d <= N) f[2 * x.d] += j;
        Series next(N + 1, 0);
        for (int a = 0; a <= N; ++a) {
            for (int b = 0; a + b <= N; ++b) next[a + b] += acc[a] * f[b];
        }
        acc = next;
    }
    return acc;
}

// Monomials x_{i1 j1}...x_{ik jk}, i < j, with pairwise distinct second indices.
Series distinct_second_index_count(int n, int N) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
    }
    Series out(N + 1, 0);
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << pairs.size()); ++pick) {
        std::uint64_t seconds = 0;
        bool ok = true;
        int k = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (!((pick >> p) & 1U)) continue;
            const auto s = std::uint64_t{1} << pairs[p].second;
            if (seconds & s) ok = false;
            seconds |= s;
            ++k;
        }
        if (ok && 2 * k <= N) ++out[2 * k];
    }
    return out;
}

VarietyDescriptor corrupted() {
    return io::variety_from_json(io::parse_json(io::read_file(std::string(CONFSTRATA_DATA_DIR) + "/corrupted.json")));
}

}  // namespace

TEST_CASE("weight multisets") {
    WeightMultiset w;
    w.add(2, 3);
    w.add(4, 1);
    w.add(2, 0);
    CHECK(w.total() == 4);
    CHECK_FALSE(w.is_pure(2));
    CHECK(w.shifted(2).entries().at(4) == 3);
    CHECK(w.scaled(2).total() == 8);
    CHECK(to_string(w) == "{2: 3, 4: 1}");
    CHECK_THROWS_AS(w.add(1, -1), InputError);
}

TEST_CASE("Tate twists shift weights by 2n") {
    WeightedGradedSpace s;
    s.add(1, 1, 2);
    const auto t = tate_twist(s, 1);
    CHECK(t.at(1).entries().at(3) == 2);
    CHECK(check_pure(t).size() == 1);
    CHECK(check_pure(t, PurityRule::fixed_weight(3)).empty());
}

TEST_CASE("Künneth powers of an elliptic curve") {
    const auto x = elliptic_curve();
    CHECK(assumption_violations(x).empty());
    const auto x2 = kunneth_power(x, 2);
    const std::vector<std::int64_t> betti = {1, 4, 6, 4, 1};
    for (int k = 0; k <= 4; ++k) CHECK(x2.betti(k) == betti[k]);
    CHECK(check_pure(x2).empty());
    CHECK(tensor(kunneth_power(x, 1), kunneth_power(x, 1)) == x2);
    CHECK(kunneth_power(x, 0) == unit_space());
}

TEST_CASE("relative cohomology of X² rel Conf_2 X") {
    const auto x = elliptic_curve();
    CHECK(thom_relative(x, 0).empty());
    CHECK(thom_relative(x, 1).empty());
    for (int k = 2; k <= 4; ++k) {
        const auto w = thom_relative(x, k);
        CHECK(w.is_pure(k));
        CHECK(w.total() == x.cohomology.betti(k - 2));
    }
    CHECK(thom_relative(x, 5).empty());
}

TEST_CASE("Conf_2 report") {
    const auto r = conf2_purity_report(elliptic_curve());
    CHECK(r.middle_pure);
    CHECK(r.kernel.entries() == std::map<int, std::int64_t>{{2, 6}});
    CHECK(r.middle_betti.low == 6);
    CHECK(r.middle_betti.high == 8);
    const auto a = conf2_purity_report(affine_line());
    CHECK(a.middle_pure);
    CHECK(a.kernel.empty());
    CHECK(a.middle_betti.low == 0);
    CHECK(a.middle_betti.high == 2);
}

TEST_CASE("hypothesis gates") {
    CHECK_THROWS_AS(conf2_purity_report(corrupted()), HypothesisRefused);
    CHECK_THROWS_AS(purity_theorem_check(corrupted(), 2, 6), HypothesisRefused);
    auto x = elliptic_curve();
    x.diagonal_class_vanishes = false;
    CHECK_THROWS_AS(presentation(x, 2), HypothesisRefused);
    auto bad = affine_line();
    bad.cohomology.add(0, 0, 1);
    CHECK_THROWS_AS(validate(bad), InputError);
}

TEST_CASE("presentation generators") {
    const auto alg = presentation(elliptic_curve(), 2);
    // Two H^1 classes per copy, one H^2 class per copy, one x_12.
    CHECK(alg.generators.size() == 7);
    CHECK(alg.generators.back().label == "x12");
    CHECK(alg.generators.back().degree == 2);
    CHECK(alg.generators.back().weight == 2);
}

TEST_CASE("Hilbert series of Conf_n(A¹ × R)") {
    const auto x = affine_line();
    CHECK(hilbert_series(presentation(x, 2), 8).coefficients() == Series{1, 0, 1, 0, 0, 0, 0, 0, 0});
    CHECK(hilbert_series(presentation(x, 3), 8).coefficients() == Series{1, 0, 3, 0, 2, 0, 0, 0, 0});
    for (int n = 2; n <= 5; ++n) {
        CHECK(hilbert_series(presentation(x, n), 8).coefficients() == distinct_second_index_count(n, 8));
    }
}

TEST_CASE("Hilbert series match the product formula") {
    for (int n = 1; n <= 4; ++n) {
        const auto x = affine_line();
        CHECK(hilbert_series(presentation(x, n), 10).coefficients() == product_formula(x, n, 10));
    }
    for (int n = 1; n <= 3; ++n) {
        const auto x = elliptic_curve();
        CHECK(hilbert_series(presentation(x, n), 8).coefficients() == product_formula(x, n, 8));
    }
}

TEST_CASE("the ring structure of X does not change the Hilbert series") {
    auto plain = elliptic_curve();
    plain.products.clear();
    for (int n = 1; n <= 3; ++n) {
        CHECK(hilbert_series(presentation(plain, n), 8).coefficients() ==
              hilbert_series(presentation(elliptic_curve(), n), 8).coefficients());
    }
}

TEST_CASE("dropping relations enlarges the algebra") {
    RelationOptions no_arnold;
    no_arnold.arnold = false;
    const auto full = hilbert_series(presentation(affine_line(), 3), 6).coefficients();
    const auto weaker = hilbert_series(presentation(affine_line(), 3, no_arnold), 6).coefficients();
    CHECK(weaker[4] > full[4]);
}

TEST_CASE("purity theorem check") {
    for (int n = 1; n <= 3; ++n) {
        const auto v = purity_theorem_check(elliptic_curve(), n, 8);
        CHECK(v.pure);
        CHECK(v.generators_pure);
    }
    for (int n = 1; n <= 4; ++n) CHECK(purity_theorem_check(affine_line(), n, 8).pure);
    const auto s = hilbert_series(presentation(elliptic_curve(), 2), 4);
    CHECK(s.pieces[2].weights.entries() == std::map<int, std::int64_t>{{2, 7}});
}

TEST_CASE("products follow graded commutativity") {
    const auto alg = presentation(elliptic_curve(), 1);
    // a b = ω and b a = -ω leave H^2 one-dimensional.
    CHECK(hilbert_series(alg, 2).coefficients() == Series{1, 2, 1});
    CHECK(monomial_string(alg.generators, Monomial{0}) == alg.generators[0].label);
}

TEST_CASE("truncation cap") {
    const auto alg = presentation(affine_line(), 2);
    CHECK_THROWS_AS(hilbert_series(alg, 41), CapExceeded);
    CHECK_NOTHROW(hilbert_series(alg, 41, 200000, true));
}
