#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "confstrata/errors.hpp"
#include "confstrata/koszul.hpp"

using namespace confstrata;
using namespace confstrata::koszul;

namespace {

constexpr std::int64_t kPrime = 1000000007;

std::int64_t mod_pow(std::int64_t b, std::int64_t e) {
    std::int64_t r = 1;
    b %= kPrime;
    while (e > 0) {
        if (e & 1) r = r * b % kPrime;
        b = b * b % kPrime;
        e >>= 1;
    }
    return r;
}

std::int64_t to_mod(const Rational& q) {
    auto n = static_cast<std::int64_t>(numerator(q) % kPrime);
    auto d = static_cast<std::int64_t>(denominator(q) % kPrime);
    n = (n % kPrime + kPrime) % kPrime;
    return n * mod_pow(d, kPrime - 2) % kPrime;
}

std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> rows) {
    std::size_t rank = 0;
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        const auto inv = mod_pow(rows[rank][c], kPrime - 2);
        for (auto& v : rows[rank]) v = v * inv % kPrime;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            const auto f = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k) rows[r][k] = ((rows[r][k] - f * rows[rank][k]) % kPrime + kPrime) % kPrime;
        }
        ++rank;
    }
    return rank;
}

// Relation vectors mod p, with the graded-commutative convention applied.
std::vector<std::vector<std::int64_t>> relation_space(const QuadraticPresentation& p) {
    const auto g = static_cast<std::size_t>(p.generators);
    std::vector<std::vector<std::int64_t>> rel;
    for (const auto& r : p.relations) {
        std::vector<std::int64_t> v;
        for (const auto& c : r) v.push_back(to_mod(c));
        rel.push_back(v);
    }
    if (p.convention == Convention::graded_commutative) {
        for (std::size_t a = 0; a < g; ++a) {
            for (std::size_t b = a + 1; b < g; ++b) {
                std::vector<std::int64_t> v(g * g, 0);
                v[a * g + b] = 1;
                v[b * g + a] = 1;
                rel.push_back(v);
            }
        }
    }
    return rel;
}

// dim T(V)_n / (Σ V^i ⊗ R ⊗ V^{n-2-i}) by dense elimination in V^{⊗n}.
std::vector<std::int64_t> dense_hilbert(const QuadraticPresentation& p, int N) {
    const auto g = static_cast<std::size_t>(p.generators);
    const auto rel = relation_space(p);
    std::vector<std::int64_t> out;
    std::size_t dim = 1;
    for (int n = 0; n <= N; ++n) {
        if (n > 0) dim *= g;
        if (n < 2 || g == 0) {
            out.push_back(static_cast<std::int64_t>(dim));
            continue;
        }
        std::vector<std::vector<std::int64_t>> span;
        for (int i = 0; i + 2 <= n; ++i) {
            std::size_t left = 1;
            for (int k = 0; k < i; ++k) left *= g;
            std::size_t right = 1;
            for (int k = 0; k < n - 2 - i; ++k) right *= g;
            for (std::size_t u = 0; u < left; ++u) {
                for (const auto& r : rel) {
                    for (std::size_t w = 0; w < right; ++w) {
                        std::vector<std::int64_t> v(dim, 0);
                        for (std::size_t ab = 0; ab < g * g; ++ab) {
                            if (r[ab] != 0) v[(u * g * g + ab) * right + w] = r[ab];
                        }
                        span.push_back(std::move(v));
                    }
                }
            }
        }
        out.push_back(static_cast<std::int64_t>(dim - rank_mod_p(std::move(span))));
    }
    return out;
}

QuadraticPresentation make(int g, Convention c, std::vector<std::vector<int>> rels) {
    QuadraticPresentation p;
    p.generators = g;
    p.convention = c;
    for (const auto& r : rels) {
        std::vector<Rational> v;
        for (int x : r) v.emplace_back(x);
        p.relations.push_back(v);
    }
    return p;
}

std::vector<std::int64_t> as_vector(const TruncatedSeries& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("Hilbert series agree with a dense tensor-power oracle") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int g = 2 + static_cast<int>(rng() % 2);
        const auto conv = (rng() % 2) ? Convention::free : Convention::graded_commutative;
        const int nrel = 1 + static_cast<int>(rng() % 3);
        std::vector<std::vector<int>> rels;
        for (int r = 0; r < nrel; ++r) {
            std::vector<int> v(g * g);
            for (auto& x : v) x = static_cast<int>(rng() % 5) - 2;
            rels.push_back(v);
        }
        auto p = make(g, conv, rels);
        try {
            validate(p);
        } catch (const InputError&) {
            continue;
        }
        const int N = g == 2 ? 7 : 5;
        CHECK(as_vector(hilbert_of_quadratic(p, N)) == dense_hilbert(p, N));
        const auto dual = quadratic_dual(p);
        CHECK(as_vector(hilbert_of_quadratic(dual, N)) == dense_hilbert(dual, N));
    }
}

TEST_CASE("quadratic duals annihilate the relations") {
    const auto p = make(2, Convention::free, {{1, 2, 0, -1}});
    const auto dual = quadratic_dual(p);
    CHECK(dual.convention == Convention::free);
    CHECK(dual.relations.size() == 3);
    for (const auto& r : dual.relations) {
        Rational dot = 0;
        for (std::size_t i = 0; i < 4; ++i) dot += r[i] * p.relations[0][i];
        CHECK(dot == 0);
    }
    const auto back = quadratic_dual(dual);
    CHECK(back.relations.size() == 1);
    CHECK(back.relations[0][0] * p.relations[0][1] == back.relations[0][1] * p.relations[0][0]);
}

TEST_CASE("symmetric and exterior algebras pass for g <= 4") {
    for (int g = 1; g <= 4; ++g) {
        for (const auto& p : {symmetric_algebra(g), exterior_algebra(g)}) {
            const auto v = koszul_criterion(p, 10);
            CHECK(v.pass);
            CHECK(v.product[0] == 1);
            for (int k = 1; k <= 10; ++k) CHECK(v.product[k] == 0);
        }
        // dim Λ^k V = C(g, k).
        const auto ext = hilbert_of_quadratic(exterior_algebra(g), g + 1);
        CHECK(ext[g] == 1);
        CHECK(ext[g + 1] == 0);
    }
}

TEST_CASE("genus-one curve presentation") {
    const auto p = make(2, Convention::graded_commutative, {{1, 0, 0, 0}, {0, 0, 0, 1}});
    const auto v = koszul_criterion(p, 10);
    CHECK(v.pass);
    CHECK(as_vector(v.h_a) == std::vector<std::int64_t>{1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    for (int k = 0; k <= 10; ++k) CHECK(v.h_dual[k] == k + 1);
    CHECK(v.text.find("PASS") == 0);
}

TEST_CASE("a non-Koszul quadratic algebra is caught") {
    // Q<x,y>/(yx, xy + y^2), found by random search and frozen here.
    const auto p = make(2, Convention::free, {{0, 0, 1, 0}, {0, 1, 0, 1}});
    const auto v = koszul_criterion(p, 8);
    CHECK_FALSE(v.pass);
    CHECK(v.first_discrepancy == 4);
    CHECK(v.product[4] == 1);
    CHECK(as_vector(v.h_a) == std::vector<std::int64_t>{1, 2, 2, 1, 1, 1, 1, 1, 1});
    CHECK(as_vector(v.h_dual) == std::vector<std::int64_t>{1, 2, 2, 1, 0, 0, 0, 0, 0});
    CHECK(as_vector(v.h_a) == dense_hilbert(p, 8));
    CHECK(as_vector(v.h_dual) == dense_hilbert(quadratic_dual(p), 8));
    CHECK(v.text == "FAIL: coefficient of t^4 in H_A(t)·H_A!(-t) is 1; not Koszul");
}

TEST_CASE("presentation validation") {
    CHECK_THROWS_AS(validate(make(2, Convention::free, {{1, 0, 0}})), InputError);
    CHECK_THROWS_AS(validate(make(2, Convention::free, {{0, 0, 0, 0}})), InputError);
    CHECK_THROWS_AS(validate(make(2, Convention::free, {{1, 1, 0, 0}, {2, 2, 0, 0}})), InputError);
    CHECK_THROWS_AS(koszul_criterion(symmetric_algebra(2), 1), InputError);
    CHECK_THROWS_AS(hilbert_of_quadratic(symmetric_algebra(1), 41), CapExceeded);
    CHECK(parse_convention("graded-commutative") == Convention::graded_commutative);
    CHECK_THROWS_AS(parse_convention("weird"), InputError);
}

TEST_CASE("one generator without relations") {
    const auto p = make(1, Convention::free, {});
    const auto v = koszul_criterion(p, 6);
    CHECK(v.pass);
    CHECK(as_vector(v.h_dual) == std::vector<std::int64_t>{1, 1, 0, 0, 0, 0, 0});
}
