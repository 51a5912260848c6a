#include "confstrata/koszul.hpp"

#include <algorithm>
#include <map>

#include "confstrata/errors.hpp"

namespace confstrata::koszul {

std::string to_string(Convention c) { return c == Convention::free ? "free" : "graded-commutative"; }

Convention parse_convention(const std::string& text) {
    if (text == "free") return Convention::free;
    if (text == "graded-commutative") return Convention::graded_commutative;
    throw InputError("unknown convention '" + text + "' (expected free or graded-commutative)");
}

void validate(const QuadraticPresentation& p) {
    if (p.generators < 0) throw InputError("generator count must be non-negative");
    if (p.generators > 64) throw CapExceeded("quadratic presentations are limited to 64 generators");
    const std::size_t dim = static_cast<std::size_t>(p.generators) * static_cast<std::size_t>(p.generators);
    for (std::size_t i = 0; i < p.relations.size(); ++i) {
        if (p.relations[i].size() != dim) {
            throw InputError("relation " + std::to_string(i) + " has " + std::to_string(p.relations[i].size()) +
                             " coefficients, expected g² = " + std::to_string(dim));
        }
        if (std::all_of(p.relations[i].begin(), p.relations[i].end(), [](const Rational& q) { return q == 0; })) {
            throw InputError("relation " + std::to_string(i) + " is zero");
        }
    }
    if (linalg::rank(p.relations, dim) != p.relations.size()) throw InputError("relation vectors are linearly dependent");
}

std::vector<std::vector<Rational>> effective_relations(const QuadraticPresentation& p) {
    validate(p);
    const auto g = static_cast<std::size_t>(p.generators);
    std::vector<std::vector<Rational>> all = p.relations;
    if (p.convention == Convention::graded_commutative) {
        for (std::size_t a = 0; a < g; ++a) {
            for (std::size_t b = a + 1; b < g; ++b) {
                std::vector<Rational> v(g * g, 0);
                v[a * g + b] = 1;
                v[b * g + a] = 1;
                all.push_back(std::move(v));
            }
        }
    }
    // Keep a basis.
    linalg::Echelon e(g * g);
    std::vector<std::vector<Rational>> basis;
    for (auto& v : all) {
        linalg::SparseRow row;
        for (std::size_t c = 0; c < v.size(); ++c) {
            if (v[c] != 0) row.emplace_back(static_cast<std::uint32_t>(c), v[c]);
        }
        if (e.insert(std::move(row))) basis.push_back(std::move(v));
    }
    return basis;
}

QuadraticPresentation quadratic_dual(const QuadraticPresentation& p) {
    const auto r = effective_relations(p);
    const auto g = static_cast<std::size_t>(p.generators);
    QuadraticPresentation dual;
    dual.generators = p.generators;
    dual.convention = Convention::free;
    dual.relations = linalg::nullspace(r, g * g);
    dual.regrading = p.regrading;
    return dual;
}

TruncatedSeries hilbert_of_quadratic(const QuadraticPresentation& p, int truncation, std::size_t max_columns,
                                     bool uncapped) {
    if (truncation < 0) throw InputError("truncation must be non-negative");
    if (truncation > (uncapped ? 80 : 40)) throw CapExceeded("truncation degree is limited to 40");
    const auto rel = effective_relations(p);
    const auto g = static_cast<std::size_t>(p.generators);
    TruncatedSeries series{1};
    if (truncation == 0) return series;
    series.push_back(static_cast<std::int64_t>(g));

    // nf[b][a]: normal form of (basis word b of A_{n-1}) · x_a in A_n's basis.
    // Degree 1: basis = generators; A_0 · x_a = x_a.
    using Combination = std::vector<std::pair<std::uint32_t, Rational>>;
    std::size_t prev_dim = 1;  // dim A_{n-2}
    std::size_t cur_dim = g;   // dim A_{n-1}
    // nf_prev[u][a]: normal form in A_{n-1} of (basis u of A_{n-2})·x_a.
    std::vector<std::vector<Combination>> nf_prev(1, std::vector<Combination>(g));
    for (std::size_t a = 0; a < g; ++a) nf_prev[0][a] = {{static_cast<std::uint32_t>(a), Rational(1)}};

    for (int n = 2; n <= truncation; ++n) {
        const std::size_t cols = cur_dim * g;  // column b*g + x
        if (cols > max_columns) throw ResourceLimit("degree " + std::to_string(n) + " needs " + std::to_string(cols) + " columns");
        linalg::Echelon echelon(cols);
        for (std::size_t u = 0; u < prev_dim && echelon.rank() < cols; ++u) {
            for (const auto& r : rel) {
                std::map<std::uint32_t, Rational> acc;
                for (std::size_t a = 0; a < g; ++a) {
                    for (std::size_t b = 0; b < g; ++b) {
                        const auto& c = r[a * g + b];
                        if (c == 0) continue;
                        for (const auto& [w, coeff] : nf_prev[u][a]) {
                            acc[static_cast<std::uint32_t>(w * g + b)] += c * coeff;
                        }
                    }
                }
                linalg::SparseRow row;
                for (auto& [col, v] : acc) {
                    if (v != 0) row.emplace_back(col, std::move(v));
                }
                if (!row.empty()) echelon.insert(std::move(row));
            }
        }
        std::vector<std::int32_t> basis_index(cols, -1);
        std::size_t dim = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (!echelon.is_pivot(c)) basis_index[c] = static_cast<std::int32_t>(dim++);
        }
        series.push_back(static_cast<std::int64_t>(dim));
        if (n == truncation) break;
        std::vector<std::vector<Combination>> nf(cur_dim, std::vector<Combination>(g));
        for (std::size_t b = 0; b < cur_dim; ++b) {
            for (std::size_t a = 0; a < g; ++a) {
                const auto col = static_cast<std::uint32_t>(b * g + a);
                auto rem = echelon.reduce({{col, Rational(1)}});
                Combination out;
                for (auto& [c, v] : rem) out.emplace_back(static_cast<std::uint32_t>(basis_index[c]), std::move(v));
                nf[b][a] = std::move(out);
            }
        }
        nf_prev = std::move(nf);
        prev_dim = cur_dim;
        cur_dim = dim;
    }
    return series;
}

KoszulVerdict koszul_criterion(const QuadraticPresentation& p, int truncation, bool uncapped) {
    if (truncation < 2) throw InputError("the Koszul criterion needs N >= 2");
    KoszulVerdict v;
    v.order = truncation;
    v.h_a = hilbert_of_quadratic(p, truncation, 2000000, uncapped);
    v.h_dual = hilbert_of_quadratic(quadratic_dual(p), truncation, 2000000, uncapped);
    v.product.assign(static_cast<std::size_t>(truncation + 1), 0);
    for (int i = 0; i <= truncation; ++i) {
        for (int j = 0; i + j <= truncation; ++j) {
            const std::int64_t sign = j % 2 ? -1 : 1;
            v.product[i + j] += v.h_a[i] * sign * v.h_dual[j];
        }
    }
    for (int k = 0; k <= truncation; ++k) {
        if (v.product[k] != (k == 0 ? 1 : 0)) {
            v.first_discrepancy = k;
            break;
        }
    }
    v.pass = !v.first_discrepancy;
    if (v.pass) {
        v.text = "PASS: consistent with Koszulness to order " + std::to_string(truncation) +
                 " (a necessary condition only)";
    } else {
        v.text = "FAIL: coefficient of t^" + std::to_string(*v.first_discrepancy) + " in H_A(t)·H_A!(-t) is " +
                 std::to_string(v.product[*v.first_discrepancy]) + "; not Koszul";
    }
    return v;
}

QuadraticPresentation symmetric_algebra(int g) {
    QuadraticPresentation p;
    p.generators = g;
    const auto n = static_cast<std::size_t>(g);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            std::vector<Rational> v(n * n, 0);
            v[a * n + b] = 1;
            v[b * n + a] = -1;
            p.relations.push_back(std::move(v));
        }
    }
    return p;
}

QuadraticPresentation exterior_algebra(int g) {
    QuadraticPresentation p;
    p.generators = g;
    p.convention = Convention::graded_commutative;
    const auto n = static_cast<std::size_t>(g);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<Rational> v(n * n, 0);
        v[a * n + a] = 1;
        p.relations.push_back(std::move(v));
    }
    return p;
}

}  // namespace confstrata::koszul
