#include "confstrata/weightalg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "confstrata/errors.hpp"

namespace confstrata::weightalg {

void WeightMultiset::add(int weight, std::int64_t mult) {
    if (mult < 0) throw InputError("multiplicities must be positive");
    if (mult == 0) return;
    entries_[weight] += mult;
}

void WeightMultiset::add(const WeightMultiset& other) {
    for (auto [w, m] : other.entries_) add(w, m);
}

std::int64_t WeightMultiset::total() const {
    std::int64_t t = 0;
    for (auto [w, m] : entries_) t += m;
    return t;
}

bool WeightMultiset::is_pure(int weight) const {
    return std::all_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == weight; });
}

WeightMultiset WeightMultiset::shifted(int by) const {
    WeightMultiset out;
    for (auto [w, m] : entries_) out.add(w + by, m);
    return out;
}

WeightMultiset WeightMultiset::scaled(std::int64_t factor) const {
    WeightMultiset out;
    for (auto [w, m] : entries_) out.add(w, m * factor);
    return out;
}

std::string to_string(const WeightMultiset& w) {
    std::string out = "{";
    bool first = true;
    for (auto [weight, mult] : w.entries()) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(weight) + ": " + std::to_string(mult);
    }
    return out + "}";
}

void WeightedGradedSpace::add(int degree, int weight, std::int64_t mult) {
    if (degree < 0) throw InputError("cohomological degrees must be non-negative");
    if (mult == 0) return;
    by_degree_[degree].add(weight, mult);
}

void WeightedGradedSpace::add(int degree, const WeightMultiset& w) {
    for (auto [weight, mult] : w.entries()) add(degree, weight, mult);
}

WeightMultiset WeightedGradedSpace::at(int degree) const {
    auto it = by_degree_.find(degree);
    return it == by_degree_.end() ? WeightMultiset{} : it->second;
}

int WeightedGradedSpace::max_degree() const { return by_degree_.empty() ? -1 : by_degree_.rbegin()->first; }

WeightedGradedSpace unit_space() {
    WeightedGradedSpace u;
    u.add(0, 0, 1);
    return u;
}

std::vector<PurityViolation> check_pure(const WeightedGradedSpace& space, PurityRule rule) {
    std::vector<PurityViolation> out;
    for (const auto& [degree, w] : space.by_degree()) {
        const int expected = rule.fixed ? rule.weight : degree;
        for (auto [weight, mult] : w.entries()) {
            if (weight != expected) out.push_back({degree, weight, mult});
        }
    }
    return out;
}

WeightMultiset tate_twist(const WeightMultiset& w, int n) { return w.shifted(2 * n); }

WeightedGradedSpace tate_twist(const WeightedGradedSpace& space, int n) {
    WeightedGradedSpace out;
    for (const auto& [degree, w] : space.by_degree()) out.add(degree, tate_twist(w, n));
    return out;
}

WeightedGradedSpace tensor(const WeightedGradedSpace& a, const WeightedGradedSpace& b) {
    WeightedGradedSpace out;
    for (const auto& [da, wa] : a.by_degree()) {
        for (const auto& [db, wb] : b.by_degree()) {
            for (auto [x, mx] : wa.entries()) {
                for (auto [y, my] : wb.entries()) out.add(da + db, x + y, mx * my);
            }
        }
    }
    return out;
}

void validate(const VarietyDescriptor& x) {
    if (x.d < 1) throw InputError("variety dimension d must be at least 1");
    for (const auto& [degree, w] : x.cohomology.by_degree()) {
        if (degree > 2 * x.d) {
            throw InputError("cohomology in degree " + std::to_string(degree) + " exceeds 2d = " + std::to_string(2 * x.d));
        }
    }
    if (x.cohomology.betti(0) != 1) throw InputError("H^0 must be one-dimensional (connected X)");
    const auto classes = basis(x);
    auto find = [&](const std::string& name) -> const BasisClass& {
        for (const auto& c : classes) {
            if (c.name == name) return c;
        }
        throw InputError("product rule names unknown class " + name);
    };
    for (const auto& rule : x.products) {
        const auto& l = find(rule.left);
        const auto& r = find(rule.right);
        if (l.degree == 0 || r.degree == 0) throw InputError("product rules are for positive-degree classes");
        for (const auto& [name, coeff] : rule.terms) {
            const auto& t = find(name);
            if (t.degree != l.degree + r.degree || t.weight != l.weight + r.weight) {
                throw InputError("product " + rule.left + "·" + rule.right + " is not homogeneous in degree and weight");
            }
        }
    }
}

std::vector<BasisClass> basis(const VarietyDescriptor& x) {
    std::vector<BasisClass> out;
    for (const auto& [degree, w] : x.cohomology.by_degree()) {
        int k = 0;
        for (auto [weight, mult] : w.entries()) {
            for (std::int64_t i = 0; i < mult; ++i) {
                out.push_back({std::to_string(degree) + "." + std::to_string(k++), degree, weight});
            }
        }
    }
    return out;
}

std::vector<PurityViolation> assumption_violations(const VarietyDescriptor& x) { return check_pure(x.cohomology); }

WeightedGradedSpace kunneth_power(const VarietyDescriptor& x, int n) {
    if (n < 0) throw InputError("Künneth power needs n >= 0");
    WeightedGradedSpace out = unit_space();
    for (int i = 0; i < n; ++i) out = tensor(out, x.cohomology);
    return out;
}

WeightMultiset thom_relative(const VarietyDescriptor& x, int k) {
    if (k < 2 * x.d) return {};
    return tate_twist(x.cohomology.at(k - 2 * x.d), x.d);
}

namespace {

void require_hypotheses(const VarietyDescriptor& x) {
    validate(x);
    auto bad = assumption_violations(x);
    if (!bad.empty()) {
        throw HypothesisRefused("purity assumption fails: H^" + std::to_string(bad.front().degree) + " has weight " +
                                std::to_string(bad.front().weight) + " (multiplicity " + std::to_string(bad.front().mult) +
                                ")");
    }
    if (!x.diagonal_class_vanishes) throw HypothesisRefused("diagonal_class_vanishes is not set");
}

}  // namespace

Conf2Report conf2_purity_report(const VarietyDescriptor& x) {
    require_hypotheses(x);
    Conf2Report r;
    r.d = x.d;
    r.v_2d = thom_relative(x, 2 * x.d);
    r.v_2d1 = thom_relative(x, 2 * x.d + 1);
    r.kernel = kunneth_power(x, 2).at(2 * x.d);
    r.third_term = r.v_2d.scaled(2);
    r.middle_bound = r.kernel;
    r.middle_bound.add(r.third_term);
    r.middle_pure = r.middle_bound.is_pure(2 * x.d);
    r.middle_betti = {r.kernel.total(), r.kernel.total() + r.third_term.total()};
    return r;
}

// ---------------------------------------------------------------------------

std::optional<std::pair<int, Monomial>> multiply(const std::vector<Generator>& gens, const Monomial& a, const Monomial& b) {
    Monomial word = a;
    word.insert(word.end(), b.begin(), b.end());
    int parity = 0;
    for (std::size_t p = 0; p < word.size(); ++p) {
        if (gens[word[p]].degree % 2 == 0) continue;
        for (std::size_t q = p + 1; q < word.size(); ++q) {
            if (gens[word[q]].degree % 2 != 0 && word[q] < word[p]) parity ^= 1;
        }
    }
    std::sort(word.begin(), word.end());
    for (std::size_t p = 1; p < word.size(); ++p) {
        if (word[p] == word[p - 1] && gens[word[p]].degree % 2 != 0) return std::nullopt;
    }
    return std::make_pair(parity ? -1 : 1, std::move(word));
}

std::string monomial_string(const std::vector<Generator>& gens, const Monomial& m) {
    if (m.empty()) return "1";
    std::string out;
    std::size_t i = 0;
    while (i < m.size()) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        if (!out.empty()) out += "·";
        out += gens[m[i]].label;
        if (j - i > 1) out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

namespace {

void add_term(Polynomial& p, const Monomial& m, const Rational& c) {
    auto& slot = p[m];
    slot += c;
    if (slot == 0) p.erase(m);
}

Relation make_relation(std::string kind, Polynomial poly, const std::vector<Generator>& gens) {
    Relation r{std::move(kind), std::move(poly), 0, 0};
    bool first = true;
    for (const auto& [m, c] : r.poly) {
        int deg = 0;
        int wt = 0;
        for (auto g : m) {
            deg += gens[g].degree;
            wt += gens[g].weight;
        }
        if (first) {
            r.degree = deg;
            r.weight = wt;
            first = false;
        } else if (deg != r.degree || wt != r.weight) {
            throw InputError(r.kind + " relation is not homogeneous");
        }
    }
    return r;
}

}  // namespace

PresentationAlgebra presentation(const VarietyDescriptor& x, int n, RelationOptions options) {
    validate(x);
    if (n < 1) throw InputError("presentation needs n >= 1");
    if (!x.diagonal_class_vanishes) throw HypothesisRefused("diagonal_class_vanishes is not set");
    PresentationAlgebra alg;
    alg.n = n;
    alg.d = x.d;
    const auto classes = basis(x);
    std::vector<std::size_t> positive;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (classes[c].degree > 0) positive.push_back(c);
    }
    // copy_gen[i][c]: generator index of class c in copy i
    std::vector<std::map<std::size_t, std::uint16_t>> copy_gen(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (auto c : positive) {
            copy_gen[i][c] = static_cast<std::uint16_t>(alg.generators.size());
            alg.generators.push_back({"h" + classes[c].name + "^(" + std::to_string(i + 1) + ")", classes[c].degree,
                                      classes[c].weight});
        }
    }
    std::map<std::pair<int, int>, std::uint16_t> xg;
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            xg[{i, j}] = static_cast<std::uint16_t>(alg.generators.size());
            const std::string sep = n >= 10 ? "," : "";
            alg.generators.push_back({"x" + std::to_string(i) + sep + std::to_string(j), 2 * x.d, 2 * x.d});
        }
    }
    if (alg.generators.size() > 60000) throw CapExceeded("too many generators");
    const auto& gens = alg.generators;

    if (options.ring) {
        auto index_of = [&](const std::string& name) {
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (classes[c].name == name) return c;
            }
            throw InputError("unknown class " + name);
        };
        // (left, right) -> product terms, completed by graded commutativity.
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, Rational>>> table;
        for (const auto& rule : x.products) {
            const auto l = index_of(rule.left);
            const auto r = index_of(rule.right);
            std::vector<std::pair<std::size_t, Rational>> terms;
            for (const auto& [name, c] : rule.terms) terms.emplace_back(index_of(name), c);
            const int sign = (classes[l].degree * classes[r].degree) % 2 ? -1 : 1;
            std::vector<std::pair<std::size_t, Rational>> swapped;
            for (const auto& [t, c] : terms) swapped.emplace_back(t, sign * c);
            for (const auto& [key, value] : {std::pair{std::pair{l, r}, terms}, std::pair{std::pair{r, l}, swapped}}) {
                auto it = table.find(key);
                if (it != table.end() && it->second != value) {
                    throw InputError("product rules for " + rule.left + " and " + rule.right + " are inconsistent");
                }
                table[key] = value;
            }
        }
        for (int i = 0; i < n; ++i) {
            for (std::size_t p = 0; p < positive.size(); ++p) {
                for (std::size_t q = p; q < positive.size(); ++q) {
                    const auto a = positive[p];
                    const auto b = positive[q];
                    auto prod = multiply(gens, {copy_gen[i][a]}, {copy_gen[i][b]});
                    if (!prod) continue;  // odd square
                    Polynomial poly;
                    add_term(poly, prod->second, Rational(prod->first));
                    auto it = table.find({a, b});
                    if (it != table.end()) {
                        for (const auto& [t, c] : it->second) add_term(poly, {copy_gen[i][t]}, -c);
                    }
                    alg.relations.push_back(make_relation("ring", std::move(poly), gens));
                }
            }
        }
    }
    if (options.squares) {
        for (const auto& [ij, g] : xg) alg.relations.push_back(make_relation("square", {{{g, g}, Rational(1)}}, gens));
    }
    if (options.arnold) {
        for (int i = 1; i <= n; ++i) {
            for (int j = i + 1; j <= n; ++j) {
                for (int k = j + 1; k <= n; ++k) {
                    const auto a = xg[{i, j}];
                    const auto b = xg[{j, k}];
                    const auto c = xg[{i, k}];
                    Polynomial poly;
                    add_term(poly, multiply(gens, {a}, {b})->second, Rational(1));
                    add_term(poly, multiply(gens, {b}, {c})->second, Rational(-1));
                    add_term(poly, multiply(gens, {c}, {a})->second, Rational(-1));
                    alg.relations.push_back(make_relation("arnold", std::move(poly), gens));
                }
            }
        }
    }
    if (options.module) {
        for (const auto& [ij, g] : xg) {
            for (auto c : positive) {
                Polynomial poly;
                auto left = multiply(gens, {copy_gen[ij.first - 1][c]}, {g});
                auto right = multiply(gens, {copy_gen[ij.second - 1][c]}, {g});
                add_term(poly, left->second, Rational(left->first));
                add_term(poly, right->second, Rational(-right->first));
                alg.relations.push_back(make_relation("module", std::move(poly), gens));
            }
        }
    }
    int max_gen = 0;
    for (const auto& g : gens) max_gen = std::max(max_gen, g.degree);
    alg.default_truncation = std::min(40, 2 * n * std::max(max_gen, 1));
    return alg;
}

std::vector<std::int64_t> HilbertSeries::coefficients() const {
    std::vector<std::int64_t> c;
    for (const auto& p : pieces) c.push_back(p.dim);
    return c;
}

bool HilbertSeries::pure() const {
    return std::all_of(pieces.begin(), pieces.end(), [](const DegreePiece& p) { return p.pure; });
}

HilbertSeries hilbert_series(const PresentationAlgebra& algebra, int truncation, std::size_t max_monomials,
                             bool uncapped) {
    if (truncation < 0) throw InputError("truncation degree must be non-negative");
    if (truncation > (uncapped ? 80 : 40)) throw CapExceeded("truncation degree is limited to 40");
    const auto& gens = algebra.generators;
    for (const auto& g : gens) {
        if (g.degree < 1) throw InputError("generator " + g.label + " must have positive degree");
    }
    for (const auto& r : algebra.relations) {
        for (const auto& [m, c] : r.poly) {
            for (auto g : m) {
                if (g >= gens.size()) throw InputError("relation mentions an unknown generator");
            }
        }
    }
    // Monomials grouped by (degree, weight).
    std::vector<std::map<int, std::vector<Monomial>>> monos(static_cast<std::size_t>(truncation + 1));
    std::vector<std::size_t> per_degree(static_cast<std::size_t>(truncation + 1), 0);
    Monomial cur;
    std::function<void(std::size_t, int, int)> rec = [&](std::size_t from, int deg, int wt) {
        if (++per_degree[deg] > max_monomials) {
            throw ResourceLimit("more than " + std::to_string(max_monomials) + " monomials in degree " + std::to_string(deg));
        }
        monos[deg][wt].push_back(cur);
        for (std::size_t g = from; g < gens.size(); ++g) {
            const int nd = deg + gens[g].degree;
            if (nd > truncation) continue;
            const bool odd = gens[g].degree % 2 != 0;
            cur.push_back(static_cast<std::uint16_t>(g));
            rec(odd ? g + 1 : g, nd, wt + gens[g].weight);
            cur.pop_back();
        }
    };
    rec(0, 0, 0);

    HilbertSeries series;
    series.truncation = truncation;
    for (int deg = 0; deg <= truncation; ++deg) {
        DegreePiece piece;
        piece.degree = deg;
        for (const auto& [wt, cols] : monos[deg]) {
            std::map<Monomial, std::uint32_t> col_of;
            for (std::size_t c = 0; c < cols.size(); ++c) col_of.emplace(cols[c], static_cast<std::uint32_t>(c));
            linalg::Echelon echelon(cols.size());
            for (const auto& rel : algebra.relations) {
                const int rd = deg - rel.degree;
                if (rd < 0 || rel.poly.empty()) continue;
                auto it = monos[rd].find(wt - rel.weight);
                if (it == monos[rd].end()) continue;
                for (const auto& m : it->second) {
                    std::map<std::uint32_t, Rational> acc;
                    for (const auto& [term, coeff] : rel.poly) {
                        auto prod = multiply(gens, m, term);
                        if (!prod) continue;
                        auto& slot = acc[col_of.at(prod->second)];
                        slot += prod->first * coeff;
                    }
                    linalg::SparseRow row;
                    for (auto& [c, v] : acc) {
                        if (v != 0) row.emplace_back(c, std::move(v));
                    }
                    if (!row.empty()) echelon.insert(std::move(row));
                    if (echelon.rank() == cols.size()) break;
                }
                if (echelon.rank() == cols.size()) break;
            }
            const auto free = static_cast<std::int64_t>(cols.size() - echelon.rank());
            piece.dim += free;
            piece.weights.add(wt, free);
            if (free > 0 && wt != deg) {
                piece.pure = false;
                if (!piece.first_violation) {
                    for (std::size_t c = 0; c < cols.size(); ++c) {
                        if (!echelon.is_pivot(c)) {
                            piece.first_violation = monomial_string(gens, cols[c]) + " has weight " + std::to_string(wt) +
                                                    " in degree " + std::to_string(deg);
                            break;
                        }
                    }
                }
            }
        }
        series.pieces.push_back(std::move(piece));
    }
    return series;
}

PurityVerdict purity_theorem_check(const VarietyDescriptor& x, int n, int truncation, RelationOptions options,
                                   bool uncapped) {
    require_hypotheses(x);
    PurityVerdict verdict;
    const auto alg = presentation(x, n, options);
    verdict.generators_pure = std::all_of(alg.generators.begin(), alg.generators.end(),
                                          [](const Generator& g) { return g.weight == g.degree; });
    verdict.series = hilbert_series(alg, truncation, 200000, uncapped);
    verdict.pure = verdict.series.pure();
    for (const auto& p : verdict.series.pieces) {
        if (p.first_violation) {
            verdict.first_violation = p.first_violation;
            break;
        }
    }
    return verdict;
}

VarietyDescriptor affine_line() {
    VarietyDescriptor x;
    x.name = "affine line";
    x.d = 1;
    x.q = 0;
    x.diagonal_class_vanishes = true;
    x.cohomology.add(0, 0, 1);
    return x;
}

VarietyDescriptor elliptic_curve(std::int64_t q) {
    VarietyDescriptor x;
    x.name = "elliptic curve";
    x.d = 1;
    x.q = q;
    x.diagonal_class_vanishes = true;
    x.cohomology.add(0, 0, 1);
    x.cohomology.add(1, 1, 2);
    x.cohomology.add(2, 2, 1);
    x.products.push_back(ProductRule{"1.0", "1.1", {{"2.0", Rational(1)}}});
    return x;
}

}  // namespace confstrata::weightalg
