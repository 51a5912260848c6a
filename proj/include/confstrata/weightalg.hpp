#pragma once

// Frobenius weights abstracted to integers: weighted graded spaces, Tate
// twists, Künneth, the Thom relative formula, the Conf_2 ledger, and the
// presentation of H*(Conf_n(X×ℝ)) with its Hilbert series.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confstrata/linalg.hpp"

namespace confstrata::weightalg {

using linalg::Rational;

// Weight -> positive multiplicity.
class WeightMultiset {
public:
    WeightMultiset() = default;
    // Throws InputError for a negative multiplicity; zero is ignored.
    void add(int weight, std::int64_t mult);
    void add(const WeightMultiset& other);

    [[nodiscard]] const std::map<int, std::int64_t>& entries() const { return entries_; }
    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::int64_t total() const;
    [[nodiscard]] bool is_pure(int weight) const;
    [[nodiscard]] WeightMultiset shifted(int by) const;
    WeightMultiset scaled(std::int64_t factor) const;

    friend bool operator==(const WeightMultiset&, const WeightMultiset&) = default;

private:
    std::map<int, std::int64_t> entries_;
};

std::string to_string(const WeightMultiset& w);

// Cohomological degree -> weights. Empty degrees are not stored.
class WeightedGradedSpace {
public:
    // Throws InputError for a negative degree.
    void add(int degree, int weight, std::int64_t mult);
    void add(int degree, const WeightMultiset& w);

    [[nodiscard]] const std::map<int, WeightMultiset>& by_degree() const { return by_degree_; }
    [[nodiscard]] WeightMultiset at(int degree) const;
    [[nodiscard]] std::int64_t betti(int degree) const { return at(degree).total(); }
    [[nodiscard]] int max_degree() const;

    friend bool operator==(const WeightedGradedSpace&, const WeightedGradedSpace&) = default;

private:
    std::map<int, WeightMultiset> by_degree_;
};

WeightedGradedSpace unit_space();

struct PurityRule {
    bool fixed = false;  // false: weight must equal degree
    int weight = 0;
    static PurityRule weight_equals_degree() { return {}; }
    static PurityRule fixed_weight(int n) { return {true, n}; }
};

struct PurityViolation {
    int degree = 0;
    int weight = 0;
    std::int64_t mult = 0;
};

// Empty exactly when the space is pure for the rule.
std::vector<PurityViolation> check_pure(const WeightedGradedSpace& space, PurityRule rule = {});

// Weights raised by 2n: Q_ℓ(n) is pure of weight 2n.
WeightMultiset tate_twist(const WeightMultiset& w, int n);
WeightedGradedSpace tate_twist(const WeightedGradedSpace& space, int n);
WeightedGradedSpace tensor(const WeightedGradedSpace& a, const WeightedGradedSpace& b);

// Cup products of basis classes, for presentations. Basis classes are named
// "<degree>.<k>" with k running over the degree's classes ordered by weight.
struct ProductRule {
    std::string left;
    std::string right;
    std::vector<std::pair<std::string, Rational>> terms;
};

struct VarietyDescriptor {
    std::string name;
    int d = 1;
    std::int64_t q = 0;  // reporting only
    bool diagonal_class_vanishes = false;
    WeightedGradedSpace cohomology;
    std::vector<ProductRule> products;  // unspecified products vanish
};

struct BasisClass {
    std::string name;
    int degree = 0;
    int weight = 0;
};

// A¹ and an elliptic curve over F_q with the product 1.0 · 1.1 = 2.0.
VarietyDescriptor affine_line();
VarietyDescriptor elliptic_curve(std::int64_t q = 5);

// Throws InputError unless d >= 1, degrees lie in [0, 2d] and H^0 is one-dimensional.
void validate(const VarietyDescriptor& x);
std::vector<BasisClass> basis(const VarietyDescriptor& x);
// Violations of "H^i is pure of weight i".
std::vector<PurityViolation> assumption_violations(const VarietyDescriptor& x);

WeightedGradedSpace kunneth_power(const VarietyDescriptor& x, int n);
// H^k(X², Conf_2 X) ≅ H^{k-2d}(X)(d); empty for k < 2d.
WeightMultiset thom_relative(const VarietyDescriptor& x, int k);

struct BettiInterval {
    std::int64_t low = 0;
    std::int64_t high = 0;
};

struct Conf2Report {
    int d = 0;
    WeightMultiset v_2d;          // relative group in degree 2d
    WeightMultiset v_2d1;         // relative group in degree 2d + 1
    WeightMultiset kernel;        // ker α, identified with H^{2d}(X²)
    WeightMultiset third_term;    // upper bound V(2d)^{⊕2} for the third term
    WeightMultiset middle_bound;  // every weight that can occur in the middle term
    bool middle_pure = false;     // pure of weight 2d
    BettiInterval middle_betti;
};

// Throws HypothesisRefused when the purity assumption fails or the diagonal
// class flag is not set.
Conf2Report conf2_purity_report(const VarietyDescriptor& x);

// ---------------------------------------------------------------------------
// Presentation algebra

struct Generator {
    std::string label;
    int degree = 0;
    int weight = 0;
};

// Generator indices in non-decreasing order; odd generators appear at most once.
using Monomial = std::vector<std::uint16_t>;
using Polynomial = std::map<Monomial, Rational>;

struct Relation {
    std::string kind;
    Polynomial poly;
    int degree = 0;
    int weight = 0;
};

struct RelationOptions {
    bool squares = true;  // x_ij² = 0
    bool arnold = true;   // x_ij x_jk − x_jk x_ik − x_ik x_ij = 0 for i < j < k
    bool module = true;   // (a^(i) − a^(j)) x_ij = 0
    bool ring = true;     // products inside each copy of H*(X)
};

struct PresentationAlgebra {
    std::vector<Generator> generators;
    std::string commutation = "graded-commutative";
    std::vector<Relation> relations;
    int n = 0;
    int d = 1;
    int default_truncation = 0;
};

// Product of monomials with the Koszul sign; nullopt when it vanishes.
std::optional<std::pair<int, Monomial>> multiply(const std::vector<Generator>& gens, const Monomial& a, const Monomial& b);
std::string monomial_string(const std::vector<Generator>& gens, const Monomial& m);

// Throws HypothesisRefused unless diagonal_class_vanishes.
PresentationAlgebra presentation(const VarietyDescriptor& x, int n, RelationOptions options = {});

struct DegreePiece {
    int degree = 0;
    std::int64_t dim = 0;
    WeightMultiset weights;
    bool pure = true;
    std::optional<std::string> first_violation;  // a basis monomial of the wrong weight
};

struct HilbertSeries {
    int truncation = 0;
    std::vector<DegreePiece> pieces;  // degrees 0..truncation
    [[nodiscard]] std::vector<std::int64_t> coefficients() const;
    [[nodiscard]] bool pure() const;
};

// Graded dimensions and weights by degree-wise normal forms. Throws
// ResourceLimit if a degree needs more than `max_monomials` columns.
// N <= 40, or 80 when uncapped.
HilbertSeries hilbert_series(const PresentationAlgebra& algebra, int truncation, std::size_t max_monomials = 200000,
                             bool uncapped = false);

struct PurityVerdict {
    bool pure = false;
    bool generators_pure = false;  // conclusion from generator weights alone
    HilbertSeries series;
    std::optional<std::string> first_violation;
};

// Throws HypothesisRefused if the descriptor fails the purity assumption or
// the diagonal class flag.
PurityVerdict purity_theorem_check(const VarietyDescriptor& x, int n, int truncation, RelationOptions options = {},
                                   bool uncapped = false);

}  // namespace confstrata::weightalg
