#pragma once

// Forests on finite sets, their posets, morphisms between them, and the level
// functor ΔFin -> forests.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confstrata/setcat.hpp"

namespace confstrata::forests {

using confstrata::to_string;
using setcat::to_string;

using setcat::FiniteSet;
using setcat::FinChain;
using setcat::SetMap;
using setcat::SimplexMap;

// Subset of a ground set, as a bitmask over ground indices.
using Block = std::uint64_t;
inline constexpr std::size_t kMaxGround = 64;

inline Block bit(std::size_t i) { return Block{1} << i; }
int block_size(Block b);
// Canonical order: smaller blocks first, equal sizes lexicographic on indices.
bool block_less(Block a, Block b);

// A family of non-empty subsets of `ground` that contains every singleton and
// whose members are pairwise disjoint or nested. Blocks are kept in canonical
// order, so equality is structural.
class Forest {
public:
    Forest() = default;  // the empty forest on the empty set
    // Throws InputError unless the masks form a forest on `ground`.
    Forest(FiniteSet ground, std::vector<Block> blocks);

    static Forest from_labels(FiniteSet ground, const std::vector<std::vector<Label>>& blocks);
    static Forest minimal(FiniteSet ground);

    [[nodiscard]] const FiniteSet& ground() const { return ground_; }
    [[nodiscard]] std::span<const Block> blocks() const { return blocks_; }
    [[nodiscard]] std::size_t size() const { return blocks_.size(); }
    [[nodiscard]] Block full() const;
    [[nodiscard]] std::optional<std::size_t> index_of(Block b) const;
    [[nodiscard]] bool contains(Block b) const { return index_of(b).has_value(); }
    [[nodiscard]] std::vector<Label> labels(Block b) const;
    [[nodiscard]] int non_singleton_count() const;
    // Index of the smallest block containing `b`, if any.
    [[nodiscard]] std::optional<std::size_t> least_block_containing(Block b) const;
    // Same ground and every block of *this is a block of `other`.
    [[nodiscard]] bool is_subfamily_of(const Forest& other) const;

    friend bool operator==(const Forest& a, const Forest& b);

private:
    struct Trusted {};
    Forest(Trusted, FiniteSet ground, std::vector<Block> blocks);
    friend Forest detail_trusted_forest(FiniteSet ground, std::vector<Block> blocks);

    FiniteSet ground_;
    std::vector<Block> blocks_;
};

// Skips validation; callers guarantee a canonical, valid family.
Forest detail_trusted_forest(FiniteSet ground, std::vector<Block> blocks);

std::string to_string(const Forest& forest);

// Both forest conditions on a family of masks over n points. Empty blocks or
// bits outside the ground make the family invalid.
bool is_forest(std::size_t n, std::span<const Block> blocks);
// Throws InputError if some block is not a subset of `ground`.
bool is_forest(const FiniteSet& ground, const std::vector<std::vector<Label>>& blocks);

// Φ ∪ Ψ when that family is again a forest.
std::optional<Forest> union_if_forest(const Forest& phi, const Forest& psi);

// { j^{-1}(U) : U ∈ Ψ, j^{-1}(U) ≠ ∅ } for an injection j: S -> T and Ψ on T.
Forest pullback(const SetMap& j, const Forest& psi);
// Index form: leaf_map[s] is the target ground index of source point s.
Forest pullback(const FiniteSet& source, std::span<const std::uint32_t> leaf_map, const Forest& psi);

struct Tree {
    std::vector<Label> root;
    Forest forest;  // tree on the root set
};

// One tree per maximal block.
std::vector<Tree> trees_of(const Forest& phi);

// Finite poset given by up-sets: up[v] holds every w with v <= w (including v).
class ForestPoset {
public:
    // `order` lists pairs (a, b) meaning a <= b; the reflexive transitive
    // closure is taken. Throws InputError if the closure is not antisymmetric.
    ForestPoset(std::vector<Label> names, const std::vector<std::pair<std::size_t, std::size_t>>& order);

    [[nodiscard]] std::size_t size() const { return names_.size(); }
    [[nodiscard]] const std::vector<Label>& names() const { return names_; }
    [[nodiscard]] bool leq(std::size_t a, std::size_t b) const { return (up_[a] >> b) & 1U; }
    [[nodiscard]] std::uint64_t up_set(std::size_t v) const { return up_[v]; }
    [[nodiscard]] std::uint64_t down_set(std::size_t v) const;
    [[nodiscard]] std::uint64_t maximal() const;

    // Violations of: down-sets totally ordered; v -> {maximal elements above v}
    // injective. Empty when both hold.
    [[nodiscard]] std::vector<std::string> forest_violations() const;

private:
    std::vector<Label> names_;
    std::vector<std::uint64_t> up_;
};

// Blocks ordered by reverse inclusion. Leaf vertices are named by their
// element, other vertices by their block.
ForestPoset to_poset(const Forest& phi);
// Throws InputError if the poset violates either forest condition.
Forest from_poset(const ForestPoset& poset);

// Every forest on {1..n}, canonically sorted. n <= 6, or 7 when uncapped.
std::vector<Forest> enumerate_forests(int n, bool uncapped = false);
std::vector<Forest> enumerate_forests_by_filtering(int n);  // n <= 4
std::vector<Forest> enumerate_forests_recursive(int n, bool uncapped = false);

// A morphism (S,Φ) -> (T,Ψ). It is stored as an injective, order-preserving,
// independence-preserving map of block posets; `leaf_map` records an
// injection S -> T realizing it (the chosen representative).
class ForMorphism {
public:
    // From an injection j with Φ ⊆ j^{-1}Ψ; blocks go to the least block of Ψ
    // containing their image. Throws InputError otherwise.
    static ForMorphism from_injection(Forest source, Forest target, std::vector<std::uint32_t> leaf_map);
    static ForMorphism from_injection(Forest source, Forest target, const SetMap& j);
    // From a poset map; throws InputError unless it is injective,
    // order-preserving and independence-preserving. Each leaf s is sent to the
    // smallest point of the block assigned to {s}.
    static ForMorphism from_block_map(Forest source, Forest target, std::vector<std::uint32_t> block_map);
    static ForMorphism identity(const Forest& forest);

    [[nodiscard]] const Forest& source() const { return source_; }
    [[nodiscard]] const Forest& target() const { return target_; }
    [[nodiscard]] std::span<const std::uint32_t> leaf_map() const { return leaf_map_; }
    [[nodiscard]] std::span<const std::uint32_t> block_map() const { return block_map_; }
    [[nodiscard]] bool is_identity() const;
    // j^{-1}Ψ for the stored injection.
    [[nodiscard]] Forest pulled_back() const;

private:
    ForMorphism(Forest source, Forest target, std::vector<std::uint32_t> leaf_map, std::vector<std::uint32_t> block_map);

    Forest source_;
    Forest target_;
    std::vector<std::uint32_t> leaf_map_;
    std::vector<std::uint32_t> block_map_;
};

// Empty when `block_map` is an injective, order-preserving,
// independence-preserving map of block posets.
std::optional<std::string> poset_map_violation(const Forest& source, const Forest& target,
                                               std::span<const std::uint32_t> block_map);

// Equality as maps of block posets.
bool same_poset_map(const ForMorphism& a, const ForMorphism& b);
// Equality under the injection relation i ~ j iff i^{-1}Ψ = j^{-1}Ψ.
bool same_quotient_class(const ForMorphism& a, const ForMorphism& b);

// g ∘ f by composing the representing injections.
ForMorphism compose(const ForMorphism& g, const ForMorphism& f);
// g ∘ f by composing block maps.
ForMorphism compose_poset_maps(const ForMorphism& g, const ForMorphism& f);

std::vector<ForMorphism> poset_morphisms(const Forest& phi, const Forest& psi);

struct HomCount {
    std::int64_t poset_maps = 0;        // canonical count
    std::int64_t injections = 0;        // admissible injections j with Φ ⊆ j^{-1}Ψ
    std::int64_t quotient_classes = 0;  // injections modulo equal pullbacks
};

// |S|, |T| <= 5.
HomCount hom_count(const Forest& phi, const Forest& psi);

// F(α), with the bookkeeping needed to map between levels.
struct LevelForest {
    Forest forest;
    // block_of[i][x]: block index of the class of x ∈ S_i.
    std::vector<std::vector<std::uint32_t>> block_of;
    // first_preimage[i][x]: smallest preimage of x under f_{i-1}, or -1.
    std::vector<std::vector<std::int32_t>> first_preimage;
    // leaf_index[i][x]: ground index when x ∈ S_i is a leaf, else -1.
    std::vector<std::vector<std::int32_t>> leaf_index;
};

LevelForest level_forest(const FinChain& alpha);
Forest level_functor_object(const FinChain& alpha);
// Leaf injection F(α) -> F(β) for α = β∘δ: a leaf (i,x) goes to the leaf
// reached from (δ(i),x) in β by repeatedly taking the smallest preimage.
std::vector<std::uint32_t> level_witness(const LevelForest& source, const LevelForest& target,
                                         const setcat::Monotone& delta);
ForMorphism level_functor_morphism(const SimplexMap& delta);

// G_Φ in DOT: blocks joined along covering relations, one extra root vertex
// per tree, leaves labelled by their element.
std::string to_dot(const Forest& phi, const std::string& graph_name = "forest");

}  // namespace confstrata::forests
