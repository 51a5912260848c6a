#pragma once

// Finite sets, maps between them, and the category ΔFin of composable chains
// S_0 -> S_1 -> ... -> S_k together with its simplicial operators.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confstrata/label.hpp"

namespace confstrata::setcat {

using confstrata::to_string;

// Sorted list of distinct labels. Storage is shared and immutable, so copies
// are cheap.
class FiniteSet {
public:
    FiniteSet();
    // Throws InputError on duplicate labels.
    explicit FiniteSet(std::vector<Label> labels);

    // {1, ..., n}
    static FiniteSet range(int n);

    [[nodiscard]] std::size_t size() const { return elems_->size(); }
    [[nodiscard]] bool empty() const { return elems_->empty(); }
    [[nodiscard]] const Label& operator[](std::size_t i) const { return (*elems_)[i]; }
    [[nodiscard]] std::span<const Label> elements() const { return *elems_; }
    [[nodiscard]] std::optional<std::size_t> index_of(const Label& label) const;
    [[nodiscard]] bool contains(const Label& label) const { return index_of(label).has_value(); }

    friend bool operator==(const FiniteSet& a, const FiniteSet& b);

private:
    std::shared_ptr<const std::vector<Label>> elems_;
};

std::string to_string(const FiniteSet& set);

// Total map source -> target, stored as target indices of each source element.
class SetMap {
public:
    SetMap() = default;
    // image[i] is the index in `target` of the image of source[i].
    SetMap(FiniteSet source, FiniteSet target, std::vector<std::uint32_t> image);
    SetMap(FiniteSet source, FiniteSet target, const std::map<Label, Label>& assignment);

    static SetMap identity(const FiniteSet& set);
    // Inclusion of a subset; throws if `sub` is not contained in `whole`.
    static SetMap inclusion(const FiniteSet& sub, const FiniteSet& whole);

    [[nodiscard]] const FiniteSet& source() const { return source_; }
    [[nodiscard]] const FiniteSet& target() const { return target_; }
    [[nodiscard]] std::span<const std::uint32_t> image() const { return image_; }
    [[nodiscard]] std::uint32_t operator()(std::size_t source_index) const { return image_[source_index]; }
    [[nodiscard]] const Label& apply(const Label& label) const;

    [[nodiscard]] bool is_injective() const;
    [[nodiscard]] bool is_surjective() const;
    [[nodiscard]] bool is_identity() const;

    friend bool operator==(const SetMap& a, const SetMap& b);

private:
    FiniteSet source_;
    FiniteSet target_;
    std::vector<std::uint32_t> image_;
};

// g ∘ f. Throws InputError unless f.target() == g.source().
SetMap compose(const SetMap& g, const SetMap& f);

// An object of ΔFin. May hold inconsistent data (e.g. freshly parsed input);
// validate_chain reports what is wrong, and every operation below rejects
// invalid chains.
struct FinChain {
    std::vector<FiniteSet> sets;
    std::vector<SetMap> maps;

    // k: number of maps. Only meaningful for valid chains.
    [[nodiscard]] int level_count() const { return static_cast<int>(sets.size()) - 1; }

    static FinChain single(FiniteSet set);
    // Builds and validates; throws InputError on an invalid chain.
    static FinChain from_maps(std::vector<SetMap> maps);

    friend bool operator==(const FinChain& a, const FinChain& b);
};

struct ChainValidation {
    bool ok = true;
    std::vector<std::string> violations;
    explicit operator bool() const { return ok; }
};

ChainValidation validate_chain(const FinChain& chain);
void require_valid(const FinChain& chain);

// d_i. Outer faces drop S_0 or S_k, inner faces compose f_i ∘ f_{i-1}.
FinChain face(const FinChain& chain, int i);
// s_i: repeats S_i with an identity map.
FinChain degeneracy(const FinChain& chain, int i);

// Composite map S_from -> S_to (from <= to).
SetMap composite(const FinChain& chain, int from, int to);

// Weakly monotone map [k] -> [l], stored as values delta[0..k].
using Monotone = std::vector<int>;

bool is_monotone(const Monotone& delta, int target_level);
// Chain β∘δ: sets β_{δ(i)} with the composites between consecutive levels.
FinChain precompose(const FinChain& beta, const Monotone& delta);
// Coface d^i : [k-1] -> [k] skipping i, and codegeneracy s^i : [k+1] -> [k].
Monotone coface(int k, int i);
Monotone codegeneracy(int k, int i);
Monotone compose(const Monotone& outer, const Monotone& inner);

// Morphism α -> β of ΔFin: δ with α = β∘δ.
struct SimplexMap {
    Monotone delta;
    FinChain source;
    FinChain target;

    [[nodiscard]] bool delta_surjective() const;
    [[nodiscard]] bool delta_injective() const;
};

bool validate_simplex_map(const SimplexMap& map);
SimplexMap make_simplex_map(const FinChain& target, Monotone delta);
SimplexMap identity_map(const FinChain& chain);
// The morphism face(chain, i) -> chain.
SimplexMap face_map(const FinChain& chain, int i);
// The morphism degeneracy(chain, i) -> chain.
SimplexMap degeneracy_map(const FinChain& chain, int i);
// outer ∘ inner; throws InputError if they are not composable.
SimplexMap compose(const SimplexMap& outer, const SimplexMap& inner);

// Every chain with at most `max_level` maps whose sets are {1..s}, s <= max_size.
void for_each_chain(int max_level, int max_size, const std::function<void(const FinChain&)>& visit);
// All weakly monotone maps [k] -> [l].
std::vector<Monotone> monotone_maps(int k, int l);

struct SimplicialReport {
    std::int64_t chains = 0;
    std::int64_t checks = 0;
    std::int64_t failures = 0;
    std::vector<std::string> counterexamples;  // first few only
    [[nodiscard]] bool ok() const { return failures == 0; }
};

// Checks the five simplicial identities on faces/degeneracies of one chain.
void check_simplicial_identities(const FinChain& chain, SimplicialReport& report);
SimplicialReport check_simplicial_identities(int max_level, int max_size);

}  // namespace confstrata::setcat
