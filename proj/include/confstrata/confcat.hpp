#pragma once

// Symbolic strata of compactified configuration spaces, indexed by forests,
// and the contravariant functor con on ΔFin obtained from the level functor.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confstrata/forests.hpp"

namespace confstrata::confcat {

using forests::Forest;
using forests::ForMorphism;

struct Stratum {
    Forest forest;
    int codim = 0;  // number of non-singleton blocks

    friend bool operator==(const Stratum& a, const Stratum& b) { return a.codim == b.codim && a.forest == b.forest; }
};

int stratum_codim(const Forest& phi);
Stratum make_stratum(Forest phi);
// Stratum of Φ ∪ Ψ, or nothing when the union is not a forest. Throws
// InputError if the ground sets differ.
std::optional<Stratum> stratum_intersect(const Forest& phi, const Forest& psi);

enum class MapKind { identity, inclusion, forgetful, composite };
std::string to_string(MapKind kind);

// A map of strata stratum(Ψ on T) -> stratum(Φ on S). `witness` is the
// forest morphism Φ -> Ψ that induces it (maps go the other way).
struct StratumMap {
    MapKind kind = MapKind::identity;
    Stratum source;
    Stratum target;
    ForMorphism witness = ForMorphism::identity(Forest());
    // For composites: a forgetful map followed by an inclusion.
    std::vector<StratumMap> components;
};

// Source Ψ ⊇ target Φ on one ground set.
StratumMap inclusion_map(const Forest& psi, const Forest& phi);
// FM_Ψ(T) -> FM_{j^{-1}Ψ}(S), forgetting the points outside j(S).
StratumMap forgetful_map(const Forest& psi, const setcat::FiniteSet& source,
                         const std::vector<std::uint32_t>& leaf_map);
// Factors the stratum map induced by a forest morphism.
StratumMap stratum_map(const ForMorphism& morphism);

// Empty when the kind-specific invariants hold.
std::optional<std::string> stratum_map_violation(const StratumMap& map);

// g ∘ f, where f runs first. Throws InputError unless f.target == g.source.
StratumMap compose(const StratumMap& g, const StratumMap& f);
// Same strata and same class of inducing injections (equal pullbacks).
bool same_stratum_map(const StratumMap& a, const StratumMap& b);

Stratum con_object(const setcat::FinChain& alpha);
StratumMap con_morphism(const setcat::SimplexMap& delta);

struct StrataPoset {
    int n = 0;
    std::vector<Stratum> strata;  // canonical forest order; the first is the interior
    std::vector<std::pair<std::size_t, std::size_t>> covers;  // (Φ, Ψ) with Φ ⊂ Ψ, one block apart
};

// Strata of the compactification of Conf_n. n <= 5 unless uncapped (n <= 6).
StrataPoset strata_poset(int n, bool uncapped = false);
std::string strata_dot(const StrataPoset& poset, const std::string& graph_name = "strata");

struct FunctorReport {
    std::int64_t chains = 0;
    std::int64_t pairs = 0;
    std::int64_t quotient_failures = 0;  // F(δ∘δ') vs F(δ)∘F(δ') up to equal pullbacks
    std::int64_t poset_failures = 0;     // same comparison as poset maps (informational)
    std::int64_t identity_checks = 0;
    std::int64_t identity_failures = 0;  // surjective δ not sent to an identity
    std::vector<std::string> counterexamples;
    std::vector<std::string> poset_counterexamples;
    [[nodiscard]] bool ok() const { return quotient_failures == 0 && identity_failures == 0; }
};

// All composable pairs α' -δ'-> α -δ-> β with every chain of level <= max_level
// and sets {1..s}, s <= max_size.
FunctorReport check_level_functor(int max_level, int max_size, bool compare_poset_maps = true);
// The same pairs pushed through con and compared as stratum maps, using the
// public StratumMap composition. Slower; meant for smaller ranges.
FunctorReport check_con_functor(int max_level, int max_size);

}  // namespace confstrata::confcat
