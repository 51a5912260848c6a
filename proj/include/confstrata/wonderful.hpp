#pragma once

// Arrangement lattices (in particular the polydiagonals of X^n), building
// sets, nests, blow-up orders and divisor bookkeeping.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "confstrata/forests.hpp"

namespace confstrata::wonderful {

using forests::Block;

// Set partition of {0..n-1}: all blocks, sorted by their lowest element.
using Partition = std::vector<Block>;

Partition discrete_partition(int n);
Partition join_partitions(const Partition& a, const Partition& b);
bool refines(const Partition& finer, const Partition& coarser);
std::vector<Partition> all_partitions(int n);

// Finite poset of subvarieties ordered by reverse inclusion: a <= b means
// a ⊇ b. Codimensions are complex. The join is the intersection.
class ArrangementLattice {
public:
    struct Element {
        std::string name;
        int codim = 0;
        // Tie-break key for orders; diagonal lattices use the point
        // indices of the non-singleton blocks.
        std::vector<std::vector<int>> key;
    };

    // `order` lists pairs (a, b) with a <= b; the transitive closure is taken.
    // Throws InputError unless the order is antisymmetric, codimension strictly
    // increases along it, and any two elements with a common upper bound have
    // a least one.
    ArrangementLattice(std::string ambient, std::vector<Element> elements,
                       const std::vector<std::pair<std::size_t, std::size_t>>& order);

    // Polydiagonals of X^n, X of dimension d: partitions with a non-singleton
    // block, codim d(n - #blocks). n <= 7.
    static ArrangementLattice diagonal(int n, int d);

    [[nodiscard]] const std::string& ambient() const { return ambient_; }
    [[nodiscard]] std::size_t size() const { return elements_.size(); }
    [[nodiscard]] const Element& element(std::size_t i) const { return elements_[i]; }
    [[nodiscard]] int codim(std::size_t i) const { return elements_[i].codim; }
    [[nodiscard]] bool leq(std::size_t a, std::size_t b) const { return leq_[a * size() + b] != 0; }
    [[nodiscard]] bool comparable(std::size_t a, std::size_t b) const { return leq(a, b) || leq(b, a); }
    [[nodiscard]] std::optional<std::size_t> join(std::size_t a, std::size_t b) const;
    [[nodiscard]] std::optional<std::size_t> find(const std::string& name) const;

    [[nodiscard]] bool is_diagonal() const { return n_ > 0; }
    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] int d() const { return d_; }
    // Diagonal lattices only.
    [[nodiscard]] const Partition& partition(std::size_t i) const { return partitions_.at(i); }
    [[nodiscard]] std::optional<std::size_t> index_of(const Partition& p) const;
    // Δ_U for a subset U (bitmask over 0..n-1) with |U| >= 2.
    [[nodiscard]] std::optional<std::size_t> diagonal_index(Block u) const;

private:
    ArrangementLattice() = default;
    void finish_order();

    std::string ambient_;
    std::vector<Element> elements_;
    std::vector<char> leq_;
    std::vector<std::int32_t> join_;
    int n_ = 0;
    int d_ = 0;
    std::vector<Partition> partitions_;
    std::map<Partition, std::size_t> partition_index_;
};

std::string partition_name(const Partition& p);

// Joins of every non-empty subfamily that have a join.
std::vector<std::size_t> intersection_closure(const ArrangementLattice& lattice, const std::vector<std::size_t>& members);

struct BuildingCheck {
    bool ok = true;
    std::optional<std::size_t> witness;  // closure element where the test fails
    std::string reason;
};

// Over every element S of the closure, the members containing S that are
// minimal for inclusion must have codimensions adding to codim(S) and join S.
BuildingCheck check_building_set(const ArrangementLattice& lattice, const std::vector<std::size_t>& members);
bool is_building_set(const ArrangementLattice& lattice, const std::vector<std::size_t>& members);

class BuildingSet {
public:
    // Throws InputError unless `members` is a building set of `lattice`.
    BuildingSet(std::shared_ptr<const ArrangementLattice> lattice, std::vector<std::size_t> members);
    // All Δ_U, |U| >= 2, in the diagonal lattice.
    static BuildingSet full_diagonal(int n, int d);

    [[nodiscard]] const ArrangementLattice& lattice() const { return *lattice_; }
    [[nodiscard]] const std::shared_ptr<const ArrangementLattice>& lattice_ptr() const { return lattice_; }
    [[nodiscard]] const std::vector<std::size_t>& members() const { return members_; }
    [[nodiscard]] bool contains(std::size_t element) const;

private:
    std::shared_ptr<const ArrangementLattice> lattice_;
    std::vector<std::size_t> members_;
};

// No antichain of two or more elements of `subset` has its join in the
// building set. Throws InputError if `subset` is not inside the building set.
bool is_nest(const ArrangementLattice& lattice, const std::vector<std::size_t>& building_members,
             const std::vector<std::size_t>& subset);
bool is_nest(const BuildingSet& building, const std::vector<std::size_t>& subset);
std::vector<std::vector<std::size_t>> enumerate_nests(const BuildingSet& building);
// Nests of the full diagonal building set, the empty nest included. n <= 6,
// or 7 when uncapped.
std::int64_t nest_count(int n, int d, bool uncapped = false);

// Forest of a nest in the full diagonal building set: the nest's subsets plus singletons.
forests::Forest nest_to_forest(const BuildingSet& building, const std::vector<std::size_t>& nest);

struct DivisorRecord {
    std::size_t member = 0;
    std::string label;
    int created = 0;  // position in the blow-up order
    std::optional<forests::Forest> forest;  // singletons ∪ {U} for Δ_U
};

struct BlowUpSchedule {
    BuildingSet building;
    std::vector<std::size_t> order;
    std::vector<DivisorRecord> divisors;
};

struct LiValidation {
    bool ok = true;
    std::size_t failing_prefix = 0;  // length of the first failing prefix
    std::string reason;
};

// Every prefix of `order` must be a building set.
LiValidation validate_li_order(const ArrangementLattice& lattice, const std::vector<std::size_t>& order);
LiValidation validate_li_order(const BlowUpSchedule& schedule);
// Schedule with the given order; throws InputError unless it permutes the members.
BlowUpSchedule make_schedule(const BuildingSet& building, std::vector<std::size_t> order);
// Decreasing codimension, ties by key then name.
BlowUpSchedule default_order(const BuildingSet& building);

struct DivisorComponent {
    std::string label;
    forests::Forest forest;
};

// One component per member Δ_U. Throws InputError for members that are not
// simple diagonals, or non-diagonal lattices.
std::vector<DivisorComponent> divisor_components(const BuildingSet& building);

struct Center {
    std::vector<Label> subset;  // i(U) in T
    int codim = 0;
};

// Δ_{i(U)} for U ⊆ S, |U| >= 2, in default order.
std::vector<Center> forgetful_centers(const setcat::SetMap& i, int d);

// Hasse diagram of nests under inclusion.
std::string nest_poset_dot(const BuildingSet& building, const std::string& graph_name = "nests");

}  // namespace confstrata::wonderful
