#include "confstrata/wonderful.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "confstrata/errors.hpp"

namespace confstrata::wonderful {

using forests::bit;

Partition discrete_partition(int n) {
    Partition p;
    for (int i = 0; i < n; ++i) p.push_back(bit(static_cast<std::size_t>(i)));
    return p;
}

namespace {

void sort_partition(Partition& p) {
    std::sort(p.begin(), p.end(), [](Block a, Block b) { return std::countr_zero(a) < std::countr_zero(b); });
}

}  // namespace

Partition join_partitions(const Partition& a, const Partition& b) {
    std::vector<Block> blocks(a.begin(), a.end());
    // Merge every block of b into whatever it touches.
    for (Block piece : b) {
        Block merged = piece;
        std::vector<Block> kept;
        for (Block x : blocks) {
            if (x & merged) merged |= x;
            else kept.push_back(x);
        }
        kept.push_back(merged);
        blocks = std::move(kept);
    }
    sort_partition(blocks);
    return blocks;
}

bool refines(const Partition& finer, const Partition& coarser) {
    for (Block f : finer) {
        bool inside = std::any_of(coarser.begin(), coarser.end(), [&](Block c) { return (f & c) == f; });
        if (!inside) return false;
    }
    return true;
}

std::vector<Partition> all_partitions(int n) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            Partition p = cur;
            sort_partition(p);
            out.push_back(std::move(p));
            return;
        }
        for (std::size_t b = 0; b < cur.size(); ++b) {
            cur[b] |= bit(static_cast<std::size_t>(i));
            rec(i + 1);
            cur[b] &= ~bit(static_cast<std::size_t>(i));
        }
        cur.push_back(bit(static_cast<std::size_t>(i)));
        rec(i + 1);
        cur.pop_back();
    };
    rec(0);
    return out;
}

std::string partition_name(const Partition& p) {
    std::string out = "Δ";
    for (Block b : p) {
        if (std::popcount(b) < 2) continue;
        out += '{';
        bool first = true;
        for (int i = 0; i < 64; ++i) {
            if (!((b >> i) & 1U)) continue;
            if (!first) out += ',';
            first = false;
            out += std::to_string(i + 1);
        }
        out += '}';
    }
    return out;
}

ArrangementLattice::ArrangementLattice(std::string ambient, std::vector<Element> elements,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& order)
    : ambient_(std::move(ambient)), elements_(std::move(elements)) {
    const std::size_t m = elements_.size();
    if (m > 512) throw CapExceeded("general arrangement lattices are limited to 512 elements");
    {
        std::set<std::string> names;
        for (const auto& e : elements_) {
            if (e.codim < 0) throw InputError("element " + e.name + " has negative codimension");
            if (!names.insert(e.name).second) throw InputError("duplicate lattice element " + e.name);
        }
    }
    leq_.assign(m * m, 0);
    for (std::size_t i = 0; i < m; ++i) leq_[i * m + i] = 1;
    for (auto [a, b] : order) {
        if (a >= m || b >= m) throw InputError("order relation mentions an unknown element");
        leq_[a * m + b] = 1;
    }
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t a = 0; a < m; ++a) {
            if (!leq_[a * m + k]) continue;
            for (std::size_t b = 0; b < m; ++b) {
                if (leq_[k * m + b]) leq_[a * m + b] = 1;
            }
        }
    }
    finish_order();
}

void ArrangementLattice::finish_order() {
    const std::size_t m = elements_.size();
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b || !leq(a, b)) continue;
            if (leq(b, a)) throw InputError("order is not antisymmetric at " + elements_[a].name);
            if (elements_[a].codim >= elements_[b].codim) {
                throw InputError("codimension does not increase from " + elements_[a].name + " to " + elements_[b].name);
            }
        }
    }
    join_.assign(m * m, -1);
    if (is_diagonal()) {
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = a; b < m; ++b) {
                auto j = *index_of(join_partitions(partitions_[a], partitions_[b]));
                join_[a * m + b] = join_[b * m + a] = static_cast<std::int32_t>(j);
            }
        }
        return;
    }
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            std::vector<std::size_t> upper;
            for (std::size_t u = 0; u < m; ++u) {
                if (leq(a, u) && leq(b, u)) upper.push_back(u);
            }
            if (upper.empty()) continue;
            std::optional<std::size_t> least;
            for (auto u : upper) {
                if (std::all_of(upper.begin(), upper.end(), [&](std::size_t v) { return leq(u, v); })) least = u;
            }
            if (!least) {
                throw InputError(elements_[a].name + " and " + elements_[b].name + " have no least common upper bound");
            }
            join_[a * m + b] = join_[b * m + a] = static_cast<std::int32_t>(*least);
        }
    }
}

ArrangementLattice ArrangementLattice::diagonal(int n, int d) {
    if (n < 0 || n > 7) throw CapExceeded("diagonal lattices are limited to n <= 7");
    if (d < 1) throw InputError("dimension d must be positive");
    ArrangementLattice lat;
    lat.n_ = n;
    lat.d_ = d;
    lat.ambient_ = "X^" + std::to_string(n) + " (dim X = " + std::to_string(d) + ")";
    auto parts = all_partitions(n);
    parts.erase(std::remove_if(parts.begin(), parts.end(),
                               [&](const Partition& p) { return static_cast<int>(p.size()) == n; }),
                parts.end());
    std::vector<std::pair<int, std::vector<std::vector<int>>>> keyed;
    for (const auto& p : parts) {
        std::vector<std::vector<int>> key;
        for (Block b : p) {
            if (std::popcount(b) < 2) continue;
            std::vector<int> idx;
            for (int i = 0; i < n; ++i) {
                if ((b >> i) & 1U) idx.push_back(i);
            }
            key.push_back(std::move(idx));
        }
        keyed.emplace_back(d * (n - static_cast<int>(p.size())), std::move(key));
    }
    std::vector<std::size_t> perm(parts.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return keyed[a] < keyed[b]; });
    for (auto i : perm) {
        lat.partition_index_.emplace(parts[i], lat.partitions_.size());
        lat.elements_.push_back(Element{partition_name(parts[i]), keyed[i].first, keyed[i].second});
        lat.partitions_.push_back(parts[i]);
    }
    const std::size_t m = lat.elements_.size();
    lat.leq_.assign(m * m, 0);
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            lat.leq_[a * m + b] = refines(lat.partitions_[a], lat.partitions_[b]) ? 1 : 0;
        }
    }
    lat.finish_order();
    return lat;
}

std::optional<std::size_t> ArrangementLattice::join(std::size_t a, std::size_t b) const {
    const auto j = join_[a * size() + b];
    if (j < 0) return std::nullopt;
    return static_cast<std::size_t>(j);
}

std::optional<std::size_t> ArrangementLattice::find(const std::string& name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (elements_[i].name == name) return i;
    }
    return std::nullopt;
}

std::optional<std::size_t> ArrangementLattice::index_of(const Partition& p) const {
    Partition q = p;
    sort_partition(q);
    auto it = partition_index_.find(q);
    if (it == partition_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> ArrangementLattice::diagonal_index(Block u) const {
    if (!is_diagonal() || std::popcount(u) < 2) return std::nullopt;
    const Block all = n_ >= 64 ? ~Block{0} : bit(static_cast<std::size_t>(n_)) - 1;
    if ((u & ~all) != 0) return std::nullopt;
    Partition p{u};
    for (int i = 0; i < n_; ++i) {
        if (!((u >> i) & 1U)) p.push_back(bit(static_cast<std::size_t>(i)));
    }
    return index_of(p);
}

namespace {

void require_members(const ArrangementLattice& lattice, const std::vector<std::size_t>& members) {
    for (auto m : members) {
        if (m >= lattice.size()) throw InputError("building-set member is not a lattice element");
    }
}

}  // namespace

std::vector<std::size_t> intersection_closure(const ArrangementLattice& lattice, const std::vector<std::size_t>& members) {
    require_members(lattice, members);
    std::vector<char> in(lattice.size(), 0);
    std::vector<std::size_t> closure;
    for (auto m : members) {
        if (!in[m]) {
            in[m] = 1;
            closure.push_back(m);
        }
    }
    for (std::size_t i = 0; i < closure.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            auto joined = lattice.join(closure[i], closure[j]);
            if (joined && !in[*joined]) {
                in[*joined] = 1;
                closure.push_back(*joined);
            }
        }
    }
    std::sort(closure.begin(), closure.end());
    return closure;
}

BuildingCheck check_building_set(const ArrangementLattice& lattice, const std::vector<std::size_t>& members) {
    const auto closure = intersection_closure(lattice, members);
    BuildingCheck result;
    for (auto s : closure) {
        std::vector<std::size_t> below;
        for (auto m : members) {
            if (lattice.leq(m, s) && std::find(below.begin(), below.end(), m) == below.end()) below.push_back(m);
        }
        std::vector<std::size_t> minimal;  // minimal as subvarieties, i.e. maximal in the lattice
        for (auto m : below) {
            bool covered = std::any_of(below.begin(), below.end(), [&](std::size_t o) { return o != m && lattice.leq(m, o); });
            if (!covered) minimal.push_back(m);
        }
        int total = 0;
        std::optional<std::size_t> joined;
        for (auto m : minimal) {
            total += lattice.codim(m);
            joined = joined ? lattice.join(*joined, m) : std::optional<std::size_t>(m);
        }
        if (total != lattice.codim(s)) {
            result.ok = false;
            result.witness = s;
            result.reason = "minimal members over " + lattice.element(s).name + " have codimension sum " +
                            std::to_string(total) + ", expected " + std::to_string(lattice.codim(s));
            return result;
        }
        if (!joined || *joined != s) {
            result.ok = false;
            result.witness = s;
            result.reason = "minimal members over " + lattice.element(s).name + " do not intersect in it";
            return result;
        }
    }
    return result;
}

bool is_building_set(const ArrangementLattice& lattice, const std::vector<std::size_t>& members) {
    return check_building_set(lattice, members).ok;
}

BuildingSet::BuildingSet(std::shared_ptr<const ArrangementLattice> lattice, std::vector<std::size_t> members)
    : lattice_(std::move(lattice)), members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    auto check = check_building_set(*lattice_, members_);
    if (!check.ok) throw InputError("not a building set: " + check.reason);
}

BuildingSet BuildingSet::full_diagonal(int n, int d) {
    auto lattice = std::make_shared<const ArrangementLattice>(ArrangementLattice::diagonal(n, d));
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < lattice->size(); ++i) {
        int big = 0;
        for (Block b : lattice->partition(i)) big += std::popcount(b) > 1 ? 1 : 0;
        if (big == 1) members.push_back(i);
    }
    return BuildingSet(std::move(lattice), std::move(members));
}

bool BuildingSet::contains(std::size_t element) const {
    return std::binary_search(members_.begin(), members_.end(), element);
}

namespace {

// Does some antichain inside `chosen` that contains `e` have its join in the
// building set?
bool antichain_join_hits(const ArrangementLattice& lattice, const std::vector<char>& in_building,
                         const std::vector<std::size_t>& chosen, std::size_t e) {
    std::vector<std::size_t> candidates;
    for (auto c : chosen) {
        if (!lattice.comparable(c, e)) candidates.push_back(c);
    }
    std::vector<std::size_t> picked;
    std::function<bool(std::size_t, std::size_t)> rec = [&](std::size_t from, std::size_t acc) -> bool {
        for (std::size_t i = from; i < candidates.size(); ++i) {
            auto c = candidates[i];
            bool independent = std::none_of(picked.begin(), picked.end(), [&](std::size_t p) { return lattice.comparable(p, c); });
            if (!independent) continue;
            auto joined = lattice.join(acc, c);
            if (!joined) continue;  // no common point, and none for larger antichains either
            if (in_building[*joined]) return true;
            picked.push_back(c);
            if (rec(i + 1, *joined)) return true;
            picked.pop_back();
        }
        return false;
    };
    return rec(0, e);
}

}  // namespace

bool is_nest(const ArrangementLattice& lattice, const std::vector<std::size_t>& building_members,
             const std::vector<std::size_t>& subset) {
    require_members(lattice, building_members);
    std::vector<char> in_building(lattice.size(), 0);
    for (auto m : building_members) in_building[m] = 1;
    std::vector<std::size_t> chosen;
    for (auto s : subset) {
        if (s >= lattice.size() || !in_building[s]) throw InputError("nest candidate is not in the building set");
        if (std::find(chosen.begin(), chosen.end(), s) != chosen.end()) continue;
        if (antichain_join_hits(lattice, in_building, chosen, s)) return false;
        chosen.push_back(s);
    }
    return true;
}

bool is_nest(const BuildingSet& building, const std::vector<std::size_t>& subset) {
    return is_nest(building.lattice(), building.members(), subset);
}

std::vector<std::vector<std::size_t>> enumerate_nests(const BuildingSet& building) {
    const auto& lattice = building.lattice();
    const auto& members = building.members();
    std::vector<char> in_building(lattice.size(), 0);
    for (auto m : members) in_building[m] = 1;
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        out.push_back(chosen);
        for (std::size_t i = from; i < members.size(); ++i) {
            if (antichain_join_hits(lattice, in_building, chosen, members[i])) continue;
            chosen.push_back(members[i]);
            rec(i + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return out;
}

std::int64_t nest_count(int n, int d, bool uncapped) {
    if (n < 0 || n > (uncapped ? 7 : 6)) throw CapExceeded("nest_count is limited to n <= 6, got " + std::to_string(n));
    if (n < 2) return 1;
    return static_cast<std::int64_t>(enumerate_nests(BuildingSet::full_diagonal(n, d)).size());
}

namespace {

Block simple_diagonal_block(const ArrangementLattice& lattice, std::size_t element) {
    if (!lattice.is_diagonal()) throw InputError("divisor bookkeeping needs a diagonal lattice");
    Block found = 0;
    for (Block b : lattice.partition(element)) {
        if (std::popcount(b) < 2) continue;
        if (found) throw InputError(lattice.element(element).name + " is not a simple diagonal");
        found = b;
    }
    return found;
}

forests::Forest forest_of_blocks(int n, const std::vector<Block>& extra) {
    std::vector<Block> blocks = extra;
    for (int i = 0; i < n; ++i) blocks.push_back(bit(static_cast<std::size_t>(i)));
    return forests::Forest(setcat::FiniteSet::range(n), std::move(blocks));
}

}  // namespace

forests::Forest nest_to_forest(const BuildingSet& building, const std::vector<std::size_t>& nest) {
    std::vector<Block> blocks;
    for (auto e : nest) blocks.push_back(simple_diagonal_block(building.lattice(), e));
    return forest_of_blocks(building.lattice().n(), blocks);
}

LiValidation validate_li_order(const ArrangementLattice& lattice, const std::vector<std::size_t>& order) {
    LiValidation result;
    std::vector<std::size_t> prefix;
    for (std::size_t p = 0; p < order.size(); ++p) {
        if (std::find(prefix.begin(), prefix.end(), order[p]) != prefix.end()) {
            return LiValidation{false, p + 1, "order repeats " + lattice.element(order[p]).name};
        }
        prefix.push_back(order[p]);
        auto check = check_building_set(lattice, prefix);
        if (!check.ok) return LiValidation{false, p + 1, check.reason};
    }
    return result;
}

LiValidation validate_li_order(const BlowUpSchedule& schedule) {
    return validate_li_order(schedule.building.lattice(), schedule.order);
}

BlowUpSchedule make_schedule(const BuildingSet& building, std::vector<std::size_t> order) {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != building.members()) throw InputError("blow-up order must be a permutation of the building set");
    BlowUpSchedule schedule{building, std::move(order), {}};
    const auto& lattice = building.lattice();
    for (std::size_t p = 0; p < schedule.order.size(); ++p) {
        DivisorRecord rec;
        rec.member = schedule.order[p];
        rec.label = "E" + lattice.element(rec.member).name.substr(std::string("Δ").size());
        if (!lattice.is_diagonal()) rec.label = "E(" + lattice.element(rec.member).name + ")";
        rec.created = static_cast<int>(p) + 1;
        if (lattice.is_diagonal()) {
            int big = 0;
            Block u = 0;
            for (Block b : lattice.partition(rec.member)) {
                if (std::popcount(b) > 1) {
                    ++big;
                    u = b;
                }
            }
            if (big == 1) rec.forest = forest_of_blocks(lattice.n(), {u});
        }
        schedule.divisors.push_back(std::move(rec));
    }
    return schedule;
}

BlowUpSchedule default_order(const BuildingSet& building) {
    const auto& lattice = building.lattice();
    auto order = building.members();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ea = lattice.element(a);
        const auto& eb = lattice.element(b);
        if (ea.codim != eb.codim) return ea.codim > eb.codim;
        if (ea.key != eb.key) return ea.key < eb.key;
        return ea.name < eb.name;
    });
    return make_schedule(building, std::move(order));
}

std::vector<DivisorComponent> divisor_components(const BuildingSet& building) {
    std::vector<DivisorComponent> out;
    const auto& lattice = building.lattice();
    for (auto m : building.members()) {
        Block u = simple_diagonal_block(lattice, m);
        out.push_back(DivisorComponent{"D" + lattice.element(m).name.substr(std::string("Δ").size()),
                                       forest_of_blocks(lattice.n(), {u})});
    }
    return out;
}

std::vector<Center> forgetful_centers(const setcat::SetMap& i, int d) {
    if (!i.is_injective()) throw InputError("forgetful_centers needs an injective map");
    if (d < 1) throw InputError("dimension d must be positive");
    const std::size_t s = i.source().size();
    if (s > 20) throw CapExceeded("forgetful_centers is limited to |S| <= 20");
    std::vector<Center> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s); ++mask) {
        if (std::popcount(mask) < 2) continue;
        Center c;
        for (std::size_t k = 0; k < s; ++k) {
            if ((mask >> k) & 1U) c.subset.push_back(i.target()[i(k)]);
        }
        std::sort(c.subset.begin(), c.subset.end());
        c.codim = d * (static_cast<int>(c.subset.size()) - 1);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Center& a, const Center& b) {
        if (a.codim != b.codim) return a.codim > b.codim;
        return a.subset < b.subset;
    });
    return out;
}

std::string nest_poset_dot(const BuildingSet& building, const std::string& graph_name) {
    const auto nests = enumerate_nests(building);
    const auto& lattice = building.lattice();
    std::ostringstream out;
    out << "digraph \"" << graph_name << "\" {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < nests.size(); ++i) {
        std::string label = nests[i].empty() ? "∅" : "";
        for (std::size_t k = 0; k < nests[i].size(); ++k) {
            if (k) label += " ";
            label += lattice.element(nests[i][k]).name;
        }
        out << "  n" << i << " [label=\"" << label << "\"];\n";
    }
    for (std::size_t a = 0; a < nests.size(); ++a) {
        for (std::size_t b = 0; b < nests.size(); ++b) {
            if (nests[b].size() != nests[a].size() + 1) continue;
            if (std::includes(nests[b].begin(), nests[b].end(), nests[a].begin(), nests[a].end())) {
                out << "  n" << a << " -> n" << b << ";\n";
            }
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace confstrata::wonderful
