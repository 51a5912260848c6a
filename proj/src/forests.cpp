#include "confstrata/forests.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "confstrata/errors.hpp"

namespace confstrata::forests {

int block_size(Block b) { return std::popcount(b); }

bool block_less(Block a, Block b) {
    const int sa = std::popcount(a);
    const int sb = std::popcount(b);
    if (sa != sb) return sa < sb;
    if (a == b) return false;
    const Block diff = a ^ b;
    return (a & diff & (~diff + 1)) != 0;  // a owns the lowest differing element
}

namespace {

bool blocks_compatible(Block a, Block b) {
    const Block meet = a & b;
    return meet == 0 || meet == a || meet == b;
}

void canonicalize(std::vector<Block>& blocks) {
    std::sort(blocks.begin(), blocks.end(), block_less);
    blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
}

bool forest_less(const Forest& a, const Forest& b) {
    auto ba = a.blocks();
    auto bb = b.blocks();
    if (ba.size() != bb.size()) return ba.size() < bb.size();
    return std::lexicographical_compare(ba.begin(), ba.end(), bb.begin(), bb.end(), block_less);
}

Block low_mask(std::size_t n) { return n >= 64 ? ~Block{0} : (bit(n) - 1); }

std::string labels_string(const std::vector<Label>& labels) {
    std::string out = "{";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ',';
        out += to_string(labels[i]);
    }
    return out + "}";
}

}  // namespace

bool is_forest(std::size_t n, std::span<const Block> blocks) {
    if (n > kMaxGround) return false;
    const Block universe = low_mask(n);
    Block singletons = 0;
    for (Block b : blocks) {
        if (b == 0 || (b & ~universe) != 0) return false;
        if (std::popcount(b) == 1) singletons |= b;
    }
    if (singletons != universe) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if (!blocks_compatible(blocks[i], blocks[j])) return false;
        }
    }
    return true;
}

namespace {

Block mask_of(const FiniteSet& ground, const std::vector<Label>& labels) {
    Block mask = 0;
    for (const auto& label : labels) {
        auto idx = ground.index_of(label);
        if (!idx) throw InputError("block element " + to_string(label) + " is not in the ground set " + to_string(ground));
        mask |= bit(*idx);
    }
    return mask;
}

}  // namespace

bool is_forest(const FiniteSet& ground, const std::vector<std::vector<Label>>& blocks) {
    if (ground.size() > kMaxGround) throw CapExceeded("ground sets are limited to 64 points");
    std::vector<Block> masks;
    masks.reserve(blocks.size());
    for (const auto& b : blocks) masks.push_back(mask_of(ground, b));
    return is_forest(ground.size(), masks);
}

Forest::Forest(FiniteSet ground, std::vector<Block> blocks) : ground_(std::move(ground)), blocks_(std::move(blocks)) {
    if (ground_.size() > kMaxGround) throw CapExceeded("ground sets are limited to 64 points");
    canonicalize(blocks_);
    if (!is_forest(ground_.size(), blocks_)) {
        throw InputError("family is not a forest on " + to_string(ground_));
    }
}

Forest::Forest(Trusted, FiniteSet ground, std::vector<Block> blocks)
    : ground_(std::move(ground)), blocks_(std::move(blocks)) {
    canonicalize(blocks_);
}

Forest detail_trusted_forest(FiniteSet ground, std::vector<Block> blocks) {
    return Forest(Forest::Trusted{}, std::move(ground), std::move(blocks));
}

Forest Forest::from_labels(FiniteSet ground, const std::vector<std::vector<Label>>& blocks) {
    if (ground.size() > kMaxGround) throw CapExceeded("ground sets are limited to 64 points");
    std::vector<Block> masks;
    masks.reserve(blocks.size());
    for (const auto& b : blocks) masks.push_back(mask_of(ground, b));
    return Forest(std::move(ground), std::move(masks));
}

Forest Forest::minimal(FiniteSet ground) {
    if (ground.size() > kMaxGround) throw CapExceeded("ground sets are limited to 64 points");
    std::vector<Block> masks;
    for (std::size_t i = 0; i < ground.size(); ++i) masks.push_back(bit(i));
    return Forest(Trusted{}, std::move(ground), std::move(masks));
}

Block Forest::full() const { return low_mask(ground_.size()); }

std::optional<std::size_t> Forest::index_of(Block b) const {
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), b, block_less);
    if (it == blocks_.end() || *it != b) return std::nullopt;
    return static_cast<std::size_t>(it - blocks_.begin());
}

std::vector<Label> Forest::labels(Block b) const {
    std::vector<Label> out;
    for (std::size_t i = 0; i < ground_.size(); ++i) {
        if ((b >> i) & 1U) out.push_back(ground_[i]);
    }
    return out;
}

int Forest::non_singleton_count() const {
    return static_cast<int>(std::count_if(blocks_.begin(), blocks_.end(), [](Block b) { return std::popcount(b) > 1; }));
}

std::optional<std::size_t> Forest::least_block_containing(Block b) const {
    // Blocks are sorted by size, so the first superset is the least one.
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if ((blocks_[i] & b) == b) return i;
    }
    return std::nullopt;
}

bool Forest::is_subfamily_of(const Forest& other) const {
    if (!(ground_ == other.ground_)) return false;
    return std::all_of(blocks_.begin(), blocks_.end(), [&](Block b) { return other.contains(b); });
}

bool operator==(const Forest& a, const Forest& b) { return a.blocks_ == b.blocks_ && a.ground_ == b.ground_; }

std::string to_string(const Forest& forest) {
    std::string out = "{";
    bool first = true;
    for (Block b : forest.blocks()) {
        if (!first) out += ',';
        first = false;
        out += labels_string(forest.labels(b));
    }
    return out + "}";
}

std::optional<Forest> union_if_forest(const Forest& phi, const Forest& psi) {
    if (!(phi.ground() == psi.ground())) throw InputError("forests live on different ground sets");
    std::vector<Block> blocks(phi.blocks().begin(), phi.blocks().end());
    blocks.insert(blocks.end(), psi.blocks().begin(), psi.blocks().end());
    canonicalize(blocks);
    if (!is_forest(phi.ground().size(), blocks)) return std::nullopt;
    return detail_trusted_forest(phi.ground(), std::move(blocks));
}

Forest pullback(const FiniteSet& source, std::span<const std::uint32_t> leaf_map, const Forest& psi) {
    std::vector<Block> out;
    out.reserve(psi.size());
    for (Block u : psi.blocks()) {
        Block pre = 0;
        for (std::size_t s = 0; s < leaf_map.size(); ++s) {
            if ((u >> leaf_map[s]) & 1U) pre |= bit(s);
        }
        if (pre != 0) out.push_back(pre);
    }
    canonicalize(out);
    return detail_trusted_forest(source, std::move(out));
}

Forest pullback(const SetMap& j, const Forest& psi) {
    if (!(j.target() == psi.ground())) throw InputError("injection target differs from the forest's ground set");
    if (!j.is_injective()) throw InputError("pullback needs an injective map");
    return pullback(j.source(), j.image(), psi);
}

std::vector<Tree> trees_of(const Forest& phi) {
    std::vector<Tree> out;
    auto blocks = phi.blocks();
    for (Block root : blocks) {
        bool maximal = std::none_of(blocks.begin(), blocks.end(), [&](Block b) { return b != root && (b & root) == root; });
        if (!maximal) continue;
        std::vector<Label> root_labels = phi.labels(root);
        FiniteSet ground(root_labels);
        // Re-index: the k-th element of `root` becomes point k.
        std::vector<int> remap(phi.ground().size(), -1);
        int next = 0;
        for (std::size_t i = 0; i < phi.ground().size(); ++i) {
            if ((root >> i) & 1U) remap[i] = next++;
        }
        std::vector<Block> sub;
        for (Block b : blocks) {
            if ((b & root) != b) continue;
            Block m = 0;
            for (std::size_t i = 0; i < phi.ground().size(); ++i) {
                if ((b >> i) & 1U) m |= bit(static_cast<std::size_t>(remap[i]));
            }
            sub.push_back(m);
        }
        out.push_back(Tree{std::move(root_labels), detail_trusted_forest(std::move(ground), std::move(sub))});
    }
    return out;
}

ForestPoset::ForestPoset(std::vector<Label> names, const std::vector<std::pair<std::size_t, std::size_t>>& order)
    : names_(std::move(names)), up_(names_.size(), 0) {
    const std::size_t n = names_.size();
    if (n > 64) throw CapExceeded("posets are limited to 64 vertices");
    for (std::size_t v = 0; v < n; ++v) up_[v] = bit(v);
    for (auto [a, b] : order) {
        if (a >= n || b >= n) throw InputError("order relation mentions an unknown vertex");
        up_[a] |= bit(b);
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t v = 0; v < n; ++v) {
            if ((up_[v] >> k) & 1U) up_[v] |= up_[k];
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (leq(a, b) && leq(b, a)) throw InputError("order relation is not antisymmetric");
        }
    }
}

std::uint64_t ForestPoset::down_set(std::size_t v) const {
    std::uint64_t d = 0;
    for (std::size_t w = 0; w < size(); ++w) {
        if (leq(w, v)) d |= bit(w);
    }
    return d;
}

std::uint64_t ForestPoset::maximal() const {
    std::uint64_t m = 0;
    for (std::size_t v = 0; v < size(); ++v) {
        if (up_[v] == bit(v)) m |= bit(v);
    }
    return m;
}

std::vector<std::string> ForestPoset::forest_violations() const {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < size(); ++v) {
        const auto d = down_set(v);
        for (std::size_t a = 0; a < size(); ++a) {
            if (!((d >> a) & 1U)) continue;
            for (std::size_t b = a + 1; b < size(); ++b) {
                if (((d >> b) & 1U) && !leq(a, b) && !leq(b, a)) {
                    out.push_back("down-set of " + to_string(names_[v]) + " contains incomparable " +
                                  to_string(names_[a]) + " and " + to_string(names_[b]));
                }
            }
        }
    }
    const auto top = maximal();
    std::map<std::uint64_t, std::size_t> seen;
    for (std::size_t v = 0; v < size(); ++v) {
        auto [it, fresh] = seen.emplace(up_[v] & top, v);
        if (!fresh) {
            out.push_back(to_string(names_[it->second]) + " and " + to_string(names_[v]) +
                          " lie below the same maximal elements");
        }
    }
    return out;
}

ForestPoset to_poset(const Forest& phi) {
    std::vector<Label> names;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    auto blocks = phi.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        auto labels = phi.labels(blocks[i]);
        names.push_back(labels.size() == 1 ? labels.front() : Label{labels_string(labels)});
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            if (i != j && (blocks[i] & blocks[j]) == blocks[j]) order.emplace_back(i, j);
        }
    }
    return ForestPoset(std::move(names), order);
}

Forest from_poset(const ForestPoset& poset) {
    auto violations = poset.forest_violations();
    if (!violations.empty()) throw InputError("not a forest poset: " + violations.front());
    const auto top = poset.maximal();
    std::vector<Label> ground_labels;
    std::vector<std::size_t> top_vertices;
    for (std::size_t v = 0; v < poset.size(); ++v) {
        if ((top >> v) & 1U) {
            ground_labels.push_back(poset.names()[v]);
            top_vertices.push_back(v);
        }
    }
    FiniteSet ground(ground_labels);
    std::vector<std::size_t> ground_index(poset.size(), 0);
    for (auto v : top_vertices) ground_index[v] = *ground.index_of(poset.names()[v]);
    std::vector<Block> blocks;
    for (std::size_t v = 0; v < poset.size(); ++v) {
        Block b = 0;
        for (auto t : top_vertices) {
            if (poset.leq(v, t)) b |= bit(ground_index[t]);
        }
        blocks.push_back(b);
    }
    return Forest(std::move(ground), std::move(blocks));
}

std::vector<Forest> enumerate_forests_by_filtering(int n) {
    if (n < 0 || n > 4) throw CapExceeded("direct filtering is limited to n <= 4");
    const FiniteSet ground = FiniteSet::range(n);
    std::vector<Block> candidates;
    for (Block b = 1; b <= low_mask(static_cast<std::size_t>(n)); ++b) {
        if (std::popcount(b) >= 2) candidates.push_back(b);
    }
    std::vector<Forest> out;
    const std::uint64_t families = std::uint64_t{1} << candidates.size();
    for (std::uint64_t fam = 0; fam < families; ++fam) {
        std::vector<Block> blocks;
        for (int i = 0; i < n; ++i) blocks.push_back(bit(static_cast<std::size_t>(i)));
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if ((fam >> c) & 1U) blocks.push_back(candidates[c]);
        }
        if (is_forest(static_cast<std::size_t>(n), blocks)) out.emplace_back(ground, std::move(blocks));
    }
    std::sort(out.begin(), out.end(), forest_less);
    return out;
}

std::vector<Forest> enumerate_forests_recursive(int n, bool uncapped) {
    if (n < 0 || n > (uncapped ? 7 : 6)) throw CapExceeded("forest enumeration is limited to n <= 6");
    using Family = std::vector<Block>;
    std::map<Block, std::vector<Family>> tree_memo;
    std::map<Block, std::vector<Family>> multi_memo;

    std::function<const std::vector<Family>&(Block)> trees;
    std::function<const std::vector<Family>&(Block)> multi_root;

    // Products over set partitions of `mask` with at least `min_parts` parts.
    auto over_partitions = [&](Block mask, int min_parts) {
        std::vector<Family> out;
        std::function<void(Block, int, Family&)> rec = [&](Block rest, int parts, Family& acc) {
            if (rest == 0) {
                if (parts >= min_parts) out.push_back(acc);
                return;
            }
            const Block low = rest & (~rest + 1);
            const Block others = rest & ~low;
            // Every subset of `others`, joined with the lowest element, is the next part.
            for (Block sub = others;; sub = (sub - 1) & others) {
                const Block part = sub | low;
                if (!(parts == 0 && part == mask && min_parts >= 2)) {
                    for (const auto& t : trees(part)) {
                        const std::size_t keep = acc.size();
                        acc.insert(acc.end(), t.begin(), t.end());
                        rec(rest & ~part, parts + 1, acc);
                        acc.resize(keep);
                    }
                }
                if (sub == 0) break;
            }
        };
        Family acc;
        rec(mask, 0, acc);
        return out;
    };

    multi_root = [&](Block mask) -> const std::vector<Family>& {
        auto it = multi_memo.find(mask);
        if (it != multi_memo.end()) return it->second;
        auto fams = over_partitions(mask, 2);
        return multi_memo.emplace(mask, std::move(fams)).first->second;
    };

    trees = [&](Block mask) -> const std::vector<Family>& {
        auto it = tree_memo.find(mask);
        if (it != tree_memo.end()) return it->second;
        std::vector<Family> fams;
        if (std::popcount(mask) == 1) {
            fams.push_back({mask});
        } else {
            for (auto f : multi_root(mask)) {
                f.push_back(mask);
                fams.push_back(std::move(f));
            }
        }
        return tree_memo.emplace(mask, std::move(fams)).first->second;
    };

    const FiniteSet ground = FiniteSet::range(n);
    std::vector<Forest> out;
    if (n == 0) {
        out.push_back(Forest::minimal(ground));
        return out;
    }
    const Block all = low_mask(static_cast<std::size_t>(n));
    for (auto f : over_partitions(all, 1)) out.emplace_back(ground, std::move(f));
    std::sort(out.begin(), out.end(), forest_less);
    return out;
}

std::vector<Forest> enumerate_forests(int n, bool uncapped) {
    if (n < 0 || n > (uncapped ? 7 : 6)) {
        throw CapExceeded("forest enumeration is limited to n <= 6, got " + std::to_string(n));
    }
    return n <= 4 ? enumerate_forests_by_filtering(n) : enumerate_forests_recursive(n, uncapped);
}

// ---------------------------------------------------------------------------
// Morphisms

ForMorphism::ForMorphism(Forest source, Forest target, std::vector<std::uint32_t> leaf_map,
                         std::vector<std::uint32_t> block_map)
    : source_(std::move(source)),
      target_(std::move(target)),
      leaf_map_(std::move(leaf_map)),
      block_map_(std::move(block_map)) {}

ForMorphism ForMorphism::from_injection(Forest source, Forest target, std::vector<std::uint32_t> leaf_map) {
    if (leaf_map.size() != source.ground().size()) throw InputError("leaf map must cover the source ground set");
    Block used = 0;
    for (auto t : leaf_map) {
        if (t >= target.ground().size()) throw InputError("leaf map leaves the target ground set");
        if ((used >> t) & 1U) throw InputError("leaf map is not injective");
        used |= bit(t);
    }
    std::vector<std::uint32_t> block_map;
    block_map.reserve(source.size());
    for (Block a : source.blocks()) {
        Block image = 0;
        for (std::size_t s = 0; s < leaf_map.size(); ++s) {
            if ((a >> s) & 1U) image |= bit(leaf_map[s]);
        }
        auto least = target.least_block_containing(image);
        if (!least) throw InputError("no target block contains the image of a source block");
        const Block u = target.blocks()[*least];
        Block pre = 0;
        for (std::size_t s = 0; s < leaf_map.size(); ++s) {
            if ((u >> leaf_map[s]) & 1U) pre |= bit(s);
        }
        if (pre != a) throw InputError("source forest is not contained in the pullback of the target");
        block_map.push_back(static_cast<std::uint32_t>(*least));
    }
    return ForMorphism(std::move(source), std::move(target), std::move(leaf_map), std::move(block_map));
}

ForMorphism ForMorphism::from_injection(Forest source, Forest target, const SetMap& j) {
    if (!(j.source() == source.ground()) || !(j.target() == target.ground())) {
        throw InputError("injection does not match the forests' ground sets");
    }
    return from_injection(std::move(source), std::move(target), std::vector<std::uint32_t>(j.image().begin(), j.image().end()));
}

std::optional<std::string> poset_map_violation(const Forest& source, const Forest& target,
                                               std::span<const std::uint32_t> block_map) {
    auto sb = source.blocks();
    auto tb = target.blocks();
    if (block_map.size() != sb.size()) return "block map must cover every source block";
    for (auto v : block_map) {
        if (v >= tb.size()) return "block map leaves the target forest";
    }
    for (std::size_t a = 0; a < sb.size(); ++a) {
        for (std::size_t b = a + 1; b < sb.size(); ++b) {
            const Block fa = tb[block_map[a]];
            const Block fb = tb[block_map[b]];
            if (block_map[a] == block_map[b]) return "block map is not injective";
            const Block meet = sb[a] & sb[b];
            if (meet == 0) {
                if ((fa & fb) != 0) return "block map sends independent blocks to comparable ones";
            } else if (meet == sb[b]) {  // b ⊂ a
                if ((fa & fb) != fb) return "block map does not preserve the order";
            } else if ((fa & fb) != fa) {  // a ⊂ b
                return "block map does not preserve the order";
            }
        }
    }
    return std::nullopt;
}

ForMorphism ForMorphism::from_block_map(Forest source, Forest target, std::vector<std::uint32_t> block_map) {
    if (auto why = poset_map_violation(source, target, block_map)) throw InputError(*why);
    std::vector<std::uint32_t> leaf_map(source.ground().size());
    for (std::size_t s = 0; s < leaf_map.size(); ++s) {
        const auto idx = *source.index_of(bit(s));
        const Block image = target.blocks()[block_map[idx]];
        leaf_map[s] = static_cast<std::uint32_t>(std::countr_zero(image));
    }
    return ForMorphism(std::move(source), std::move(target), std::move(leaf_map), std::move(block_map));
}

ForMorphism ForMorphism::identity(const Forest& forest) {
    std::vector<std::uint32_t> leaves(forest.ground().size());
    for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i] = static_cast<std::uint32_t>(i);
    std::vector<std::uint32_t> blocks(forest.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = static_cast<std::uint32_t>(i);
    return ForMorphism(forest, forest, std::move(leaves), std::move(blocks));
}

bool ForMorphism::is_identity() const {
    if (!(source_ == target_)) return false;
    for (std::size_t i = 0; i < block_map_.size(); ++i) {
        if (block_map_[i] != i) return false;
    }
    return true;
}

Forest ForMorphism::pulled_back() const { return pullback(source_.ground(), leaf_map_, target_); }

bool same_poset_map(const ForMorphism& a, const ForMorphism& b) {
    return a.source() == b.source() && a.target() == b.target() &&
           std::equal(a.block_map().begin(), a.block_map().end(), b.block_map().begin(), b.block_map().end());
}

bool same_quotient_class(const ForMorphism& a, const ForMorphism& b) {
    return a.source() == b.source() && a.target() == b.target() && a.pulled_back() == b.pulled_back();
}

ForMorphism compose(const ForMorphism& g, const ForMorphism& f) {
    if (!(f.target() == g.source())) throw InputError("forest morphisms are not composable");
    std::vector<std::uint32_t> leaves(f.leaf_map().size());
    for (std::size_t s = 0; s < leaves.size(); ++s) leaves[s] = g.leaf_map()[f.leaf_map()[s]];
    return ForMorphism::from_injection(f.source(), g.target(), std::move(leaves));
}

ForMorphism compose_poset_maps(const ForMorphism& g, const ForMorphism& f) {
    if (!(f.target() == g.source())) throw InputError("forest morphisms are not composable");
    std::vector<std::uint32_t> blocks(f.block_map().size());
    for (std::size_t a = 0; a < blocks.size(); ++a) blocks[a] = g.block_map()[f.block_map()[a]];
    return ForMorphism::from_block_map(f.source(), g.target(), std::move(blocks));
}

std::vector<ForMorphism> poset_morphisms(const Forest& phi, const Forest& psi) {
    std::vector<ForMorphism> out;
    auto sb = phi.blocks();
    auto tb = psi.blocks();
    std::vector<std::uint32_t> assign(sb.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t a) {
        if (a == sb.size()) {
            out.push_back(ForMorphism::from_block_map(phi, psi, assign));
            return;
        }
        for (std::uint32_t t = 0; t < tb.size(); ++t) {
            bool ok = true;
            for (std::size_t b = 0; b < a && ok; ++b) {
                const Block fa = tb[t];
                const Block fb = tb[assign[b]];
                if (assign[b] == t) ok = false;
                const Block meet = sb[a] & sb[b];
                if (meet == 0) ok = ok && (fa & fb) == 0;
                else if (meet == sb[b]) ok = ok && (fa & fb) == fb;
                else ok = ok && (fa & fb) == fa;
            }
            if (!ok) continue;
            assign[a] = t;
            rec(a + 1);
        }
    };
    rec(0);
    return out;
}

HomCount hom_count(const Forest& phi, const Forest& psi) {
    const std::size_t s = phi.ground().size();
    const std::size_t t = psi.ground().size();
    if (s > 5 || t > 5) throw CapExceeded("hom_count is limited to ground sets of size <= 5");
    HomCount count;
    count.poset_maps = static_cast<std::int64_t>(poset_morphisms(phi, psi).size());
    std::set<std::vector<Block>> classes;
    std::vector<std::uint32_t> leaf(s, 0);
    std::function<void(std::size_t, Block)> rec = [&](std::size_t i, Block used) {
        if (i == s) {
            try {
                auto m = ForMorphism::from_injection(phi, psi, leaf);
                ++count.injections;
                const auto pb = m.pulled_back();
                classes.emplace(pb.blocks().begin(), pb.blocks().end());
            } catch (const InputError&) {
            }
            return;
        }
        for (std::uint32_t v = 0; v < t; ++v) {
            if ((used >> v) & 1U) continue;
            leaf[i] = v;
            rec(i + 1, used | bit(v));
        }
    };
    rec(0, 0);
    count.quotient_classes = static_cast<std::int64_t>(classes.size());
    return count;
}

// ---------------------------------------------------------------------------
// Level functor

LevelForest level_forest(const FinChain& alpha) {
    setcat::require_valid(alpha);
    const int k = alpha.level_count();
    LevelForest out;
    out.first_preimage.resize(static_cast<std::size_t>(k + 1));
    out.leaf_index.resize(static_cast<std::size_t>(k + 1));
    out.block_of.resize(static_cast<std::size_t>(k + 1));

    // Leaves are elements with no preimage; collect them with their labels.
    struct LeafRecord {
        Label label;
        int level;
        std::uint32_t element;
    };
    std::vector<LeafRecord> leaves;
    int identities_below = 0;
    for (int i = 0; i <= k; ++i) {
        const std::size_t size = alpha.sets[i].size();
        auto& pre = out.first_preimage[i];
        pre.assign(size, -1);
        if (i > 0) {
            auto image = alpha.maps[i - 1].image();
            for (std::size_t x = image.size(); x-- > 0;) pre[image[x]] = static_cast<std::int32_t>(x);
            if (alpha.maps[i - 1].is_identity()) ++identities_below;
        }
        for (std::size_t x = 0; x < size; ++x) {
            if (pre[x] >= 0) continue;
            Label label = alpha.sets[i][x];
            if (i > 0) label = to_string(label) + "@" + std::to_string(i - identities_below);
            leaves.push_back({std::move(label), i, static_cast<std::uint32_t>(x)});
        }
    }
    if (leaves.size() > kMaxGround) throw CapExceeded("level forest has more than 64 leaves");
    std::vector<Label> labels;
    labels.reserve(leaves.size());
    for (const auto& leaf : leaves) labels.push_back(leaf.label);
    FiniteSet ground(std::move(labels));
    for (int i = 0; i <= k; ++i) out.leaf_index[i].assign(alpha.sets[i].size(), -1);
    for (const auto& leaf : leaves) {
        out.leaf_index[leaf.level][leaf.element] = static_cast<std::int32_t>(*ground.index_of(leaf.label));
    }

    // Leaves above each element; equal leaf sets are exactly the identified classes.
    std::vector<std::vector<Block>> above(static_cast<std::size_t>(k + 1));
    std::vector<Block> blocks;
    for (int i = 0; i <= k; ++i) {
        above[i].assign(alpha.sets[i].size(), 0);
        if (i > 0) {
            auto image = alpha.maps[i - 1].image();
            for (std::size_t x = 0; x < image.size(); ++x) above[i][image[x]] |= above[i - 1][x];
        }
        for (std::size_t x = 0; x < alpha.sets[i].size(); ++x) {
            if (out.leaf_index[i][x] >= 0) above[i][x] |= bit(static_cast<std::size_t>(out.leaf_index[i][x]));
            blocks.push_back(above[i][x]);
        }
    }
    out.forest = detail_trusted_forest(ground, std::move(blocks));
    for (int i = 0; i <= k; ++i) {
        out.block_of[i].resize(alpha.sets[i].size());
        for (std::size_t x = 0; x < alpha.sets[i].size(); ++x) {
            out.block_of[i][x] = static_cast<std::uint32_t>(*out.forest.index_of(above[i][x]));
        }
    }
    return out;
}

Forest level_functor_object(const FinChain& alpha) { return level_forest(alpha).forest; }

std::vector<std::uint32_t> level_witness(const LevelForest& source, const LevelForest& target,
                                         const setcat::Monotone& delta) {
    std::vector<std::uint32_t> leaf_map(source.forest.ground().size(), 0);
    for (std::size_t i = 0; i < source.leaf_index.size(); ++i) {
        const auto& row = source.leaf_index[i];
        for (std::size_t x = 0; x < row.size(); ++x) {
            if (row[x] < 0) continue;
            int level = delta[i];
            auto e = static_cast<std::int32_t>(x);
            while (target.first_preimage[level][e] >= 0) {
                e = target.first_preimage[level][e];
                --level;
            }
            leaf_map[static_cast<std::size_t>(row[x])] = static_cast<std::uint32_t>(target.leaf_index[level][e]);
        }
    }
    return leaf_map;
}

ForMorphism level_functor_morphism(const SimplexMap& delta) {
    if (!setcat::validate_simplex_map(delta)) throw InputError("invalid simplex map");
    LevelForest src = level_forest(delta.source);
    LevelForest tgt = level_forest(delta.target);
    auto leaves = level_witness(src, tgt, delta.delta);
    return ForMorphism::from_injection(src.forest, tgt.forest, std::move(leaves));
}

// ---------------------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const Forest& phi, const std::string& graph_name) {
    std::ostringstream out;
    out << "graph \"" << dot_escape(graph_name) << "\" {\n";
    out << "  node [shape=circle, label=\"\", width=0.15];\n";
    auto blocks = phi.blocks();
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (std::popcount(blocks[i]) == 1) {
            out << "  b" << i << " [shape=plaintext, width=0, label=\""
                << dot_escape(to_string(phi.labels(blocks[i]).front())) << "\"];\n";
        } else {
            std::string members;
            for (const auto& l : phi.labels(blocks[i])) members += (members.empty() ? "" : ",") + to_string(l);
            out << "  b" << i << " [tooltip=\"{" << dot_escape(members) << "}\"];\n";
        }
    }
    int root_id = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        // covering relations: i ⊂ j with nothing in between
        std::optional<std::size_t> parent;
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            if (j == i || (blocks[j] & blocks[i]) != blocks[i]) continue;
            if (!parent || block_less(blocks[j], blocks[*parent])) parent = j;
        }
        if (parent) {
            out << "  b" << *parent << " -- b" << i << ";\n";
        } else {
            out << "  r" << root_id << " [shape=point];\n";
            out << "  r" << root_id << " -- b" << i << ";\n";
            ++root_id;
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace confstrata::forests
