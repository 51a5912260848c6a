#include "confstrata/setcat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "confstrata/errors.hpp"

namespace confstrata::setcat {

namespace {

const std::shared_ptr<const std::vector<Label>>& empty_storage() {
    static const auto empty = std::make_shared<const std::vector<Label>>();
    return empty;
}

}  // namespace

FiniteSet::FiniteSet() : elems_(empty_storage()) {}

FiniteSet::FiniteSet(std::vector<Label> labels) {
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
        throw InputError("finite set has duplicate labels");
    }
    elems_ = std::make_shared<const std::vector<Label>>(std::move(labels));
}

FiniteSet FiniteSet::range(int n) {
    std::vector<Label> labels;
    labels.reserve(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 1; i <= n; ++i) {
        labels.emplace_back(std::int64_t{i});
    }
    return FiniteSet(std::move(labels));
}

std::optional<std::size_t> FiniteSet::index_of(const Label& label) const {
    auto it = std::lower_bound(elems_->begin(), elems_->end(), label);
    if (it == elems_->end() || *it != label) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - elems_->begin());
}

bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.elems_ == b.elems_ || *a.elems_ == *b.elems_;
}

std::string to_string(const FiniteSet& set) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out << ',';
        out << to_string(set[i]);
    }
    out << '}';
    return out.str();
}

SetMap::SetMap(FiniteSet source, FiniteSet target, std::vector<std::uint32_t> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
    if (image_.size() != source_.size()) {
        throw InputError("map assignment must cover exactly the source set");
    }
    for (auto v : image_) {
        if (v >= target_.size()) {
            throw InputError("map image lies outside the target set");
        }
    }
}

SetMap::SetMap(FiniteSet source, FiniteSet target, const std::map<Label, Label>& assignment)
    : source_(std::move(source)), target_(std::move(target)) {
    if (assignment.size() != source_.size()) {
        throw InputError("map assignment must cover exactly the source set");
    }
    image_.resize(source_.size());
    for (const auto& [from, to] : assignment) {
        auto s = source_.index_of(from);
        auto t = target_.index_of(to);
        if (!s) throw InputError("assignment key " + to_string(from) + " is not in the source");
        if (!t) throw InputError("assignment value " + to_string(to) + " is not in the target");
        image_[*s] = static_cast<std::uint32_t>(*t);
    }
}

SetMap SetMap::identity(const FiniteSet& set) {
    std::vector<std::uint32_t> image(set.size());
    std::iota(image.begin(), image.end(), 0U);
    return SetMap(set, set, std::move(image));
}

SetMap SetMap::inclusion(const FiniteSet& sub, const FiniteSet& whole) {
    std::vector<std::uint32_t> image;
    image.reserve(sub.size());
    for (const auto& label : sub.elements()) {
        auto idx = whole.index_of(label);
        if (!idx) throw InputError(to_string(label) + " is not in " + to_string(whole));
        image.push_back(static_cast<std::uint32_t>(*idx));
    }
    return SetMap(sub, whole, std::move(image));
}

const Label& SetMap::apply(const Label& label) const {
    auto idx = source_.index_of(label);
    if (!idx) throw InputError(to_string(label) + " is not in the source of the map");
    return target_[image_[*idx]];
}

bool SetMap::is_injective() const {
    std::vector<bool> hit(target_.size(), false);
    for (auto v : image_) {
        if (hit[v]) return false;
        hit[v] = true;
    }
    return true;
}

bool SetMap::is_surjective() const {
    std::vector<bool> hit(target_.size(), false);
    for (auto v : image_) hit[v] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool SetMap::is_identity() const {
    if (!(source_ == target_)) return false;
    for (std::size_t i = 0; i < image_.size(); ++i) {
        if (image_[i] != i) return false;
    }
    return true;
}

bool operator==(const SetMap& a, const SetMap& b) {
    return a.image_ == b.image_ && a.source_ == b.source_ && a.target_ == b.target_;
}

SetMap compose(const SetMap& g, const SetMap& f) {
    if (!(f.target() == g.source())) {
        throw InputError("maps are not composable");
    }
    std::vector<std::uint32_t> image(f.source().size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        image[i] = g(f(i));
    }
    return SetMap(f.source(), g.target(), std::move(image));
}

FinChain FinChain::single(FiniteSet set) {
    FinChain chain;
    chain.sets.push_back(std::move(set));
    return chain;
}

FinChain FinChain::from_maps(std::vector<SetMap> maps) {
    if (maps.empty()) throw InputError("from_maps needs at least one map");
    FinChain chain;
    chain.sets.push_back(maps.front().source());
    for (const auto& m : maps) chain.sets.push_back(m.target());
    chain.maps = std::move(maps);
    require_valid(chain);
    return chain;
}

bool operator==(const FinChain& a, const FinChain& b) {
    return a.sets == b.sets && a.maps == b.maps;
}

ChainValidation validate_chain(const FinChain& chain) {
    ChainValidation result;
    auto fail = [&](std::string why) {
        result.ok = false;
        result.violations.push_back(std::move(why));
    };
    if (chain.sets.empty()) {
        fail("a chain needs at least one set");
        return result;
    }
    if (chain.maps.size() + 1 != chain.sets.size()) {
        fail("expected " + std::to_string(chain.sets.size() - 1) + " maps, found " +
             std::to_string(chain.maps.size()));
    }
    const std::size_t n = std::min(chain.maps.size(), chain.sets.size() - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(chain.maps[i].source() == chain.sets[i])) {
            fail("f_" + std::to_string(i) + " has source " + to_string(chain.maps[i].source()) +
                 " but S_" + std::to_string(i) + " = " + to_string(chain.sets[i]));
        }
        if (!(chain.maps[i].target() == chain.sets[i + 1])) {
            fail("f_" + std::to_string(i) + " has target " + to_string(chain.maps[i].target()) +
                 " but S_" + std::to_string(i + 1) + " = " + to_string(chain.sets[i + 1]));
        }
    }
    return result;
}

void require_valid(const FinChain& chain) {
    auto v = validate_chain(chain);
    if (!v.ok) throw InputError("invalid chain: " + v.violations.front());
}

FinChain face(const FinChain& chain, int i) {
    require_valid(chain);
    const int k = chain.level_count();
    if (k < 1 || i < 0 || i > k) {
        throw InputError("face index " + std::to_string(i) + " out of range for k = " + std::to_string(k));
    }
    FinChain out;
    out.sets.reserve(chain.sets.size() - 1);
    for (int j = 0; j <= k; ++j) {
        if (j != i) out.sets.push_back(chain.sets[j]);
    }
    if (i == 0) {
        out.maps.assign(chain.maps.begin() + 1, chain.maps.end());
    } else if (i == k) {
        out.maps.assign(chain.maps.begin(), chain.maps.end() - 1);
    } else {
        out.maps.reserve(chain.maps.size() - 1);
        for (int j = 0; j < k; ++j) {
            if (j == i - 1) {
                out.maps.push_back(compose(chain.maps[i], chain.maps[i - 1]));
            } else if (j != i) {
                out.maps.push_back(chain.maps[j]);
            }
        }
    }
    return out;
}

FinChain degeneracy(const FinChain& chain, int i) {
    require_valid(chain);
    const int k = chain.level_count();
    if (i < 0 || i > k) {
        throw InputError("degeneracy index " + std::to_string(i) + " out of range for k = " + std::to_string(k));
    }
    FinChain out = chain;
    out.sets.insert(out.sets.begin() + i, chain.sets[i]);
    out.maps.insert(out.maps.begin() + i, SetMap::identity(chain.sets[i]));
    return out;
}

SetMap composite(const FinChain& chain, int from, int to) {
    if (from < 0 || to > chain.level_count() || from > to) {
        throw InputError("composite range out of bounds");
    }
    SetMap result = SetMap::identity(chain.sets[from]);
    for (int j = from; j < to; ++j) result = compose(chain.maps[j], result);
    return result;
}

bool is_monotone(const Monotone& delta, int target_level) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (delta[i] < 0 || delta[i] > target_level) return false;
        if (i > 0 && delta[i] < delta[i - 1]) return false;
    }
    return !delta.empty();
}

FinChain precompose(const FinChain& beta, const Monotone& delta) {
    require_valid(beta);
    if (!is_monotone(delta, beta.level_count())) throw InputError("delta is not a monotone map into [l]");
    FinChain out;
    for (int v : delta) out.sets.push_back(beta.sets[v]);
    for (std::size_t i = 0; i + 1 < delta.size(); ++i) {
        out.maps.push_back(composite(beta, delta[i], delta[i + 1]));
    }
    return out;
}

Monotone coface(int k, int i) {
    Monotone d;
    for (int j = 0; j < k; ++j) d.push_back(j < i ? j : j + 1);
    return d;
}

Monotone codegeneracy(int k, int i) {
    Monotone d;
    for (int j = 0; j <= k + 1; ++j) d.push_back(j <= i ? j : j - 1);
    return d;
}

Monotone compose(const Monotone& outer, const Monotone& inner) {
    Monotone d;
    d.reserve(inner.size());
    for (int v : inner) {
        if (v < 0 || v >= static_cast<int>(outer.size())) throw InputError("monotone maps are not composable");
        d.push_back(outer[v]);
    }
    return d;
}

bool SimplexMap::delta_surjective() const {
    std::vector<bool> hit(target.sets.size(), false);
    for (int v : delta) hit[v] = true;
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool SimplexMap::delta_injective() const {
    return std::adjacent_find(delta.begin(), delta.end()) == delta.end();
}

bool validate_simplex_map(const SimplexMap& map) {
    if (!validate_chain(map.source).ok || !validate_chain(map.target).ok) return false;
    if (static_cast<int>(map.delta.size()) != map.source.level_count() + 1) return false;
    if (!is_monotone(map.delta, map.target.level_count())) return false;
    return precompose(map.target, map.delta) == map.source;
}

SimplexMap make_simplex_map(const FinChain& target, Monotone delta) {
    FinChain source = precompose(target, delta);
    return SimplexMap{std::move(delta), std::move(source), target};
}

SimplexMap identity_map(const FinChain& chain) {
    Monotone d(chain.sets.size());
    std::iota(d.begin(), d.end(), 0);
    return make_simplex_map(chain, std::move(d));
}

SimplexMap face_map(const FinChain& chain, int i) {
    FinChain f = face(chain, i);
    return SimplexMap{coface(chain.level_count(), i), std::move(f), chain};
}

SimplexMap degeneracy_map(const FinChain& chain, int i) {
    FinChain s = degeneracy(chain, i);
    return SimplexMap{codegeneracy(chain.level_count(), i), std::move(s), chain};
}

SimplexMap compose(const SimplexMap& outer, const SimplexMap& inner) {
    if (!(inner.target == outer.source)) throw InputError("simplex maps are not composable");
    return SimplexMap{compose(outer.delta, inner.delta), inner.source, outer.target};
}

std::vector<Monotone> monotone_maps(int k, int l) {
    std::vector<Monotone> out;
    Monotone cur(static_cast<std::size_t>(k + 1), 0);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
        if (pos > k) {
            out.push_back(cur);
            return;
        }
        for (int v = lo; v <= l; ++v) {
            cur[pos] = v;
            rec(pos + 1, v);
        }
    };
    rec(0, 0);
    return out;
}

void for_each_chain(int max_level, int max_size, const std::function<void(const FinChain&)>& visit) {
    std::vector<FiniteSet> ranges;
    for (int s = 0; s <= max_size; ++s) ranges.push_back(FiniteSet::range(s));
    for (int k = 0; k <= max_level; ++k) {
        std::vector<int> sizes(static_cast<std::size_t>(k + 1), 0);
        // Odometer over set sizes, then over every tuple of maps.
        while (true) {
            FinChain chain;
            for (int s : sizes) chain.sets.push_back(ranges[s]);
            std::vector<std::vector<std::uint32_t>> images(static_cast<std::size_t>(k));
            bool possible = true;
            for (int i = 0; i < k; ++i) {
                images[i].assign(sizes[i], 0);
                if (sizes[i] > 0 && sizes[i + 1] == 0) possible = false;
            }
            while (possible) {
                chain.maps.clear();
                for (int i = 0; i < k; ++i) chain.maps.emplace_back(chain.sets[i], chain.sets[i + 1], images[i]);
                visit(chain);
                // advance the map odometer
                int i = k - 1;
                for (; i >= 0; --i) {
                    auto& img = images[i];
                    std::size_t p = 0;
                    for (; p < img.size(); ++p) {
                        if (++img[p] < static_cast<std::uint32_t>(sizes[i + 1])) break;
                        img[p] = 0;
                    }
                    if (p < img.size()) break;
                }
                if (i < 0) break;
            }
            int p = k;
            for (; p >= 0; --p) {
                if (++sizes[p] <= max_size) break;
                sizes[p] = 0;
            }
            if (p < 0) break;
        }
    }
}

namespace {

void record(SimplicialReport& report, bool ok, const FinChain& chain, const std::string& what) {
    ++report.checks;
    if (ok) return;
    ++report.failures;
    if (report.counterexamples.size() < 5) {
        std::ostringstream out;
        out << what << " fails on chain with sets";
        for (const auto& s : chain.sets) out << ' ' << to_string(s);
        report.counterexamples.push_back(out.str());
    }
}

}  // namespace

void check_simplicial_identities(const FinChain& chain, SimplicialReport& report) {
    const int k = chain.level_count();
    ++report.chains;
    // d_i d_j = d_{j-1} d_i for i < j
    if (k >= 2) {
        for (int j = 1; j <= k; ++j) {
            FinChain dj = face(chain, j);
            for (int i = 0; i < j; ++i) {
                record(report, face(dj, i) == face(face(chain, i), j - 1), chain,
                       "d_" + std::to_string(i) + " d_" + std::to_string(j));
            }
        }
    }
    for (int j = 0; j <= k; ++j) {
        FinChain sj = degeneracy(chain, j);
        for (int i = 0; i <= k + 1; ++i) {
            FinChain lhs = face(sj, i);
            if (i < j) {
                // d_i s_j = s_{j-1} d_i
                record(report, k >= 1 && lhs == degeneracy(face(chain, i), j - 1), chain,
                       "d_" + std::to_string(i) + " s_" + std::to_string(j));
            } else if (i == j || i == j + 1) {
                // d_j s_j = d_{j+1} s_j = id
                record(report, lhs == chain, chain, "d_" + std::to_string(i) + " s_" + std::to_string(j));
            } else {
                // d_i s_j = s_j d_{i-1} for i > j + 1
                record(report, lhs == degeneracy(face(chain, i - 1), j), chain,
                       "d_" + std::to_string(i) + " s_" + std::to_string(j));
            }
        }
        // s_i s_j = s_{j+1} s_i for i <= j
        for (int i = 0; i <= j; ++i) {
            record(report, degeneracy(sj, i) == degeneracy(degeneracy(chain, i), j + 1), chain,
                   "s_" + std::to_string(i) + " s_" + std::to_string(j));
        }
    }
}

SimplicialReport check_simplicial_identities(int max_level, int max_size) {
    SimplicialReport report;
    for_each_chain(max_level, max_size, [&](const FinChain& chain) { check_simplicial_identities(chain, report); });
    return report;
}

}  // namespace confstrata::setcat
