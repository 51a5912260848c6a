#include "confstrata/confcat.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "confstrata/errors.hpp"

namespace confstrata::confcat {

using forests::Block;
using forests::bit;
using forests::LevelForest;
using setcat::FinChain;
using setcat::Monotone;

int stratum_codim(const Forest& phi) { return phi.non_singleton_count(); }

Stratum make_stratum(Forest phi) {
    const int codim = stratum_codim(phi);
    return Stratum{std::move(phi), codim};
}

std::optional<Stratum> stratum_intersect(const Forest& phi, const Forest& psi) {
    auto joined = forests::union_if_forest(phi, psi);
    if (!joined) return std::nullopt;
    return make_stratum(std::move(*joined));
}

std::string to_string(MapKind kind) {
    switch (kind) {
        case MapKind::identity: return "identity";
        case MapKind::inclusion: return "inclusion";
        case MapKind::forgetful: return "forgetful";
        case MapKind::composite: return "composite";
    }
    return "unknown";
}

namespace {

std::vector<std::uint32_t> iota_map(std::size_t n) {
    std::vector<std::uint32_t> v(n);
    std::iota(v.begin(), v.end(), 0U);
    return v;
}

bool is_identity_injection(const ForMorphism& m) {
    if (!(m.source().ground() == m.target().ground())) return false;
    auto leaves = m.leaf_map();
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        if (leaves[i] != i) return false;
    }
    return true;
}

}  // namespace

StratumMap inclusion_map(const Forest& psi, const Forest& phi) {
    if (!phi.is_subfamily_of(psi)) throw InputError("inclusion of strata needs Φ ⊆ Ψ on one ground set");
    StratumMap map;
    map.kind = MapKind::inclusion;
    map.source = make_stratum(psi);
    map.target = make_stratum(phi);
    map.witness = ForMorphism::from_injection(phi, psi, iota_map(phi.ground().size()));
    return map;
}

StratumMap forgetful_map(const Forest& psi, const setcat::FiniteSet& source, const std::vector<std::uint32_t>& leaf_map) {
    Forest pulled = forests::pullback(source, leaf_map, psi);
    StratumMap map;
    map.kind = MapKind::forgetful;
    map.source = make_stratum(psi);
    map.target = make_stratum(pulled);
    map.witness = ForMorphism::from_injection(pulled, psi, leaf_map);
    return map;
}

StratumMap stratum_map(const ForMorphism& morphism) {
    const Forest& phi = morphism.source();
    const Forest& psi = morphism.target();
    Forest pulled = morphism.pulled_back();
    const bool trivial_forget = is_identity_injection(morphism);
    const bool trivial_include = pulled == phi;
    StratumMap out;
    out.source = make_stratum(psi);
    out.target = make_stratum(phi);
    out.witness = morphism;
    std::vector<std::uint32_t> leaves(morphism.leaf_map().begin(), morphism.leaf_map().end());
    if (trivial_forget && trivial_include) {
        out.kind = MapKind::identity;
    } else if (trivial_include) {
        out.kind = MapKind::forgetful;
    } else if (trivial_forget) {
        out.kind = MapKind::inclusion;
    } else {
        out.kind = MapKind::composite;
        out.components.push_back(forgetful_map(psi, phi.ground(), leaves));
        out.components.push_back(inclusion_map(pulled, phi));
    }
    return out;
}

std::optional<std::string> stratum_map_violation(const StratumMap& map) {
    const auto& w = map.witness;
    if (!(map.source.forest == w.target()) || !(map.target.forest == w.source())) {
        return "witness does not run between the strata's forests";
    }
    if (map.source.codim != stratum_codim(map.source.forest) || map.target.codim != stratum_codim(map.target.forest)) {
        return "stratum codimension is not the number of non-singleton blocks";
    }
    if (!map.target.forest.is_subfamily_of(w.pulled_back())) return "witness violates Φ ⊆ j^{-1}Ψ";
    switch (map.kind) {
        case MapKind::identity:
            if (!(map.source == map.target) || !(w.pulled_back() == map.target.forest)) return "identity map changes the stratum";
            break;
        case MapKind::inclusion:
            if (!is_identity_injection(w)) return "inclusion must fix every point";
            if (!map.target.forest.is_subfamily_of(map.source.forest)) return "inclusion needs target ⊆ source";
            break;
        case MapKind::forgetful:
            break;
        case MapKind::composite: {
            if (map.components.size() != 2 || map.components[0].kind != MapKind::forgetful ||
                map.components[1].kind != MapKind::inclusion) {
                return "composite must be a forgetful map followed by an inclusion";
            }
            const auto& f = map.components[0];
            const auto& i = map.components[1];
            if (!(f.source == map.source) || !(f.target == i.source) || !(i.target == map.target)) {
                return "composite components do not chain";
            }
            for (const auto& c : map.components) {
                if (auto why = stratum_map_violation(c)) return "component: " + *why;
            }
            break;
        }
    }
    return std::nullopt;
}

StratumMap compose(const StratumMap& g, const StratumMap& f) {
    if (!(f.target == g.source)) throw InputError("stratum maps are not composable");
    return stratum_map(forests::compose(f.witness, g.witness));
}

bool same_stratum_map(const StratumMap& a, const StratumMap& b) {
    return a.source == b.source && a.target == b.target && forests::same_quotient_class(a.witness, b.witness);
}

Stratum con_object(const FinChain& alpha) { return make_stratum(forests::level_functor_object(alpha)); }

StratumMap con_morphism(const setcat::SimplexMap& delta) {
    return stratum_map(forests::level_functor_morphism(delta));
}

StrataPoset strata_poset(int n, bool uncapped) {
    if (n < 0 || n > (uncapped ? 6 : 5)) throw CapExceeded("strata_poset is limited to n <= 5");
    StrataPoset poset;
    poset.n = n;
    for (auto& f : forests::enumerate_forests(n)) poset.strata.push_back(make_stratum(std::move(f)));
    for (std::size_t a = 0; a < poset.strata.size(); ++a) {
        for (std::size_t b = 0; b < poset.strata.size(); ++b) {
            const auto& fa = poset.strata[a].forest;
            const auto& fb = poset.strata[b].forest;
            if (fb.size() == fa.size() + 1 && fa.is_subfamily_of(fb)) poset.covers.emplace_back(a, b);
        }
    }
    return poset;
}

std::string strata_dot(const StrataPoset& poset, const std::string& graph_name) {
    std::ostringstream out;
    out << "digraph \"" << graph_name << "\" {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < poset.strata.size(); ++i) {
        const auto& s = poset.strata[i];
        std::string blocks;
        for (Block b : s.forest.blocks()) {
            if (std::popcount(b) < 2) continue;
            if (!blocks.empty()) blocks += ' ';
            std::string set = "{";
            bool first = true;
            for (const auto& l : s.forest.labels(b)) {
                if (!first) set += ',';
                first = false;
                set += confstrata::to_string(l);
            }
            blocks += set + "}";
        }
        if (blocks.empty()) blocks = "interior";
        out << "  s" << i << " [label=\"" << blocks << "\\ncodim " << s.codim << "\"];\n";
    }
    // Edges point from a stratum to the larger one whose closure contains it.
    for (auto [a, b] : poset.covers) out << "  s" << b << " -> s" << a << ";\n";
    out << "}\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Functoriality checks

namespace {

std::string describe(const FinChain& chain) {
    std::ostringstream out;
    for (std::size_t i = 0; i < chain.sets.size(); ++i) {
        if (i) {
            out << " -(";
            auto img = chain.maps[i - 1].image();
            for (std::size_t x = 0; x < img.size(); ++x) {
                if (x) out << ',';
                out << confstrata::to_string(chain.sets[i][img[x]]);
            }
            out << ")-> ";
        }
        out << setcat::to_string(chain.sets[i]);
    }
    return out.str();
}

std::string describe(const Monotone& d) {
    std::string out = "[";
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(d[i]);
    }
    return out + "]";
}

void descend(const LevelForest& source, const LevelForest& target, const Monotone& delta, std::vector<std::uint32_t>& out) {
    out.resize(source.forest.ground().size());
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
            out[static_cast<std::size_t>(row[x])] = static_cast<std::uint32_t>(target.leaf_index[level][e]);
        }
    }
}

void least_block_map(const std::vector<std::uint32_t>& j, const Forest& src, const Forest& tgt, std::vector<std::uint32_t>& out) {
    auto sb = src.blocks();
    auto tb = tgt.blocks();
    out.resize(sb.size());
    for (std::size_t a = 0; a < sb.size(); ++a) {
        Block img = 0;
        for (Block rest = sb[a]; rest; rest &= rest - 1) img |= bit(j[static_cast<std::size_t>(std::countr_zero(rest))]);
        std::size_t u = 0;
        while ((tb[u] & img) != img) ++u;
        out[a] = static_cast<std::uint32_t>(u);
    }
}

void pulled_blocks(const std::vector<std::uint32_t>& j, const Forest& tgt, std::vector<Block>& out) {
    out.clear();
    for (Block u : tgt.blocks()) {
        Block pre = 0;
        for (std::size_t s = 0; s < j.size(); ++s) {
            if ((u >> j[s]) & 1U) pre |= bit(s);
        }
        if (pre) out.push_back(pre);
    }
    std::sort(out.begin(), out.end(), forests::block_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

struct EpsData {
    Monotone eps;
    LevelForest lf;
    std::vector<std::uint32_t> j;  // leaves of F(γ∘ε) -> leaves of F(γ)
    std::vector<Block> pull;
    std::vector<std::uint32_t> block_map;
};

class MonotoneIndex {
public:
    explicit MonotoneIndex(int max_level) : base_(max_level + 1) {
        std::size_t slots = 1;
        for (int i = 0; i <= max_level; ++i) slots *= static_cast<std::size_t>(base_);
        stride_ = slots;
        table_.assign(slots * static_cast<std::size_t>(max_level + 2), -1);
    }
    [[nodiscard]] std::size_t code(const Monotone& m) const {
        std::size_t c = 0;
        for (auto it = m.rbegin(); it != m.rend(); ++it) c = c * static_cast<std::size_t>(base_) + static_cast<std::size_t>(*it);
        return c + m.size() * stride_;
    }
    std::int32_t& operator[](const Monotone& m) { return table_[code(m)]; }

private:
    int base_;
    std::size_t stride_;
    std::vector<std::int32_t> table_;
};

}  // namespace

FunctorReport check_level_functor(int max_level, int max_size, bool compare_poset_maps) {
    if (max_level < 0 || max_size < 0 || max_level > 4 || max_size > 4) {
        throw CapExceeded("level functor check is limited to level <= 4 and set size <= 4");
    }
    FunctorReport report;
    std::vector<std::vector<std::vector<Monotone>>> monos(static_cast<std::size_t>(max_level + 1));
    for (int k = 0; k <= max_level; ++k) {
        monos[k].resize(static_cast<std::size_t>(max_level + 1));
        for (int l = 0; l <= max_level; ++l) monos[k][l] = setcat::monotone_maps(k, l);
    }
    std::vector<std::uint32_t> jd, comp, bm_d;
    std::vector<Block> pull_buf;
    setcat::for_each_chain(max_level, max_size, [&](const FinChain& gamma) {
        ++report.chains;
        const int m = gamma.level_count();
        const LevelForest lf_g = forests::level_forest(gamma);
        std::vector<EpsData> data;
        MonotoneIndex index(max_level);
        for (int k = 0; k <= max_level; ++k) {
            for (const auto& eps : monos[k][m]) {
                EpsData e;
                e.eps = eps;
                e.lf = forests::level_forest(setcat::precompose(gamma, eps));
                descend(e.lf, lf_g, eps, e.j);
                pulled_blocks(e.j, lf_g.forest, e.pull);
                least_block_map(e.j, e.lf.forest, lf_g.forest, e.block_map);
                index[eps] = static_cast<std::int32_t>(data.size());
                data.push_back(std::move(e));
            }
        }
        for (const auto& e : data) {
            // Surjective ε: F must give the identity.
            bool surjective = true;
            for (int v = 0; v <= m && surjective; ++v) {
                surjective = std::find(e.eps.begin(), e.eps.end(), v) != e.eps.end();
            }
            if (surjective) {
                ++report.identity_checks;
                bool ident = e.lf.forest == lf_g.forest;
                for (std::size_t s = 0; ident && s < e.j.size(); ++s) ident = e.j[s] == s;
                if (!ident) {
                    ++report.identity_failures;
                    if (report.counterexamples.size() < 5) {
                        report.counterexamples.push_back("F(" + describe(e.eps) + ") is not the identity on " + describe(gamma));
                    }
                }
            }
        }
        Monotone dd;
        for (const auto& d : data) {
            const int l = static_cast<int>(d.eps.size()) - 1;
            for (int k = 0; k <= max_level; ++k) {
                for (const auto& dp : monos[k][l]) {
                    ++report.pairs;
                    dd.resize(dp.size());
                    for (std::size_t i = 0; i < dp.size(); ++i) dd[i] = d.eps[dp[i]];
                    const EpsData& e2 = data[index[dd]];
                    descend(e2.lf, d.lf, dp, jd);
                    comp.resize(jd.size());
                    for (std::size_t s = 0; s < jd.size(); ++s) comp[s] = d.j[jd[s]];
                    if (comp != e2.j) {
                        pulled_blocks(comp, lf_g.forest, pull_buf);
                        if (pull_buf != e2.pull) {
                            ++report.quotient_failures;
                            if (report.counterexamples.size() < 5) {
                                report.counterexamples.push_back("F(δ∘δ') ≠ F(δ)∘F(δ') for γ = " + describe(gamma) +
                                                                 ", δ = " + describe(d.eps) + ", δ' = " + describe(dp));
                            }
                        }
                    }
                    if (compare_poset_maps) {
                        least_block_map(jd, e2.lf.forest, d.lf.forest, bm_d);
                        bool same = true;
                        for (std::size_t a = 0; a < bm_d.size() && same; ++a) same = d.block_map[bm_d[a]] == e2.block_map[a];
                        if (!same) {
                            ++report.poset_failures;
                            if (report.poset_counterexamples.size() < 3) {
                                report.poset_counterexamples.push_back("γ = " + describe(gamma) + ", δ = " + describe(d.eps) +
                                                                       ", δ' = " + describe(dp));
                            }
                        }
                    }
                }
            }
        }
    });
    return report;
}

FunctorReport check_con_functor(int max_level, int max_size) {
    if (max_level < 0 || max_size < 0 || max_level > 3 || max_size > 3) {
        throw CapExceeded("con functor check is limited to level <= 3 and set size <= 3");
    }
    FunctorReport report;
    setcat::for_each_chain(max_level, max_size, [&](const FinChain& gamma) {
        ++report.chains;
        const int m = gamma.level_count();
        for (int l = 0; l <= max_level; ++l) {
            for (const auto& d : setcat::monotone_maps(l, m)) {
                const auto delta = setcat::make_simplex_map(gamma, d);
                const auto con_d = con_morphism(delta);
                auto record = [&](const std::string& what) {
                    ++report.quotient_failures;
                    if (report.counterexamples.size() < 5) report.counterexamples.push_back(what + " at γ = " + describe(gamma));
                };
                if (auto why = stratum_map_violation(con_d)) record("invalid con(" + describe(d) + "): " + *why);
                if (delta.delta_surjective()) {
                    ++report.identity_checks;
                    if (con_d.kind != MapKind::identity) {
                        ++report.identity_failures;
                        if (report.counterexamples.size() < 5) {
                            report.counterexamples.push_back("con(" + describe(d) + ") is not the identity at γ = " + describe(gamma));
                        }
                    }
                }
                for (int k = 0; k <= max_level; ++k) {
                    for (const auto& dp : setcat::monotone_maps(k, l)) {
                        ++report.pairs;
                        const auto inner = setcat::make_simplex_map(delta.source, dp);
                        const auto whole = setcat::compose(delta, inner);
                        const auto lhs = con_morphism(whole);
                        const auto con_inner = con_morphism(inner);
                        const auto rhs = compose(con_inner, con_d);
                        if (!same_stratum_map(lhs, rhs)) {
                            record("con(δ∘δ') ≠ con(δ')∘con(δ) for δ = " + describe(d) + ", δ' = " + describe(dp));
                        }
                        if (!forests::same_poset_map(lhs.witness, forests::compose_poset_maps(con_d.witness, con_inner.witness))) {
                            ++report.poset_failures;
                        }
                    }
                }
            }
        }
    });
    return report;
}

}  // namespace confstrata::confcat
