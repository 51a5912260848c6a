#include "confstrata/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "confstrata/confcat.hpp"
#include "confstrata/errors.hpp"
#include "confstrata/io.hpp"
#include "confstrata/koszul.hpp"
#include "confstrata/wonderful.hpp"

namespace confstrata::cli {

using io::Json;

namespace {

const std::vector<std::pair<Command, std::string>>& command_names() {
    static const std::vector<std::pair<Command, std::string>> names = {
        {Command::forests, "forests"},
        {Command::nests, "nests"},
        {Command::strata, "strata"},
        {Command::deltafin_check, "deltafin-check"},
        {Command::con, "con"},
        {Command::blowup_validate, "blowup-validate"},
        {Command::forget_centers, "forget-centers"},
        {Command::purity, "purity"},
        {Command::hilbert, "hilbert"},
        {Command::koszul, "koszul"},
    };
    return names;
}

struct Outcome {
    Json result = Json::object();
    std::string text;
    std::string dot;
};

// Inputs read for one run; their bytes feed the digest.
struct Inputs {
    std::vector<std::pair<std::string, std::string>> files;

    Json load(const std::string& path) {
        files.emplace_back(path, io::read_file(path));
        return io::parse_json(files.back().second, path);
    }
};

int require_n(const RunConfig& c) {
    if (!c.n) throw InputError("--n is required for " + to_string(c.command));
    if (*c.n < 0) throw InputError("--n must be non-negative");
    return *c.n;
}

std::string require_input(const RunConfig& c, const std::string& what) {
    if (c.input.empty()) throw InputError(to_string(c.command) + " needs " + what);
    return c.input;
}

Json strings(const std::vector<std::string>& v) {
    Json out = Json::array();
    for (const auto& s : v) out.push_back(s);
    return out;
}

Json labels_json(const std::vector<Label>& v) {
    Json out = Json::array();
    for (const auto& l : v) out.push_back(io::label_to_json(l));
    return out;
}

std::string series_string(const std::vector<std::int64_t>& c) {
    std::ostringstream s;
    bool first = true;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (c[k] == 0) continue;
        if (!first) s << (c[k] < 0 ? " - " : " + ");
        else if (c[k] < 0) s << "-";
        const auto a = c[k] < 0 ? -c[k] : c[k];
        if (k == 0 || a != 1) s << a;
        if (k >= 1) s << "t";
        if (k >= 2) s << "^" << k;
        first = false;
    }
    return first ? "0" : s.str();
}

Json functor_json(const confcat::FunctorReport& r) {
    return Json{{"chains", r.chains},
                {"pairs", r.pairs},
                {"quotient_failures", r.quotient_failures},
                {"poset_map_failures", r.poset_failures},
                {"identity_checks", r.identity_checks},
                {"identity_failures", r.identity_failures},
                {"counterexamples", strings(r.counterexamples)},
                {"poset_map_counterexamples", strings(r.poset_counterexamples)},
                {"pass", r.ok()}};
}

Json simplicial_json(const setcat::SimplicialReport& r) {
    return Json{{"chains", r.chains},
                {"checks", r.checks},
                {"failures", r.failures},
                {"counterexamples", strings(r.counterexamples)},
                {"pass", r.ok()}};
}

Json stratum_map_json(const confcat::StratumMap& m) {
    Json j{{"kind", confcat::to_string(m.kind)},
           {"source", io::stratum_to_json(m.source)},
           {"target", io::stratum_to_json(m.target)}};
    Json parts = Json::array();
    for (const auto& c : m.components) parts.push_back(confcat::to_string(c.kind));
    j["components"] = parts;
    return j;
}

// ---------------------------------------------------------------------------
// Subcommands

Outcome run_forests(const RunConfig& c, Inputs& in) {
    Outcome o;
    if (!c.input.empty()) {
        const auto phi = io::forest_from_json(in.load(c.input));
        const auto poset = forests::to_poset(phi);
        const bool round_trip = forests::from_poset(poset) == phi;
        Json trees = Json::array();
        for (const auto& t : forests::trees_of(phi)) trees.push_back(labels_json(t.root));
        o.result = Json{{"forest", io::forest_to_json(phi)},
                        {"codim", confcat::stratum_codim(phi)},
                        {"roots", trees},
                        {"poset_round_trip", round_trip},
                        {"poset_violations", strings(poset.forest_violations())}};
        o.text = forests::to_string(phi) + "\ncodim " + std::to_string(confcat::stratum_codim(phi)) + ", " +
                 std::to_string(trees.size()) + " tree(s)\n";
        o.dot = forests::to_dot(phi);
        return o;
    }
    const int n = require_n(c);
    const auto all = forests::enumerate_forests(n, c.unsafe_no_cap);
    o.result = Json{{"n", n}, {"count", all.size()}};
    if (c.list) {
        Json list = Json::array();
        for (const auto& f : all) list.push_back(io::forest_to_json(f));
        o.result["forests"] = list;
    }
    if (c.count) {
        o.text = std::to_string(all.size()) + "\n";
    } else {
        o.text = "forests on " + std::to_string(n) + " points: " + std::to_string(all.size()) + "\n";
        if (c.list) {
            for (const auto& f : all) o.text += forests::to_string(f) + "\n";
        }
    }
    return o;
}

Outcome run_nests(const RunConfig& c, Inputs& in) {
    Outcome o;
    const bool full = c.input.empty();
    const auto building = full ? wonderful::BuildingSet::full_diagonal(require_n(c), c.d)
                               : io::building_set_from_json(in.load(c.input));
    const auto& lattice = building.lattice();
    const auto nests = wonderful::enumerate_nests(building);
    o.result = Json{{"n", lattice.n()}, {"d", lattice.d()}, {"count", nests.size()}};
    Json members = Json::array();
    for (auto m : building.members()) members.push_back(lattice.element(m).name);
    o.result["building_set"] = members;
    if (full) {
        std::set<std::string> images;
        for (const auto& nest : nests) images.insert(forests::to_string(wonderful::nest_to_forest(building, nest)));
        const auto all = forests::enumerate_forests(lattice.n(), c.unsafe_no_cap);
        std::set<std::string> expected;
        for (const auto& f : all) expected.insert(forests::to_string(f));
        o.result["forest_count"] = all.size();
        o.result["forest_bijection"] = images == expected && images.size() == nests.size();
    }
    if (c.list) {
        Json list = Json::array();
        for (const auto& nest : nests) {
            Json names = Json::array();
            for (auto m : nest) names.push_back(lattice.element(m).name);
            list.push_back(names);
        }
        o.result["nests"] = list;
    }
    if (c.count) {
        o.text = std::to_string(nests.size()) + "\n";
    } else {
        o.text = "nests (empty nest included): " + std::to_string(nests.size()) + "\n";
        if (full) {
            o.text += std::string("forest bijection: ") + (o.result["forest_bijection"].get<bool>() ? "yes" : "NO") + "\n";
        }
    }
    o.dot = wonderful::nest_poset_dot(building);
    return o;
}

Outcome run_strata(const RunConfig& c, Inputs&) {
    Outcome o;
    const int n = require_n(c);
    const auto poset = confcat::strata_poset(n, c.unsafe_no_cap);
    std::map<int, std::int64_t> by_codim;
    for (const auto& s : poset.strata) ++by_codim[s.codim];
    Json codims = Json::object();
    for (auto [k, v] : by_codim) codims[std::to_string(k)] = v;
    o.result = Json{{"n", n}, {"strata", poset.strata.size()}, {"covers", poset.covers.size()}, {"by_codim", codims}};
    o.text = "strata of the compactification of Conf_" + std::to_string(n) + ": " + std::to_string(poset.strata.size()) +
             ", covers: " + std::to_string(poset.covers.size()) + "\n";
    for (auto [k, v] : by_codim) o.text += "  codim " + std::to_string(k) + ": " + std::to_string(v) + "\n";
    if (c.list) {
        Json list = Json::array();
        for (const auto& s : poset.strata) list.push_back(io::stratum_to_json(s));
        o.result["list"] = list;
    }
    o.dot = confcat::strata_dot(poset);
    return o;
}

setcat::FinChain load_chain(const RunConfig& c, Inputs& in) {
    auto chain = io::chain_from_json(in.load(c.input));
    const auto v = setcat::validate_chain(chain);
    if (!v.ok) {
        std::string msg = "invalid chain:";
        for (const auto& s : v.violations) msg += " " + s + ";";
        throw InputError(msg);
    }
    return chain;
}

Outcome run_deltafin(const RunConfig& c, Inputs& in) {
    Outcome o;
    if (!c.input.empty()) {
        const auto chain = load_chain(c, in);
        setcat::SimplicialReport report;
        setcat::check_simplicial_identities(chain, report);
        const int k = chain.level_count();
        o.result = Json{{"level", k}, {"identities", simplicial_json(report)},
                        {"level_forest", io::forest_to_json(forests::level_functor_object(chain))}};
        if (c.list) {
            Json faces = Json::array();
            if (k >= 1) {
                for (int i = 0; i <= k; ++i) faces.push_back(io::chain_to_json(setcat::face(chain, i)));
            }
            Json degens = Json::array();
            for (int i = 0; i <= k; ++i) degens.push_back(io::chain_to_json(setcat::degeneracy(chain, i)));
            o.result["faces"] = faces;
            o.result["degeneracies"] = degens;
        }
        o.text = std::string("simplicial identities on the chain: ") + (report.ok() ? "PASS" : "FAIL") + " (" +
                 std::to_string(report.checks) + " checks)\nF(α) = " +
                 forests::to_string(forests::level_functor_object(chain)) + "\n";
        return o;
    }
    const auto report = setcat::check_simplicial_identities(c.max_level, c.max_size);
    o.result = Json{{"max_level", c.max_level}, {"max_size", c.max_size}, {"identities", simplicial_json(report)}};
    o.text = std::string("simplicial identities, level <= ") + std::to_string(c.max_level) + ", |S_i| <= " +
             std::to_string(c.max_size) + ": " + (report.ok() ? "PASS" : "FAIL") + " (" + std::to_string(report.chains) +
             " chains, " + std::to_string(report.checks) + " checks, " + std::to_string(report.failures) + " failures)\n";
    for (const auto& s : report.counterexamples) o.text += "  " + s + "\n";
    return o;
}

Outcome run_con(const RunConfig& c, Inputs& in) {
    Outcome o;
    if (c.input.empty() && !c.check_functor) throw InputError("con needs --input chain.json or --check-functor");
    if (!c.input.empty()) {
        const auto chain = load_chain(c, in);
        const auto object = confcat::con_object(chain);
        Json faces = Json::array();
        const int k = chain.level_count();
        if (k >= 1) {
            for (int i = 0; i <= k; ++i) faces.push_back(stratum_map_json(confcat::con_morphism(setcat::face_map(chain, i))));
        }
        o.result["object"] = io::stratum_to_json(object);
        o.result["face_maps"] = faces;
        o.text += "con(α) = stratum of " + forests::to_string(object.forest) + ", codim " + std::to_string(object.codim) + "\n";
    }
    if (c.check_functor) {
        const auto fast = confcat::check_level_functor(c.max_level, c.max_size, true);
        const int api_level = std::min(c.max_level, 3);
        const int api_size = std::min(c.max_size, 2);
        const auto api = confcat::check_con_functor(api_level, api_size);
        const bool pass = fast.ok() && api.ok();
        o.result["functor"] = Json{{"max_level", c.max_level},
                                   {"max_size", c.max_size},
                                   {"level_functor", functor_json(fast)},
                                   {"stratum_maps", functor_json(api)},
                                   {"stratum_maps_range", Json{{"max_level", api_level}, {"max_size", api_size}}},
                                   {"pass", pass}};
        std::ostringstream t;
        t << "functoriality, level <= " << c.max_level << ", |S_i| <= " << c.max_size << ": " << (pass ? "PASS" : "FAIL")
          << "\n  forests: " << fast.pairs << " composable pairs over " << fast.chains << " chains, "
          << fast.quotient_failures << " failures up to equal pullbacks, " << fast.identity_failures
          << " identity failures\n  as poset maps (informational): " << fast.poset_failures << " pairs differ\n"
          << "  stratum maps (level <= " << api_level << ", |S_i| <= " << api_size << "): " << api.pairs << " pairs, "
          << api.quotient_failures << " failures\n";
        for (const auto& s : fast.counterexamples) t << "  counterexample: " << s << "\n";
        o.text += t.str();
    }
    return o;
}

Outcome run_blowup(const RunConfig& c, Inputs& in) {
    Outcome o;
    Json doc;
    const bool from_file = !c.input.empty();
    if (from_file) doc = in.load(c.input);
    const auto building = from_file ? io::building_set_from_json(doc) : wonderful::BuildingSet::full_diagonal(require_n(c), c.d);
    const auto& lattice = building.lattice();
    std::vector<std::size_t> order;
    std::string source = "default";
    if (!c.order.empty()) {
        order = io::order_from_json(building, in.load(c.order));
        source = "given";
    } else if (from_file && doc.contains("order")) {
        order = io::order_from_json(building, doc["order"]);
        source = "given";
    } else {
        order = wonderful::default_order(building).order;
    }
    const auto v = wonderful::validate_li_order(lattice, order);
    Json names = Json::array();
    for (auto m : order) names.push_back(lattice.element(m).name);
    Json members = Json::array();
    for (auto m : building.members()) members.push_back(lattice.element(m).name);
    o.result = Json{{"n", lattice.n()}, {"d", lattice.d()}, {"building_set", members}, {"order", names},
                    {"order_source", source}, {"valid", v.ok}};
    if (!v.ok) {
        o.result["failing_prefix"] = v.failing_prefix;
        o.result["reason"] = v.reason;
    }
    std::set<std::size_t> given(order.begin(), order.end());
    const std::set<std::size_t> expected(building.members().begin(), building.members().end());
    if (v.ok && given == expected && order.size() == expected.size()) {
        const auto schedule = wonderful::make_schedule(building, order);
        Json divisors = Json::array();
        for (const auto& dv : schedule.divisors) {
            Json d{{"label", dv.label}, {"created", dv.created}, {"center", lattice.element(dv.member).name}};
            if (dv.forest) d["forest"] = forests::to_string(*dv.forest);
            divisors.push_back(d);
        }
        o.result["divisors"] = divisors;
    }
    std::ostringstream t;
    t << "order (" << source << "):";
    for (const auto& nm : names) t << " " << nm.get<std::string>();
    t << "\n";
    if (v.ok) {
        t << "valid: every prefix is a building set\n";
    } else {
        t << "invalid: prefix of length " << v.failing_prefix << " is not a building set (" << v.reason << ")\n";
    }
    o.text = t.str();
    return o;
}

Outcome run_forget(const RunConfig& c, Inputs& in) {
    Outcome o;
    const auto map = io::set_map_from_json(in.load(require_input(c, "--input map.json")));
    const auto centers = wonderful::forgetful_centers(map, c.d);
    Json list = Json::array();
    for (const auto& ce : centers) list.push_back(Json{{"subset", labels_json(ce.subset)}, {"codim", ce.codim}});
    o.result = Json{{"d", c.d}, {"centers", list}};
    o.text = std::to_string(centers.size()) + " center(s)\n";
    for (const auto& ce : centers) {
        std::string s = "  Δ{";
        for (std::size_t i = 0; i < ce.subset.size(); ++i) s += (i ? "," : "") + confstrata::to_string(ce.subset[i]);
        o.text += s + "} codim " + std::to_string(ce.codim) + "\n";
    }
    return o;
}

Json conf2_json(const weightalg::Conf2Report& r) {
    return Json{{"d", r.d},
                {"relative_2d", io::weights_to_json(r.v_2d)},
                {"relative_2d_plus_1", io::weights_to_json(r.v_2d1)},
                {"kernel", io::weights_to_json(r.kernel)},
                {"third_term_bound", io::weights_to_json(r.third_term)},
                {"middle_weights", io::weights_to_json(r.middle_bound)},
                {"middle_pure", r.middle_pure},
                {"middle_betti", Json{r.middle_betti.low, r.middle_betti.high}}};
}

Json series_json(const weightalg::HilbertSeries& s) {
    Json pieces = Json::array();
    for (const auto& p : s.pieces) {
        Json j{{"degree", p.degree}, {"dim", p.dim}, {"weights", io::weights_to_json(p.weights)}, {"pure", p.pure}};
        if (p.first_violation) j["first_violation"] = *p.first_violation;
        pieces.push_back(j);
    }
    return Json{{"truncation", s.truncation}, {"coefficients", s.coefficients()}, {"degrees", pieces}, {"pure", s.pure()}};
}

int truncation_for(const RunConfig& c, const weightalg::PresentationAlgebra& alg) {
    if (c.max_degree) return *c.max_degree;
    return std::min(alg.default_truncation, kMaxTruncation);
}

Outcome run_purity(const RunConfig& c, Inputs& in) {
    Outcome o;
    const auto x = io::variety_from_json(in.load(require_input(c, "--variety file.json")));
    const int n = require_n(c);
    const auto conf2 = weightalg::conf2_purity_report(x);
    const auto alg = weightalg::presentation(x, n, c.relations);
    const int N = truncation_for(c, alg);
    const auto v = weightalg::purity_theorem_check(x, n, N, c.relations, c.unsafe_no_cap);
    o.result = Json{{"variety", x.name},
                    {"n", n},
                    {"verdict", v.pure ? "pure" : "not pure"},
                    {"pure", v.pure},
                    {"generators_pure", v.generators_pure},
                    {"series", series_json(v.series)},
                    {"conf2", conf2_json(conf2)}};
    if (v.first_violation) o.result["first_violation"] = *v.first_violation;
    std::ostringstream t;
    t << "verdict: " << (v.pure ? "pure" : "not pure") << " (weight = degree through degree " << N << ")\n"
      << "Hilbert series: " << series_string(v.series.coefficients()) << "\n"
      << "H^" << 2 * x.d << "(Conf_2): kernel " << to_string(conf2.kernel) << ", weights " << to_string(conf2.middle_bound)
      << ", Betti number in [" << conf2.middle_betti.low << ", " << conf2.middle_betti.high << "]\n";
    if (v.first_violation) t << "first violation: " << *v.first_violation << "\n";
    o.text = t.str();
    return o;
}

Outcome run_hilbert(const RunConfig& c, Inputs& in) {
    Outcome o;
    const auto x = io::variety_from_json(in.load(require_input(c, "--variety file.json")));
    const int n = require_n(c);
    const auto alg = weightalg::presentation(x, n, c.relations);
    const int N = truncation_for(c, alg);
    const auto s = weightalg::hilbert_series(alg, N, 200000, c.unsafe_no_cap);
    Json gens = Json::array();
    for (const auto& g : alg.generators) gens.push_back(Json{{"label", g.label}, {"degree", g.degree}, {"weight", g.weight}});
    std::map<std::string, std::int64_t> kinds;
    for (const auto& r : alg.relations) ++kinds[r.kind];
    Json rel = Json::object();
    for (const auto& [k, v] : kinds) rel[k] = v;
    o.result = Json{{"variety", x.name}, {"n", n}, {"generators", gens}, {"relations", rel}, {"series", series_json(s)}};
    if (c.list) {
        Json list = Json::array();
        for (const auto& r : alg.relations) {
            std::string poly;
            for (const auto& [m, q] : r.poly) {
                if (!poly.empty()) poly += " + ";
                poly += "(" + linalg::to_string(q) + ")" + weightalg::monomial_string(alg.generators, m);
            }
            list.push_back(Json{{"kind", r.kind}, {"degree", r.degree}, {"weight", r.weight}, {"poly", poly}});
        }
        o.result["relation_list"] = list;
    }
    o.text = series_string(s.coefficients()) + "\n";
    return o;
}

Outcome run_koszul(const RunConfig& c, Inputs& in) {
    Outcome o;
    const auto p = io::quadratic_from_json(in.load(require_input(c, "--presentation file.json")));
    const int N = c.max_degree.value_or(10);
    const auto v = koszul::koszul_criterion(p, N, c.unsafe_no_cap);
    o.result = Json{{"presentation", io::quadratic_to_json(p)},
                    {"dual", io::quadratic_to_json(koszul::quadratic_dual(p))},
                    {"order", v.order},
                    {"h_a", v.h_a},
                    {"h_dual", v.h_dual},
                    {"product", v.product},
                    {"pass", v.pass},
                    {"verdict", v.text}};
    if (v.first_discrepancy) o.result["first_discrepancy"] = *v.first_discrepancy;
    o.text = v.text + "\nH_A(t)  = " + series_string(v.h_a) + "\nH_A!(t) = " + series_string(v.h_dual) + "\n";
    return o;
}

// ---------------------------------------------------------------------------
// Self-tests

using Check = std::pair<std::string, std::function<bool()>>;

std::vector<std::int64_t> poly_mul(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, std::size_t len) {
    std::vector<std::int64_t> out(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < len; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// Π_{j<n} (P_X(t) + j t^{2d}).
std::vector<std::int64_t> product_formula(const weightalg::VarietyDescriptor& x, int n, std::size_t len) {
    std::vector<std::int64_t> acc(len, 0);
    acc[0] = 1;
    for (int j = 0; j < n; ++j) {
        std::vector<std::int64_t> f(len, 0);
        for (const auto& [deg, w] : x.cohomology.by_degree()) {
            if (static_cast<std::size_t>(deg) < len) f[deg] += w.total();
        }
        if (static_cast<std::size_t>(2 * x.d) < len) f[2 * x.d] += j;
        acc = poly_mul(acc, f, len);
    }
    return acc;
}

koszul::QuadraticPresentation failing_presentation() {
    koszul::QuadraticPresentation p;
    p.generators = 2;
    p.relations = {{0, 0, 1, 0}, {0, 1, 0, 1}};
    return p;
}

std::vector<Check> selftests(Command command) {
    std::vector<Check> checks;
    switch (command) {
        case Command::forests:
            checks.emplace_back("forest counts n <= 5", [] {
                const std::vector<std::size_t> expect = {1, 1, 2, 8, 52, 472};
                for (int n = 0; n <= 5; ++n) {
                    if (forests::enumerate_forests(n).size() != expect[n]) return false;
                }
                return true;
            });
            checks.emplace_back("filtering and recursion agree n <= 4", [] {
                for (int n = 0; n <= 4; ++n) {
                    if (forests::enumerate_forests_by_filtering(n) != forests::enumerate_forests_recursive(n)) return false;
                }
                return true;
            });
            checks.emplace_back("poset round trip n <= 4", [] {
                for (int n = 0; n <= 4; ++n) {
                    for (const auto& f : forests::enumerate_forests(n)) {
                        const auto p = forests::to_poset(f);
                        if (!p.forest_violations().empty() || forests::from_poset(p) != f) return false;
                    }
                }
                return true;
            });
            break;
        case Command::nests:
            checks.emplace_back("nest count equals forest count n <= 5", [] {
                for (int n = 1; n <= 5; ++n) {
                    if (wonderful::nest_count(n, 1) != static_cast<std::int64_t>(forests::enumerate_forests(n).size())) return false;
                }
                return true;
            });
            checks.emplace_back("nests map onto forests n <= 4", [] {
                for (int n = 1; n <= 4; ++n) {
                    const auto b = wonderful::BuildingSet::full_diagonal(n, 1);
                    std::set<std::string> seen;
                    for (const auto& nest : wonderful::enumerate_nests(b)) seen.insert(forests::to_string(wonderful::nest_to_forest(b, nest)));
                    if (seen.size() != forests::enumerate_forests(n).size()) return false;
                }
                return true;
            });
            checks.emplace_back("subsets of nests are nests n = 4", [] {
                const auto b = wonderful::BuildingSet::full_diagonal(4, 1);
                for (const auto& nest : wonderful::enumerate_nests(b)) {
                    for (std::size_t drop = 0; drop < nest.size(); ++drop) {
                        auto sub = nest;
                        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
                        if (!wonderful::is_nest(b, sub)) return false;
                    }
                }
                return true;
            });
            break;
        case Command::strata:
            checks.emplace_back("codim counts non-singleton blocks n <= 4", [] {
                for (int n = 0; n <= 4; ++n) {
                    for (const auto& f : forests::enumerate_forests(n)) {
                        if (confcat::stratum_codim(f) != f.non_singleton_count()) return false;
                    }
                }
                return true;
            });
            checks.emplace_back("intersection is the forest union n <= 3", [] {
                for (int n = 0; n <= 3; ++n) {
                    const auto all = forests::enumerate_forests(n);
                    for (const auto& a : all) {
                        for (const auto& b : all) {
                            const auto s = confcat::stratum_intersect(a, b);
                            const auto u = forests::union_if_forest(a, b);
                            if (s.has_value() != u.has_value()) return false;
                            if (s && s->forest != *u) return false;
                        }
                    }
                }
                return true;
            });
            checks.emplace_back("covers add one block n = 3", [] {
                const auto p = confcat::strata_poset(3);
                for (auto [a, b] : p.covers) {
                    if (p.strata[b].forest.size() != p.strata[a].forest.size() + 1) return false;
                    if (!p.strata[a].forest.is_subfamily_of(p.strata[b].forest)) return false;
                }
                return true;
            });
            break;
        case Command::deltafin_check:
            checks.emplace_back("simplicial identities level <= 3, |S_i| <= 2",
                                [] { return setcat::check_simplicial_identities(3, 2).ok(); });
            checks.emplace_back("simplicial identities level <= 2, |S_i| <= 3",
                                [] { return setcat::check_simplicial_identities(2, 3).ok(); });
            break;
        case Command::con:
            checks.emplace_back("level functor level <= 2, |S_i| <= 2",
                                [] { return confcat::check_level_functor(2, 2, false).ok(); });
            checks.emplace_back("con on stratum maps level <= 2, |S_i| <= 2",
                                [] { return confcat::check_con_functor(2, 2).ok(); });
            break;
        case Command::blowup_validate:
            checks.emplace_back("default order is valid n <= 4", [] {
                for (int n = 2; n <= 4; ++n) {
                    if (!wonderful::validate_li_order(wonderful::default_order(wonderful::BuildingSet::full_diagonal(n, 1))).ok) return false;
                }
                return true;
            });
            checks.emplace_back("pairwise diagonals first fails at prefix 3 for n = 3", [] {
                const auto b = wonderful::BuildingSet::full_diagonal(3, 1);
                const auto& l = b.lattice();
                std::vector<std::size_t> order;
                for (auto u : {0b011ULL, 0b101ULL, 0b110ULL, 0b111ULL}) order.push_back(*l.diagonal_index(u));
                const auto v = wonderful::validate_li_order(l, order);
                return !v.ok && v.failing_prefix == 3;
            });
            break;
        case Command::forget_centers:
            checks.emplace_back("inclusions give 2^s - s - 1 centers", [] {
                for (int s = 0; s <= 4; ++s) {
                    const auto i = setcat::SetMap::inclusion(setcat::FiniteSet::range(s), setcat::FiniteSet::range(s + 2));
                    const auto centers = wonderful::forgetful_centers(i, 2);
                    if (static_cast<int>(centers.size()) != (1 << s) - s - 1) return false;
                    for (const auto& ce : centers) {
                        if (ce.codim != 2 * (static_cast<int>(ce.subset.size()) - 1)) return false;
                    }
                }
                return true;
            });
            break;
        case Command::purity:
            checks.emplace_back("elliptic curve pure n <= 2", [] {
                for (int n = 1; n <= 2; ++n) {
                    if (!weightalg::purity_theorem_check(weightalg::elliptic_curve(), n, 8).pure) return false;
                }
                return true;
            });
            checks.emplace_back("affine line pure n <= 3", [] {
                for (int n = 1; n <= 3; ++n) {
                    if (!weightalg::purity_theorem_check(weightalg::affine_line(), n, 8).pure) return false;
                }
                return true;
            });
            checks.emplace_back("wrong weight in H^1 is refused", [] {
                auto x = weightalg::elliptic_curve();
                x.cohomology = weightalg::WeightedGradedSpace();
                x.products.clear();
                x.cohomology.add(0, 0, 1);
                x.cohomology.add(1, 0, 2);
                x.cohomology.add(2, 2, 1);
                try {
                    weightalg::purity_theorem_check(x, 2, 6);
                } catch (const HypothesisRefused&) {
                    return true;
                }
                return false;
            });
            checks.emplace_back("Conf_2 of a curve times R: middle Betti number in [6, 8]", [] {
                const auto r = weightalg::conf2_purity_report(weightalg::elliptic_curve());
                return r.middle_pure && r.middle_betti.low == 6 && r.middle_betti.high == 8;
            });
            break;
        case Command::hilbert:
            checks.emplace_back("product formula, affine line n <= 4 and elliptic curve n <= 2", [] {
                for (int n = 1; n <= 4; ++n) {
                    const auto x = weightalg::affine_line();
                    const auto s = weightalg::hilbert_series(weightalg::presentation(x, n), 8).coefficients();
                    if (s != product_formula(x, n, 9)) return false;
                }
                for (int n = 1; n <= 2; ++n) {
                    const auto x = weightalg::elliptic_curve();
                    const auto s = weightalg::hilbert_series(weightalg::presentation(x, n), 6).coefficients();
                    if (s != product_formula(x, n, 7)) return false;
                }
                return true;
            });
            break;
        case Command::koszul:
            checks.emplace_back("symmetric and exterior algebras pass g <= 3", [] {
                for (int g = 1; g <= 3; ++g) {
                    if (!koszul::koszul_criterion(koszul::symmetric_algebra(g), 8).pass) return false;
                    if (!koszul::koszul_criterion(koszul::exterior_algebra(g), 8).pass) return false;
                }
                return true;
            });
            checks.emplace_back("Q<x,y>/(yx, xy + y^2) fails at t^4", [] {
                const auto v = koszul::koszul_criterion(failing_presentation(), 8);
                return !v.pass && v.first_discrepancy == 4;
            });
            break;
    }
    return checks;
}

Outcome run_selftest(const RunConfig& c) {
    Outcome o;
    Json list = Json::array();
    bool all = true;
    for (const auto& [name, fn] : selftests(c.command)) {
        bool ok = false;
        std::string error;
        try {
            ok = fn();
        } catch (const std::exception& e) {
            error = e.what();
        }
        all = all && ok;
        Json j{{"name", name}, {"pass", ok}};
        if (!error.empty()) j["error"] = error;
        list.push_back(j);
        o.text += std::string(ok ? "PASS " : "FAIL ") + name + (error.empty() ? "" : " (" + error + ")") + "\n";
    }
    o.result = Json{{"selftest", list}, {"pass", all}};
    return o;
}

Outcome dispatch(const RunConfig& c, Inputs& in) {
    switch (c.command) {
        case Command::forests: return run_forests(c, in);
        case Command::nests: return run_nests(c, in);
        case Command::strata: return run_strata(c, in);
        case Command::deltafin_check: return run_deltafin(c, in);
        case Command::con: return run_con(c, in);
        case Command::blowup_validate: return run_blowup(c, in);
        case Command::forget_centers: return run_forget(c, in);
        case Command::purity: return run_purity(c, in);
        case Command::hilbert: return run_hilbert(c, in);
        case Command::koszul: return run_koszul(c, in);
    }
    throw InputError("unknown command");
}

Json config_json(const RunConfig& c) {
    Json j{{"command", to_string(c.command)},
           {"d", c.d},
           {"max_level", c.max_level},
           {"max_size", c.max_size},
           {"count", c.count},
           {"list", c.list},
           {"check_functor", c.check_functor},
           {"selftest", c.selftest},
           {"unsafe_no_cap", c.unsafe_no_cap},
           {"relations",
            Json{{"squares", c.relations.squares},
                 {"arnold", c.relations.arnold},
                 {"module", c.relations.module},
                 {"ring", c.relations.ring}}}};
    j["n"] = c.n ? Json(*c.n) : Json(nullptr);
    j["max_degree"] = c.max_degree ? Json(*c.max_degree) : Json(nullptr);
    return j;
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%S") << "." << std::setw(3) << std::setfill('0') << ms << "Z";
    return s.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot write " + path);
    f << content;
}

class Sidecar {
public:
    explicit Sidecar(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::app);
            if (!file_) throw InputError("cannot write log " + path);
        }
    }
    void line(const std::string& msg) {
        if (file_) file_ << timestamp() << " " << msg << "\n";
    }

private:
    std::ofstream file_;
};

}  // namespace

std::string to_string(Command c) {
    for (const auto& [cmd, name] : command_names()) {
        if (cmd == c) return name;
    }
    return "?";
}

std::optional<Command> parse_command(const std::string& name) {
    for (const auto& [cmd, n] : command_names()) {
        if (n == name) return cmd;
    }
    return std::nullopt;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::ostringstream s;
    for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return s.str();
}

void check_caps(const RunConfig& c) {
    if (c.unsafe_no_cap) return;
    if (c.n && *c.n > kMaxPoints) {
        throw CapExceeded("n = " + std::to_string(*c.n) + " exceeds the cap " + std::to_string(kMaxPoints) + " (use --unsafe-no-cap)");
    }
    if (c.max_degree && *c.max_degree > kMaxTruncation) {
        throw CapExceeded("max degree " + std::to_string(*c.max_degree) + " exceeds the cap " + std::to_string(kMaxTruncation) +
                          " (use --unsafe-no-cap)");
    }
    if (c.max_level > kMaxLevel || c.max_size > kMaxSize) {
        throw CapExceeded("functor checks are capped at level " + std::to_string(kMaxLevel) + " and size " +
                          std::to_string(kMaxSize));
    }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const auto started = std::chrono::steady_clock::now();
    std::optional<Sidecar> log;
    try {
        log.emplace(c.log);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    log->line("start " + to_string(c.command));
    auto finish = [&](int code) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count();
        log->line("end exit=" + std::to_string(code) + " elapsed_ms=" + std::to_string(ms));
        return code;
    };

    Inputs in;
    Outcome outcome;
    int code = 0;
    std::string refusal;
    try {
        if (c.max_level < 0 || c.max_size < 0) throw InputError("--max-level and --max-size must be non-negative");
        if (c.d < 1) throw InputError("--d must be positive");
        if (c.max_degree && *c.max_degree < 0) throw InputError("--max-deg must be non-negative");
        check_caps(c);
        outcome = c.selftest ? run_selftest(c) : dispatch(c, in);
        if (c.selftest && !outcome.result["pass"].get<bool>()) code = 1;
    } catch (const HypothesisRefused& e) {
        refusal = e.what();
        code = 2;
        outcome = Outcome{};
        outcome.result = Json{{"refused", true}, {"reason", refusal}};
        outcome.text = std::string("refused: ") + refusal + "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        log->line(std::string("error ") + e.what());
        return finish(1);
    }

    std::string digest_input = config_json(c).dump();
    for (const auto& [path, bytes] : in.files) digest_input += "\n" + bytes;
    Json report{{"schema", kSchema},
                {"command", to_string(c.command)},
                {"config", config_json(c)},
                {"input_digest", "sha256:" + sha256_hex(digest_input)},
                {"result", outcome.result}};

    try {
        std::string body;
        switch (c.format) {
            case Format::json: body = report.dump(2) + "\n"; break;
            case Format::text: body = outcome.text; break;
            case Format::dot:
                if (outcome.dot.empty()) throw InputError("no DOT rendering for " + to_string(c.command));
                body = outcome.dot;
                break;
        }
        if (!c.dot.empty()) {
            if (outcome.dot.empty()) throw InputError("no DOT rendering for " + to_string(c.command));
            write_file(c.dot, outcome.dot);
            log->line("wrote " + c.dot);
        }
        if (c.output.empty()) {
            out << body;
        } else {
            write_file(c.output, body);
            log->line("wrote " + c.output);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return finish(1);
    }
    if (code == 2) err << "hypothesis refused: " << refusal << "\n";
    return finish(code);
}

ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Forests, nests, strata and weight/Koszul computations for configuration spaces", "confstrata"};
    app.require_subcommand(1);
    RunConfig c;
    std::string format = "text";
    std::optional<int> n;
    std::optional<int> max_degree;
    bool no_squares = false;
    bool no_arnold = false;
    bool no_module = false;
    bool no_ring = false;

    auto common = [&](CLI::App* sub) {
        sub->add_flag("--selftest", c.selftest, "Run this module's small-range property suites");
        sub->add_flag("--unsafe-no-cap", c.unsafe_no_cap, "Lift the hard size caps");
        sub->add_option("-o,--output", c.output, "Write the report here instead of stdout");
        sub->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text", "dot"}));
        sub->add_option("--log", c.log, "Append a timestamped log to this file");
    };
    auto add_n = [&](CLI::App* sub) { sub->add_option("--n", n, "Number of points"); };
    auto add_d = [&](CLI::App* sub) { sub->add_option("--d", c.d, "Complex dimension of X")->capture_default_str(); };
    auto add_levels = [&](CLI::App* sub) {
        sub->add_option("--max-level", c.max_level, "Largest chain level k")->capture_default_str();
        sub->add_option("--max-size", c.max_size, "Largest set size |S_i|")->capture_default_str();
    };
    auto add_relations = [&](CLI::App* sub) {
        sub->add_option("--max-deg", max_degree, "Truncation degree N");
        sub->add_flag("--no-squares", no_squares, "Drop x_ij^2 = 0");
        sub->add_flag("--no-arnold", no_arnold, "Drop the Arnold relations");
        sub->add_flag("--no-module", no_module, "Drop (a^(i) - a^(j)) x_ij = 0");
        sub->add_flag("--no-ring", no_ring, "Drop the products inside H*(X)");
    };

    std::map<CLI::App*, Command> subs;
    auto sub = [&](Command cmd, const std::string& help) {
        auto* s = app.add_subcommand(to_string(cmd), help);
        common(s);
        subs[s] = cmd;
        return s;
    };

    auto* f = sub(Command::forests, "Enumerate forests, or inspect one forest");
    add_n(f);
    f->add_flag("--count", c.count, "Print only the count");
    f->add_flag("--list", c.list, "List the forests");
    f->add_option("--input,--forest", c.input, "Forest JSON");
    f->add_option("--dot", c.dot, "Write DOT for the forest");

    auto* ne = sub(Command::nests, "Nests of a building set (full diagonal by default)");
    add_n(ne);
    add_d(ne);
    ne->add_flag("--count", c.count, "Print only the count");
    ne->add_flag("--list", c.list, "List the nests");
    ne->add_option("--input,--building", c.input, "Building set JSON");
    ne->add_option("--dot", c.dot, "Write DOT of the nest poset");

    auto* st = sub(Command::strata, "Stratum poset of the compactification of Conf_n");
    add_n(st);
    st->add_flag("--list", c.list, "List the strata");
    st->add_option("--dot", c.dot, "Write DOT of the stratum poset");

    auto* df = sub(Command::deltafin_check, "Simplicial identities in ΔFin");
    add_levels(df);
    df->add_option("--input,--chain", c.input, "Chain JSON");
    df->add_flag("--list", c.list, "List faces and degeneracies of the chain");

    auto* co = sub(Command::con, "The functor con on ΔFin");
    add_levels(co);
    co->add_flag("--check-functor", c.check_functor, "Check functoriality on all small composable pairs");
    co->add_option("--input,--chain", c.input, "Chain JSON");

    auto* bu = sub(Command::blowup_validate, "Validate a blow-up order");
    add_n(bu);
    add_d(bu);
    bu->add_option("--input,--building", c.input, "Building set JSON");
    bu->add_option("--order", c.order, "Order JSON (list of members)");

    auto* fc = sub(Command::forget_centers, "Centers forgotten along an injection");
    add_d(fc);
    fc->add_option("--input,--map", c.input, "Injection JSON");

    auto* pu = sub(Command::purity, "Weight purity of H*(Conf_n(X×R))");
    add_n(pu);
    add_relations(pu);
    pu->add_option("--input,--variety", c.input, "Variety descriptor JSON");

    auto* hi = sub(Command::hilbert, "Hilbert series of the presentation of H*(Conf_n(X×R))");
    add_n(hi);
    add_relations(hi);
    hi->add_flag("--list", c.list, "Include the relations");
    hi->add_option("--input,--variety", c.input, "Variety descriptor JSON");

    auto* ko = sub(Command::koszul, "Hilbert-series criterion for Koszulness");
    ko->add_option("--max-deg", max_degree, "Truncation degree N (default 10)");
    ko->add_option("--input,--presentation", c.input, "Quadratic presentation JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return ParseResult{std::nullopt, code == 0 ? 0 : 1};
    }
    for (const auto& [s, cmd] : subs) {
        if (s->parsed()) c.command = cmd;
    }
    c.n = n;
    c.max_degree = max_degree;
    c.format = format == "json" ? Format::json : format == "dot" ? Format::dot : Format::text;
    c.relations.squares = !no_squares;
    c.relations.arnold = !no_arnold;
    c.relations.module = !no_module;
    c.relations.ring = !no_ring;
    return ParseResult{c, 0};
}

}  // namespace confstrata::cli
