#include "confstrata/io.hpp"

#include <fstream>
#include <sstream>

#include "confstrata/errors.hpp"

namespace confstrata::io {

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    throw InputError("field '" + where + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) field_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) field_error(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

std::string path(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string path(const std::string& where, std::size_t index) { return where + "[" + std::to_string(index) + "]"; }

const Json& require_array(const Json& j, const std::string& where) {
    if (!j.is_array()) field_error(where, "expected an array");
    return j;
}

int require_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) field_error(where, "expected an integer");
    return j.get<int>();
}

std::vector<Label> labels_from_json(const Json& j, const std::string& where) {
    require_array(j, where);
    std::vector<Label> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(label_from_json(j[i], path(where, i)));
    return out;
}

setcat::FiniteSet set_from_json(const Json& j, const std::string& where) {
    try {
        return setcat::FiniteSet(labels_from_json(j, where));
    } catch (const InputError& e) {
        field_error(where, e.what());
    }
}

// Object keys are strings; match them against the rendering of set elements.
Label resolve_key(const setcat::FiniteSet& set, const std::string& key, const std::string& where) {
    std::optional<Label> found;
    for (const auto& l : set.elements()) {
        if (to_string(l) == key) {
            if (found) field_error(where, "label '" + key + "' is ambiguous");
            found = l;
        }
    }
    if (!found) field_error(where, "label '" + key + "' is not in the set");
    return *found;
}

Label resolve_value(const setcat::FiniteSet& set, const Json& j, const std::string& where) {
    Label l = label_from_json(j, where);
    if (set.contains(l)) return l;
    return resolve_key(set, to_string(l), where);
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source_name) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(source_name + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

std::string read_file(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read " + file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json label_to_json(const Label& label) {
    if (const auto* i = std::get_if<std::int64_t>(&label)) return *i;
    return std::get<std::string>(label);
}

Label label_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_string()) return j.get<std::string>();
    field_error(where, "labels must be integers or strings");
}

forests::Forest forest_from_json(const Json& j) {
    auto ground = set_from_json(require(j, "ground", ""), "ground");
    const auto& blocks = require_array(require(j, "blocks", ""), "blocks");
    std::vector<std::vector<Label>> bl;
    for (std::size_t i = 0; i < blocks.size(); ++i) bl.push_back(labels_from_json(blocks[i], path("blocks", i)));
    return forests::Forest::from_labels(std::move(ground), bl);
}

Json forest_to_json(const forests::Forest& phi) {
    Json ground = Json::array();
    for (const auto& l : phi.ground().elements()) ground.push_back(label_to_json(l));
    Json blocks = Json::array();
    for (auto b : phi.blocks()) {
        Json block = Json::array();
        for (const auto& l : phi.labels(b)) block.push_back(label_to_json(l));
        blocks.push_back(std::move(block));
    }
    return Json{{"ground", ground}, {"blocks", blocks}};
}

setcat::FinChain chain_from_json(const Json& j) {
    setcat::FinChain chain;
    const auto& sets = require_array(require(j, "sets", ""), "sets");
    for (std::size_t i = 0; i < sets.size(); ++i) chain.sets.push_back(set_from_json(sets[i], path("sets", i)));
    const Json maps = j.contains("maps") ? j["maps"] : Json::array();
    require_array(maps, "maps");
    chain.maps.resize(maps.size());
    std::vector<bool> seen(maps.size(), false);
    for (std::size_t m = 0; m < maps.size(); ++m) {
        const std::string where = path("maps", m);
        const int from = maps[m].contains("from") ? require_int(maps[m]["from"], path(where, "from")) : static_cast<int>(m);
        if (from < 0 || static_cast<std::size_t>(from) >= maps.size() || from + 1 >= static_cast<int>(chain.sets.size())) {
            field_error(path(where, "from"), "map index out of range");
        }
        if (seen[from]) field_error(path(where, "from"), "duplicate map index");
        seen[from] = true;
        const auto& source = chain.sets[from];
        const auto& target = chain.sets[from + 1];
        const auto& assignment = require(maps[m], "assignment", where);
        if (!assignment.is_object()) field_error(path(where, "assignment"), "expected an object");
        std::map<Label, Label> assign;
        for (auto it = assignment.begin(); it != assignment.end(); ++it) {
            const std::string at = path(where, "assignment") + "." + it.key();
            assign[resolve_key(source, it.key(), at)] = resolve_value(target, it.value(), at);
        }
        try {
            chain.maps[from] = setcat::SetMap(source, target, assign);
        } catch (const InputError& e) {
            field_error(where, e.what());
        }
    }
    return chain;
}

Json chain_to_json(const setcat::FinChain& chain) {
    Json sets = Json::array();
    for (const auto& s : chain.sets) {
        Json set = Json::array();
        for (const auto& l : s.elements()) set.push_back(label_to_json(l));
        sets.push_back(std::move(set));
    }
    Json maps = Json::array();
    for (std::size_t i = 0; i < chain.maps.size(); ++i) {
        Json assignment = Json::object();
        const auto& f = chain.maps[i];
        for (std::size_t x = 0; x < f.source().size(); ++x) {
            assignment[to_string(f.source()[x])] = label_to_json(f.target()[f(x)]);
        }
        maps.push_back(Json{{"from", i}, {"assignment", assignment}});
    }
    return Json{{"sets", sets}, {"maps", maps}};
}

setcat::SetMap set_map_from_json(const Json& j) {
    auto source = set_from_json(require(j, "source", ""), "source");
    auto target = set_from_json(require(j, "target", ""), "target");
    const auto& assignment = require(j, "assignment", "");
    if (!assignment.is_object()) field_error("assignment", "expected an object");
    std::map<Label, Label> assign;
    for (auto it = assignment.begin(); it != assignment.end(); ++it) {
        const std::string at = "assignment." + it.key();
        assign[resolve_key(source, it.key(), at)] = resolve_value(target, it.value(), at);
    }
    try {
        return setcat::SetMap(source, target, assign);
    } catch (const InputError& e) {
        field_error("assignment", e.what());
    }
}

namespace {

wonderful::Block point_mask(const Json& j, int n, const std::string& where) {
    require_array(j, where);
    wonderful::Block mask = 0;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const int p = require_int(j[i], path(where, i));
        if (p < 1 || p > n) field_error(path(where, i), "point " + std::to_string(p) + " is outside 1.." + std::to_string(n));
        mask |= forests::bit(static_cast<std::size_t>(p - 1));
    }
    return mask;
}

std::size_t member_from_json(const wonderful::ArrangementLattice& lattice, const Json& j, const std::string& where) {
    require_array(j, where);
    const int n = lattice.n();
    const bool poly = !j.empty() && j[0].is_array();
    wonderful::Partition part;
    wonderful::Block used = 0;
    if (poly) {
        for (std::size_t b = 0; b < j.size(); ++b) {
            auto mask = point_mask(j[b], n, path(where, b));
            if (mask & used) field_error(path(where, b), "blocks of a polydiagonal must be disjoint");
            used |= mask;
            part.push_back(mask);
        }
    } else {
        auto mask = point_mask(j, n, where);
        used = mask;
        part.push_back(mask);
    }
    for (int i = 0; i < n; ++i) {
        if (!((used >> i) & 1U)) part.push_back(forests::bit(static_cast<std::size_t>(i)));
    }
    part.erase(std::remove_if(part.begin(), part.end(), [](wonderful::Block b) { return b == 0; }), part.end());
    auto idx = lattice.index_of(part);
    if (!idx) field_error(where, "not a diagonal (needs a block of at least two points)");
    return *idx;
}

}  // namespace

wonderful::BuildingSet building_set_from_json(const Json& j) {
    const int n = require_int(require(j, "n", ""), "n");
    const int d = j.contains("d") ? require_int(j["d"], "d") : 1;
    if (n < 0 || n > 7) field_error("n", "must lie in 0..7");
    if (d < 1) field_error("d", "must be positive");
    auto lattice = std::make_shared<const wonderful::ArrangementLattice>(wonderful::ArrangementLattice::diagonal(n, d));
    const auto& members = require_array(require(j, "members", ""), "members");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < members.size(); ++i) idx.push_back(member_from_json(*lattice, members[i], path("members", i)));
    return wonderful::BuildingSet(std::move(lattice), std::move(idx));
}

std::vector<std::size_t> order_from_json(const wonderful::BuildingSet& building, const Json& j) {
    const Json& list = j.is_object() ? require(j, "order", "") : j;
    require_array(list, "order");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(member_from_json(building.lattice(), list[i], path("order", i)));
    return out;
}

Json element_to_json(const wonderful::ArrangementLattice& lattice, std::size_t element) {
    Json blocks = Json::array();
    for (auto b : lattice.partition(element)) {
        if (std::popcount(b) < 2) continue;
        Json block = Json::array();
        for (int i = 0; i < 64; ++i) {
            if ((b >> i) & 1U) block.push_back(i + 1);
        }
        blocks.push_back(std::move(block));
    }
    return Json{{"name", lattice.element(element).name},
                {"codim", lattice.codim(element)},
                {"blocks", blocks}};
}

namespace {

linalg::Rational rational_from_json(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return linalg::Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return linalg::parse_rational(j.get<std::string>());
        } catch (const InputError& e) {
            field_error(where, e.what());
        }
    }
    field_error(where, "coefficients must be integers or strings like \"-3/2\"");
}

Json rational_to_json(const linalg::Rational& q) {
    if (denominator(q) == 1 && abs(numerator(q)) < boost::multiprecision::cpp_int(1) << 62) {
        return static_cast<std::int64_t>(numerator(q));
    }
    return linalg::to_string(q);
}

}  // namespace

weightalg::VarietyDescriptor variety_from_json(const Json& j) {
    weightalg::VarietyDescriptor x;
    const auto& name = require(j, "name", "");
    if (!name.is_string()) field_error("name", "expected a string");
    x.name = name.get<std::string>();
    x.d = require_int(require(j, "d", ""), "d");
    if (j.contains("q")) {
        if (!j["q"].is_number_integer()) field_error("q", "expected an integer");
        x.q = j["q"].get<std::int64_t>();
    }
    const auto& flag = require(j, "diagonal_class_vanishes", "");
    if (!flag.is_boolean()) field_error("diagonal_class_vanishes", "expected a boolean");
    x.diagonal_class_vanishes = flag.get<bool>();
    const auto& coh = require(j, "cohomology", "");
    if (!coh.is_object()) field_error("cohomology", "expected an object keyed by degree");
    for (auto it = coh.begin(); it != coh.end(); ++it) {
        const std::string where = "cohomology." + it.key();
        int degree = 0;
        try {
            std::size_t used = 0;
            degree = std::stoi(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            field_error(where, "degree keys must be integers");
        }
        const auto& entries = require_array(it.value(), where);
        for (std::size_t e = 0; e < entries.size(); ++e) {
            const std::string at = path(where, e);
            const int w = require_int(require(entries[e], "weight", at), path(at, "weight"));
            const int m = require_int(require(entries[e], "mult", at), path(at, "mult"));
            if (m <= 0) field_error(path(at, "mult"), "must be positive");
            try {
                x.cohomology.add(degree, w, m);
            } catch (const InputError& err) {
                field_error(at, err.what());
            }
        }
    }
    if (j.contains("products")) {
        const auto& prods = require_array(j["products"], "products");
        for (std::size_t p = 0; p < prods.size(); ++p) {
            const std::string at = path("products", p);
            weightalg::ProductRule rule;
            const auto& l = require(prods[p], "left", at);
            const auto& r = require(prods[p], "right", at);
            if (!l.is_string() || !r.is_string()) field_error(at, "left and right must name basis classes like \"1.0\"");
            rule.left = l.get<std::string>();
            rule.right = r.get<std::string>();
            const auto& terms = require_array(require(prods[p], "terms", at), path(at, "terms"));
            for (std::size_t t = 0; t < terms.size(); ++t) {
                const std::string tat = path(path(at, "terms"), t);
                const auto& b = require(terms[t], "basis", tat);
                if (!b.is_string()) field_error(path(tat, "basis"), "expected a class name");
                rule.terms.emplace_back(b.get<std::string>(), rational_from_json(require(terms[t], "coeff", tat), path(tat, "coeff")));
            }
            x.products.push_back(std::move(rule));
        }
    }
    weightalg::validate(x);
    return x;
}

Json weights_to_json(const weightalg::WeightMultiset& w) {
    Json out = Json::array();
    for (auto [weight, mult] : w.entries()) out.push_back(Json{{"weight", weight}, {"mult", mult}});
    return out;
}

Json space_to_json(const weightalg::WeightedGradedSpace& space) {
    Json out = Json::object();
    for (const auto& [degree, w] : space.by_degree()) out[std::to_string(degree)] = weights_to_json(w);
    return out;
}

koszul::QuadraticPresentation quadratic_from_json(const Json& j) {
    koszul::QuadraticPresentation p;
    p.generators = require_int(require(j, "generators", ""), "generators");
    if (p.generators < 0) field_error("generators", "must be non-negative");
    if (j.contains("convention")) {
        if (!j["convention"].is_string()) field_error("convention", "expected a string");
        try {
            p.convention = koszul::parse_convention(j["convention"].get<std::string>());
        } catch (const InputError& e) {
            field_error("convention", e.what());
        }
    }
    if (j.contains("regrading")) {
        if (!j["regrading"].is_string()) field_error("regrading", "expected a string");
        p.regrading = j["regrading"].get<std::string>();
    }
    const auto& rels = require_array(require(j, "relations", ""), "relations");
    const std::size_t dim = static_cast<std::size_t>(p.generators) * static_cast<std::size_t>(p.generators);
    for (std::size_t r = 0; r < rels.size(); ++r) {
        const std::string at = path("relations", r);
        require_array(rels[r], at);
        if (rels[r].size() != dim) {
            field_error(at, "expected g² = " + std::to_string(dim) + " coefficients, found " + std::to_string(rels[r].size()));
        }
        std::vector<linalg::Rational> v;
        for (std::size_t c = 0; c < rels[r].size(); ++c) v.push_back(rational_from_json(rels[r][c], path(at, c)));
        p.relations.push_back(std::move(v));
    }
    koszul::validate(p);
    return p;
}

Json quadratic_to_json(const koszul::QuadraticPresentation& p) {
    Json rels = Json::array();
    for (const auto& r : p.relations) {
        Json row = Json::array();
        for (const auto& c : r) row.push_back(rational_to_json(c));
        rels.push_back(std::move(row));
    }
    return Json{{"generators", p.generators},
                {"convention", koszul::to_string(p.convention)},
                {"regrading", p.regrading},
                {"relations", rels}};
}

Json stratum_to_json(const confcat::Stratum& s) { return Json{{"forest", forest_to_json(s.forest)}, {"codim", s.codim}}; }

}  // namespace confstrata::io
