#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "confstrata/cli.hpp"
#include "confstrata/confcat.hpp"
#include "confstrata/errors.hpp"
#include "confstrata/io.hpp"
#include "confstrata/koszul.hpp"
#include "confstrata/weightalg.hpp"
#include "confstrata/wonderful.hpp"

namespace py = pybind11;
using namespace confstrata;

namespace {

using Blocks = std::vector<std::vector<Label>>;

Blocks blocks_of(const forests::Forest& f) {
    Blocks out;
    for (auto b : f.blocks()) out.push_back(f.labels(b));
    return out;
}

forests::Forest make_forest(const std::vector<Label>& ground, const Blocks& blocks) {
    return forests::Forest::from_labels(setcat::FiniteSet(ground), blocks);
}

py::dict functor_dict(const confcat::FunctorReport& r) {
    py::dict d;
    d["chains"] = r.chains;
    d["pairs"] = r.pairs;
    d["quotient_failures"] = r.quotient_failures;
    d["poset_map_failures"] = r.poset_failures;
    d["identity_checks"] = r.identity_checks;
    d["identity_failures"] = r.identity_failures;
    d["counterexamples"] = r.counterexamples;
    d["pass"] = r.ok();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Forests, nests, strata and weight/Koszul computations";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
    py::register_exception<HypothesisRefused>(m, "HypothesisRefused", PyExc_ValueError);
    py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);

    m.def(
        "enumerate_forests",
        [](int n, bool uncapped) {
            std::vector<Blocks> out;
            for (const auto& f : forests::enumerate_forests(n, uncapped)) out.push_back(blocks_of(f));
            return out;
        },
        py::arg("n"), py::arg("uncapped") = false);
    m.def(
        "forest_count", [](int n, bool uncapped) { return forests::enumerate_forests(n, uncapped).size(); }, py::arg("n"),
        py::arg("uncapped") = false);
    m.def(
        "is_forest",
        [](const std::vector<Label>& ground, const Blocks& blocks) {
            return forests::is_forest(setcat::FiniteSet(ground), blocks);
        },
        py::arg("ground"), py::arg("blocks"));
    m.def(
        "poset_round_trip",
        [](const std::vector<Label>& ground, const Blocks& blocks) {
            const auto f = make_forest(ground, blocks);
            return forests::from_poset(forests::to_poset(f)) == f;
        },
        py::arg("ground"), py::arg("blocks"));
    m.def(
        "forest_dot", [](const std::vector<Label>& ground, const Blocks& blocks) { return forests::to_dot(make_forest(ground, blocks)); },
        py::arg("ground"), py::arg("blocks"));

    m.def("nest_count", &wonderful::nest_count, py::arg("n"), py::arg("d") = 1, py::arg("uncapped") = false);
    m.def(
        "default_order",
        [](int n, int d) {
            const auto b = wonderful::BuildingSet::full_diagonal(n, d);
            std::vector<std::string> names;
            for (auto i : wonderful::default_order(b).order) names.push_back(b.lattice().element(i).name);
            return names;
        },
        py::arg("n"), py::arg("d") = 1);
    m.def(
        "validate_li_order",
        [](int n, int d, const std::vector<std::vector<int>>& order) {
            const auto full = wonderful::BuildingSet::full_diagonal(n, d);
            io::Json list = io::Json::array();
            for (const auto& u : order) list.push_back(u);
            const auto idx = io::order_from_json(full, list);
            const auto v = wonderful::validate_li_order(full.lattice(), idx);
            py::dict out;
            out["valid"] = v.ok;
            out["failing_prefix"] = v.failing_prefix;
            out["reason"] = v.reason;
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("order"));

    m.def(
        "stratum_intersect",
        [](const std::vector<Label>& ground, const Blocks& a, const Blocks& b) -> std::optional<py::dict> {
            const auto s = confcat::stratum_intersect(make_forest(ground, a), make_forest(ground, b));
            if (!s) return std::nullopt;
            py::dict d;
            d["blocks"] = blocks_of(s->forest);
            d["codim"] = s->codim;
            return d;
        },
        py::arg("ground"), py::arg("a"), py::arg("b"));
    m.def(
        "strata_poset",
        [](int n, bool uncapped) {
            const auto p = confcat::strata_poset(n, uncapped);
            py::dict d;
            std::vector<Blocks> strata;
            std::vector<int> codims;
            for (const auto& s : p.strata) {
                strata.push_back(blocks_of(s.forest));
                codims.push_back(s.codim);
            }
            d["strata"] = strata;
            d["codims"] = codims;
            d["covers"] = p.covers;
            d["dot"] = confcat::strata_dot(p);
            return d;
        },
        py::arg("n"), py::arg("uncapped") = false);
    m.def(
        "check_level_functor",
        [](int max_level, int max_size, bool poset_maps) {
            return functor_dict(confcat::check_level_functor(max_level, max_size, poset_maps));
        },
        py::arg("max_level"), py::arg("max_size"), py::arg("compare_poset_maps") = true);
    m.def(
        "check_con_functor", [](int max_level, int max_size) { return functor_dict(confcat::check_con_functor(max_level, max_size)); },
        py::arg("max_level"), py::arg("max_size"));
    m.def(
        "check_simplicial_identities",
        [](int max_level, int max_size) {
            const auto r = setcat::check_simplicial_identities(max_level, max_size);
            py::dict d;
            d["chains"] = r.chains;
            d["checks"] = r.checks;
            d["failures"] = r.failures;
            d["pass"] = r.ok();
            return d;
        },
        py::arg("max_level"), py::arg("max_size"));

    m.def(
        "_hilbert_series",
        [](const std::string& variety, int n, int truncation) {
            const auto x = io::variety_from_json(io::parse_json(variety, "variety"));
            return weightalg::hilbert_series(weightalg::presentation(x, n), truncation).coefficients();
        },
        py::arg("variety"), py::arg("n"), py::arg("truncation"));
    m.def(
        "_purity_check",
        [](const std::string& variety, int n, int truncation) {
            const auto x = io::variety_from_json(io::parse_json(variety, "variety"));
            const auto v = weightalg::purity_theorem_check(x, n, truncation);
            const auto r = weightalg::conf2_purity_report(x);
            py::dict d;
            d["pure"] = v.pure;
            d["generators_pure"] = v.generators_pure;
            d["series"] = v.series.coefficients();
            d["first_violation"] = v.first_violation;
            d["conf2_middle_betti"] = std::make_pair(r.middle_betti.low, r.middle_betti.high);
            d["conf2_middle_pure"] = r.middle_pure;
            return d;
        },
        py::arg("variety"), py::arg("n"), py::arg("truncation"));
    m.def(
        "_koszul_criterion",
        [](const std::string& presentation, int truncation) {
            const auto p = io::quadratic_from_json(io::parse_json(presentation, "presentation"));
            const auto v = koszul::koszul_criterion(p, truncation);
            py::dict d;
            d["pass"] = v.pass;
            d["h_a"] = v.h_a;
            d["h_dual"] = v.h_dual;
            d["product"] = v.product;
            d["first_discrepancy"] = v.first_discrepancy;
            d["text"] = v.text;
            d["dual"] = io::quadratic_to_json(koszul::quadratic_dual(p)).dump();
            return d;
        },
        py::arg("presentation"), py::arg("truncation"));

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full = {"confstrata"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out;
            std::ostringstream err;
            auto parsed = cli::parse_args(static_cast<int>(argv.size()), argv.data(), out, err);
            const int code = parsed.config ? cli::run(*parsed.config, out, err) : parsed.exit_code;
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run a CLI subcommand; returns (exit code, stdout, stderr).");
}
