// One PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "confstrata/confcat.hpp"
#include "confstrata/errors.hpp"
#include "confstrata/io.hpp"
#include "confstrata/koszul.hpp"
#include "confstrata/weightalg.hpp"
#include "confstrata/wonderful.hpp"

using namespace confstrata;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& title, double budget_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = budget_seconds <= 0 || secs < budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << secs << "s";
    if (budget_seconds > 0) t << " of " << budget_seconds << "s";
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << number << ": " << title << " [" << o.detail << "] (" << t.str()
              << ")" << std::endl;
}

std::vector<std::int64_t> distinct_second_index_count(int n, int N) {
    std::vector<std::pair<int, int>> pairs;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < j; ++i) pairs.emplace_back(i, j);
    }
    std::vector<std::int64_t> out(N + 1, 0);
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << pairs.size()); ++pick) {
        std::uint64_t seconds = 0;
        bool ok = true;
        int k = 0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (!((pick >> p) & 1U)) continue;
            const auto s = std::uint64_t{1} << pairs[p].second;
            ok = ok && !(seconds & s);
            seconds |= s;
            ++k;
        }
        if (ok && 2 * k <= N) ++out[2 * k];
    }
    return out;
}

}  // namespace

int main() {
    criterion(1, "forest/nest bijection, n = 1..5", 60, [] {
        std::ostringstream d;
        bool ok = true;
        for (int n = 1; n <= 5; ++n) {
            const auto forests = static_cast<std::int64_t>(forests::enumerate_forests(n).size());
            const auto nonempty = wonderful::nest_count(n, 1) - 1;
            ok = ok && forests == 1 + nonempty;
            d << (n > 1 ? ", " : "") << "n=" << n << ": " << forests << " = 1 + " << nonempty;
        }
        return Outcome{ok, d.str()};
    });

    criterion(2, "poset round trip on forests with <= 4 elements", 10, [] {
        std::int64_t checked = 0;
        bool ok = true;
        for (int n = 0; n <= 4; ++n) {
            for (const auto& f : forests::enumerate_forests(n)) {
                const auto p = forests::to_poset(f);
                ok = ok && p.forest_violations().empty() && forests::from_poset(p) == f;
                ++checked;
            }
        }
        return Outcome{ok, std::to_string(checked) + " forests"};
    });

    criterion(3, "functoriality of F and con, simplicial identities, k <= 3, |S_i| <= 3", 120, [] {
        const auto f = confcat::check_level_functor(3, 3, true);
        const auto s = setcat::check_simplicial_identities(3, 3);
        const auto c = confcat::check_con_functor(3, 2);
        std::ostringstream d;
        d << f.pairs << " composable pairs, " << f.quotient_failures << " failures up to equal pullbacks, "
          << f.identity_failures << " identity failures; con via stratum maps (|S_i| <= 2): " << c.pairs << " pairs, "
          << c.quotient_failures << " failures; simplicial: " << s.checks << " checks, " << s.failures
          << " failures; informational: " << f.poset_failures << " pairs differ as poset maps";
        return Outcome{f.ok() && s.ok() && c.ok(), d.str()};
    });

    criterion(4, "stratum codimension (n <= 5) and intersection (n <= 4)", 0, [] {
        bool ok = true;
        std::int64_t pairs = 0;
        for (int n = 0; n <= 5; ++n) {
            for (const auto& f : forests::enumerate_forests(n)) ok = ok && confcat::stratum_codim(f) == f.non_singleton_count();
        }
        for (int n = 0; n <= 4; ++n) {
            const auto all = forests::enumerate_forests(n);
            for (const auto& a : all) {
                for (const auto& b : all) {
                    const auto s = confcat::stratum_intersect(a, b);
                    const auto u = forests::union_if_forest(a, b);
                    ok = ok && s.has_value() == u.has_value() && (!s || (s->forest == *u && s->codim == u->non_singleton_count()));
                    ++pairs;
                }
            }
        }
        return Outcome{ok, std::to_string(pairs) + " intersections"};
    });

    criterion(5, "blow-up orders: increasing dimension valid for n <= 5; pairwise first fails at prefix 3", 0, [] {
        bool ok = true;
        for (int n = 2; n <= 5; ++n) ok = ok && wonderful::validate_li_order(wonderful::default_order(wonderful::BuildingSet::full_diagonal(n, 1))).ok;
        const auto b = wonderful::BuildingSet::full_diagonal(3, 1);
        const auto& l = b.lattice();
        std::vector<std::size_t> order;
        for (auto u : {0b011ULL, 0b101ULL, 0b110ULL, 0b111ULL}) order.push_back(*l.diagonal_index(u));
        const auto v = wonderful::validate_li_order(l, order);
        ok = ok && !v.ok && v.failing_prefix == 3;
        return Outcome{ok, "pairwise order fails at prefix " + std::to_string(v.failing_prefix)};
    });

    criterion(6, "Thom relative weights and Conf_2 purity for an elliptic curve", 0, [] {
        const auto x = weightalg::elliptic_curve();
        bool ok = true;
        std::ostringstream d;
        for (int k = 2; k <= 6; ++k) {
            const auto w = weightalg::thom_relative(x, k);
            ok = ok && w.is_pure(k) && w.total() == x.cohomology.betti(k - 2);
            d << "k=" << k << ": " << weightalg::to_string(w) << "; ";
        }
        const auto r = weightalg::conf2_purity_report(x);
        ok = ok && r.middle_pure && r.middle_bound.is_pure(2);
        d << "H^2(Conf_2) weights " << weightalg::to_string(r.middle_bound);
        return Outcome{ok, d.str()};
    });

    criterion(7, "Hilbert series of Conf_n(A¹ × R), n = 2, 3, 4", 120, [] {
        const auto x = weightalg::affine_line();
        const auto h2 = weightalg::hilbert_series(weightalg::presentation(x, 2), 8).coefficients();
        const auto h3 = weightalg::hilbert_series(weightalg::presentation(x, 3), 8).coefficients();
        const auto h4 = weightalg::hilbert_series(weightalg::presentation(x, 4), 8).coefficients();
        const bool ok = h2 == std::vector<std::int64_t>{1, 0, 1, 0, 0, 0, 0, 0, 0} &&
                        h3 == std::vector<std::int64_t>{1, 0, 3, 0, 2, 0, 0, 0, 0} && h4 == distinct_second_index_count(4, 8);
        std::ostringstream d;
        d << "n=4:";
        for (auto c : h4) d << " " << c;
        return Outcome{ok, d.str()};
    });

    criterion(8, "purity theorem: elliptic n <= 3, affine line n <= 4, corrupted input refused", 0, [] {
        bool ok = true;
        for (int n = 1; n <= 3; ++n) ok = ok && weightalg::purity_theorem_check(weightalg::elliptic_curve(), n, 8).pure;
        for (int n = 1; n <= 4; ++n) ok = ok && weightalg::purity_theorem_check(weightalg::affine_line(), n, 8).pure;
        auto bad = weightalg::elliptic_curve();
        bad.products.clear();
        bad.cohomology = weightalg::WeightedGradedSpace();
        bad.cohomology.add(0, 0, 1);
        bad.cohomology.add(1, 0, 2);
        bad.cohomology.add(2, 2, 1);
        bool refused = false;
        try {
            weightalg::purity_theorem_check(bad, 2, 8);
        } catch (const HypothesisRefused&) {
            refused = true;
        }
        return Outcome{ok && refused, refused ? "refusal raised" : "no refusal"};
    });

    criterion(9, "Koszul criterion: genus-1 presentation to t^10, symmetric/exterior g <= 4", 0, [] {
        koszul::QuadraticPresentation genus1;
        genus1.generators = 2;
        genus1.convention = koszul::Convention::graded_commutative;
        genus1.relations = {{1, 0, 0, 0}, {0, 0, 0, 1}};
        const auto v = koszul::koszul_criterion(genus1, 10);
        bool ok = v.pass && v.product == koszul::TruncatedSeries{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
        for (int g = 1; g <= 4; ++g) {
            ok = ok && koszul::koszul_criterion(koszul::symmetric_algebra(g), 10).pass &&
                 koszul::koszul_criterion(koszul::exterior_algebra(g), 10).pass;
        }
        return Outcome{ok, v.text};
    });

    return failures == 0 ? 0 : 1;
}
