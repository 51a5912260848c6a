#pragma once

// Quadratic algebras T(V)/(R) with V in degree 1, their quadratic duals, and
// the numerical Koszul criterion H_A(t) · H_{A!}(-t) = 1.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "confstrata/linalg.hpp"

namespace confstrata::koszul {

using linalg::Rational;

enum class Convention {
    free,                 // relations exactly as given
    graded_commutative,   // the convention adds x_a x_b + x_b x_a for a < b
};

std::string to_string(Convention c);
Convention parse_convention(const std::string& text);

struct QuadraticPresentation {
    int generators = 0;
    Convention convention = Convention::free;
    // Each relation has g² coefficients; entry a*g + b belongs to x_a x_b.
    std::vector<std::vector<Rational>> relations;
    std::string regrading = "generators in degree 1";
};

// Throws InputError for wrong lengths, zero or linearly dependent relations.
void validate(const QuadraticPresentation& p);
// The relation space after applying the convention (a basis).
std::vector<std::vector<Rational>> effective_relations(const QuadraticPresentation& p);

// Annihilator of the effective relation space under the standard pairing of
// V⊗V with V*⊗V*; returned under the free convention.
QuadraticPresentation quadratic_dual(const QuadraticPresentation& p);

using TruncatedSeries = std::vector<std::int64_t>;  // c_0..c_N

// dim A_n for n <= N. Throws ResourceLimit past `max_columns` in one degree.
// N <= 40, or 80 when uncapped.
TruncatedSeries hilbert_of_quadratic(const QuadraticPresentation& p, int truncation, std::size_t max_columns = 2000000,
                                     bool uncapped = false);

struct KoszulVerdict {
    bool pass = false;
    int order = 0;
    TruncatedSeries h_a;
    TruncatedSeries h_dual;
    TruncatedSeries product;  // H_A(t) · H_{A!}(-t) mod t^{N+1}
    std::optional<int> first_discrepancy;
    std::string text;
};

// Throws InputError for N < 2.
KoszulVerdict koszul_criterion(const QuadraticPresentation& p, int truncation, bool uncapped = false);

// Standard families for tests and self-checks.
QuadraticPresentation symmetric_algebra(int g);
QuadraticPresentation exterior_algebra(int g);

}  // namespace confstrata::koszul
