#pragma once

// Exact sparse linear algebra over Q.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace confstrata::linalg {

using Rational = boost::multiprecision::cpp_rational;

// Sorted by column, no zero entries.
using SparseRow = std::vector<std::pair<std::uint32_t, Rational>>;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

// Row echelon form built one row at a time. Pivot rows are normalized to a
// leading coefficient of 1 but not back-substituted.
class Echelon {
public:
    explicit Echelon(std::size_t columns);

    // Returns true when the row was independent of the rows so far.
    bool insert(SparseRow row);
    // Remainder after eliminating every pivot column.
    [[nodiscard]] SparseRow reduce(SparseRow row) const;

    [[nodiscard]] std::size_t columns() const { return pivot_row_.size(); }
    [[nodiscard]] std::size_t rank() const { return rows_.size(); }
    [[nodiscard]] bool is_pivot(std::size_t column) const { return pivot_row_[column] >= 0; }
    [[nodiscard]] const std::vector<SparseRow>& rows() const { return rows_; }

private:
    std::vector<std::int32_t> pivot_row_;
    std::vector<SparseRow> rows_;
};

using DenseMatrix = std::vector<std::vector<Rational>>;

std::size_t rank(const DenseMatrix& rows, std::size_t columns);
// Basis of { v : row · v = 0 for every row }.
DenseMatrix nullspace(const DenseMatrix& rows, std::size_t columns);

}  // namespace confstrata::linalg
