#include "confstrata/linalg.hpp"

#include <algorithm>

#include "confstrata/errors.hpp"

namespace confstrata::linalg {

Rational parse_rational(const std::string& text) {
    try {
        auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
        boost::multiprecision::cpp_int num(text.substr(0, slash));
        boost::multiprecision::cpp_int den(text.substr(slash + 1));
        if (den == 0) throw InputError("zero denominator in " + text);
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw InputError("not a rational number: " + text);
    }
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

Echelon::Echelon(std::size_t columns) : pivot_row_(columns, -1) {}

namespace {

// row -= factor * pivot, both sorted.
void subtract_multiple(SparseRow& row, const Rational& factor, const SparseRow& pivot) {
    SparseRow out;
    out.reserve(row.size() + pivot.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < row.size() || b < pivot.size()) {
        if (b == pivot.size() || (a < row.size() && row[a].first < pivot[b].first)) {
            out.push_back(std::move(row[a++]));
        } else if (a == row.size() || pivot[b].first < row[a].first) {
            out.emplace_back(pivot[b].first, -factor * pivot[b].second);
            ++b;
        } else {
            Rational v = row[a].second - factor * pivot[b].second;
            if (v != 0) out.emplace_back(row[a].first, std::move(v));
            ++a;
            ++b;
        }
    }
    row = std::move(out);
}

}  // namespace

SparseRow Echelon::reduce(SparseRow row) const {
    std::size_t pos = 0;
    while (pos < row.size()) {
        const auto col = row[pos].first;
        const auto p = pivot_row_[col];
        if (p < 0) {
            ++pos;
            continue;
        }
        const Rational factor = row[pos].second;
        subtract_multiple(row, factor, rows_[static_cast<std::size_t>(p)]);
        // Entries before pos are untouched since pivot rows start at col.
    }
    return row;
}

bool Echelon::insert(SparseRow row) {
    for (const auto& [c, v] : row) {
        if (c >= pivot_row_.size()) throw InputError("row entry outside the column range");
    }
    row = reduce(std::move(row));
    if (row.empty()) return false;
    const Rational lead = row.front().second;
    for (auto& entry : row) entry.second /= lead;
    pivot_row_[row.front().first] = static_cast<std::int32_t>(rows_.size());
    rows_.push_back(std::move(row));
    return true;
}

namespace {

SparseRow sparse(const std::vector<Rational>& dense) {
    SparseRow row;
    for (std::size_t c = 0; c < dense.size(); ++c) {
        if (dense[c] != 0) row.emplace_back(static_cast<std::uint32_t>(c), dense[c]);
    }
    return row;
}

}  // namespace

std::size_t rank(const DenseMatrix& rows, std::size_t columns) {
    Echelon e(columns);
    for (const auto& r : rows) {
        if (r.size() != columns) throw InputError("matrix row has the wrong length");
        e.insert(sparse(r));
    }
    return e.rank();
}

DenseMatrix nullspace(const DenseMatrix& rows, std::size_t columns) {
    // Reduced row echelon form, then one basis vector per free column.
    DenseMatrix m = rows;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < columns && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[r]);
        const Rational lead = m[r][c];
        for (auto& v : m[r]) v /= lead;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t k = 0; k < columns; ++k) m[i][k] -= f * m[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(columns, false);
    for (auto c : pivots) is_pivot[c] = true;
    DenseMatrix basis;
    for (std::size_t free = 0; free < columns; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(columns, 0);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace confstrata::linalg
