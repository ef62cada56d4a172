#ifndef PFQED_LINALG_SPARSE_HPP
#define PFQED_LINALG_SPARSE_HPP

#include "pfqed/core/error.hpp"
#include "pfqed/linalg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pfqed::linalg {

struct Triplet
{
    std::size_t row;
    std::size_t col;
    double value;
};

class SparseBuilder;

/// Real symmetric sparse matrix holding only its upper triangle
/// (row <= col), sorted row-major and compressed by row. Immutable once
/// built; the symmetric completion is implied.
class SparseSymmetric
{
public:
    SparseSymmetric() = default;

    std::size_t order() const noexcept { return m_order; }
    std::size_t stored_entries() const noexcept { return m_values.size(); }

    std::span<const std::size_t> row_offsets() const noexcept { return m_row_offsets; }
    std::span<const std::uint32_t> columns() const noexcept { return m_columns; }
    std::span<const double> values() const noexcept { return m_values; }

    /// y = A x. Summation order is fixed, so results are reproducible.
    void apply(std::span<const double> x, std::span<double> y) const
    {
        std::fill(y.begin(), y.end(), 0.0);
        for(std::size_t i = 0; i < m_order; ++i)
        {
            const double xi = x[i];
            double acc = 0.0;
            for(std::size_t p = m_row_offsets[i]; p < m_row_offsets[i + 1]; ++p)
            {
                const std::size_t j = m_columns[p];
                const double v = m_values[p];
                if(j == i)
                {
                    acc += v * xi;
                }
                else
                {
                    acc += v * x[j];
                    y[j] += v * xi;
                }
            }
            y[i] += acc;
        }
    }

    /// Stored value at (i,j) in either triangle, zero if absent.
    double at(std::size_t i, std::size_t j) const
    {
        if(i > j) std::swap(i, j);
        const auto first = m_columns.begin() + static_cast<std::ptrdiff_t>(m_row_offsets[i]);
        const auto last = m_columns.begin() + static_cast<std::ptrdiff_t>(m_row_offsets[i + 1]);
        const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
        if(it == last || *it != j) return 0.0;
        return m_values[static_cast<std::size_t>(it - m_columns.begin())];
    }

    /// Largest |col - row| over stored entries.
    std::size_t bandwidth() const noexcept
    {
        std::size_t bw = 0;
        for(std::size_t i = 0; i < m_order; ++i)
            if(m_row_offsets[i + 1] > m_row_offsets[i]) bw = std::max<std::size_t>(bw, m_columns[m_row_offsets[i + 1] - 1] - i);
        return bw;
    }

    /// Upper bound on the spectral radius (Gershgorin).
    double gershgorin_bound() const
    {
        std::vector<double> rows(m_order, 0.0);
        for(std::size_t i = 0; i < m_order; ++i)
            for(std::size_t p = m_row_offsets[i]; p < m_row_offsets[i + 1]; ++p)
            {
                rows[i] += std::abs(m_values[p]);
                if(m_columns[p] != i) rows[m_columns[p]] += std::abs(m_values[p]);
            }
        return m_order ? *std::max_element(rows.begin(), rows.end()) : 0.0;
    }

    SymmetricDense to_dense() const
    {
        SymmetricDense d(static_cast<Eigen::Index>(m_order));
        for(std::size_t i = 0; i < m_order; ++i)
            for(std::size_t p = m_row_offsets[i]; p < m_row_offsets[i + 1]; ++p)
                d.set(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m_columns[p]), m_values[p]);
        return d;
    }

private:
    friend class SparseBuilder;

    std::size_t m_order = 0;
    std::vector<std::size_t> m_row_offsets;
    std::vector<std::uint32_t> m_columns;
    std::vector<double> m_values;
};

/// Write-once assembly buffer for SparseSymmetric. Entries may be added in
/// either triangle and in any order; repeated (row, col) pairs are summed.
class SparseBuilder
{
public:
    explicit SparseBuilder(std::size_t order) : m_order(order)
    {
        detail::require(order >= 1, "SparseBuilder: order must be >= 1");
        detail::require(order <= std::numeric_limits<std::uint32_t>::max(), "SparseBuilder: order too large");
    }

    std::size_t order() const noexcept { return m_order; }

    void reserve(std::size_t n) { m_entries.reserve(n); }

    void add(std::size_t row, std::size_t col, double value)
    {
        if(row >= m_order || col >= m_order)
            throw InvalidArgument("SparseBuilder: index (" + std::to_string(row) + "," + std::to_string(col) +
                                  ") out of range for order " + std::to_string(m_order));
        if(value == 0.0) return;
        if(row > col) std::swap(row, col);
        m_entries.push_back({row, col, value});
    }

    SparseSymmetric build() &&
    {
        std::sort(m_entries.begin(), m_entries.end(),
                  [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

        SparseSymmetric out;
        out.m_order = m_order;
        out.m_row_offsets.assign(m_order + 1, 0);
        out.m_columns.reserve(m_entries.size());
        out.m_values.reserve(m_entries.size());

        for(std::size_t p = 0; p < m_entries.size();)
        {
            const auto [row, col, first] = m_entries[p];
            double sum = first;
            std::size_t q = p + 1;
            for(; q < m_entries.size() && m_entries[q].row == row && m_entries[q].col == col; ++q) sum += m_entries[q].value;
            if(!std::isfinite(sum)) throw InvalidArgument("SparseBuilder: non-finite entry");
            out.m_columns.push_back(static_cast<std::uint32_t>(col));
            out.m_values.push_back(sum);
            ++out.m_row_offsets[row + 1];
            p = q;
        }
        for(std::size_t i = 0; i < m_order; ++i) out.m_row_offsets[i + 1] += out.m_row_offsets[i];

        m_entries.clear();
        m_entries.shrink_to_fit();
        return out;
    }

private:
    std::size_t m_order;
    std::vector<Triplet> m_entries;
};

inline SparseSymmetric diagonal_matrix(std::span<const double> diag)
{
    SparseBuilder b(diag.size());
    for(std::size_t i = 0; i < diag.size(); ++i) b.add(i, i, diag[i]);
    return std::move(b).build();
}

} // namespace pfqed::linalg

#endif // PFQED_LINALG_SPARSE_HPP
