#ifndef ARITHDYN_EXACT_RANK_HPP
#define ARITHDYN_EXACT_RANK_HPP

#include "arithdyn/qpoly.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace arithdyn::experiments {

using qpoly::Integer;
using qpoly::Rational;

/// Dense integer matrix, row-major.
struct IntegerMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Integer> data;

    IntegerMatrix() = default;
    IntegerMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
    Integer &at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    const Integer &at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// Each row multiplied by the lcm of its denominators. Row scaling keeps
/// both rank and kernel.
IntegerMatrix clear_row_denominators(const std::vector<std::vector<Rational>> &rows);

struct EliminationResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_columns;
    /// Primitive integer generator of the kernel for the first free column
    /// of the reduced row echelon form (first nonzero entry positive).
    /// Empty when the columns are independent.
    std::optional<std::vector<Integer>> kernel_vector;
};

/// Fraction-free Gauss-Jordan elimination (every division exact, by the
/// previous pivot). Pivot rows are chosen by smallest bit length, ties to
/// the lowest index. The reduced form, and so the kernel vector, does not
/// depend on the row order of the input.
EliminationResult fraction_free_reduce(IntegerMatrix m);

}  // namespace arithdyn::experiments

#endif  // ARITHDYN_EXACT_RANK_HPP
