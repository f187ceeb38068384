#include "arithdyn/exact_rank.hpp"

#include <algorithm>
#include <stdexcept>

namespace arithdyn::experiments {

IntegerMatrix clear_row_denominators(const std::vector<std::vector<Rational>> &rows)
{
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    IntegerMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw std::invalid_argument("ragged matrix");
        Integer l = 1;
        for (const auto &x : rows[i])
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < cols; ++j) {
            Integer v;
            mpz_divexact(v.get_mpz_t(), l.get_mpz_t(), rows[i][j].get_den_mpz_t());
            m.at(i, j) = v * rows[i][j].get_num();
        }
    }
    return m;
}

EliminationResult fraction_free_reduce(IntegerMatrix m)
{
    EliminationResult out;
    Integer previous = 1;
    std::size_t r = 0;
    Integer scratch;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t pivot = m.rows;
        std::size_t best_bits = 0;
        for (std::size_t i = r; i < m.rows; ++i) {
            if (m.at(i, c) == 0)
                continue;
            const auto bits = mpz_sizeinbase(m.at(i, c).get_mpz_t(), 2);
            if (pivot == m.rows || bits < best_bits) {
                pivot = i;
                best_bits = bits;
            }
        }
        if (pivot == m.rows)
            continue;
        if (pivot != r)
            for (std::size_t j = 0; j < m.cols; ++j)
                std::swap(m.at(pivot, j), m.at(r, j));

        const Integer p = m.at(r, c);
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r)
                continue;
            const Integer factor = m.at(i, c);
            for (std::size_t j = 0; j < m.cols; ++j) {
                // a_ij <- (p a_ij - a_ic a_rj) / previous, exact by Sylvester's identity.
                scratch = p * m.at(i, j);
                mpz_submul(scratch.get_mpz_t(), factor.get_mpz_t(), m.at(r, j).get_mpz_t());
                mpz_divexact(m.at(i, j).get_mpz_t(), scratch.get_mpz_t(), previous.get_mpz_t());
            }
        }
        previous = p;
        out.pivot_columns.push_back(c);
        ++r;
    }
    out.rank = r;

    if (out.rank < m.cols) {
        // Every pivot entry now equals `previous`, so the reduced row echelon
        // form is m / previous. Scaling the kernel vector by `previous` keeps
        // it integral.
        std::size_t free_col = 0;
        while (std::find(out.pivot_columns.begin(), out.pivot_columns.end(), free_col) != out.pivot_columns.end())
            ++free_col;
        std::vector<Integer> v(m.cols, 0);
        v[free_col] = previous;
        for (std::size_t k = 0; k < out.pivot_columns.size(); ++k)
            v[out.pivot_columns[k]] = -m.at(k, free_col);

        Integer g = 0;
        for (const auto &x : v)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        const auto first = std::find_if(v.begin(), v.end(), [](const Integer &x) { return x != 0; });
        if (*first < 0)
            g = -g;
        for (auto &x : v)
            mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
        out.kernel_vector = std::move(v);
    }
    return out;
}

}  // namespace arithdyn::experiments
