#include "arithdyn/degrees.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace arithdyn::degrees {

namespace {

double log_of(const mpz_class &v)
{
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

// Exact when value is a perfect n-th power, so integer limits print cleanly.
double nth_root(const mpz_class &value, std::size_t n)
{
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), value.get_mpz_t(), n) != 0)
        return r.get_d();
    return std::exp(log_of(value) / static_cast<double>(n));
}

}  // namespace

DegreeMatrix::DegreeMatrix(std::size_t size, std::vector<std::uint64_t> row_major)
    : size_(size), entries_(std::move(row_major))
{
    if (entries_.size() != size * size)
        throw std::invalid_argument("matrix entry count does not match size");
}

DegreeMatrix DegreeMatrix::identity(std::size_t size)
{
    DegreeMatrix m(size);
    for (std::size_t i = 1; i <= size; ++i)
        m(i, i) = 1;
    return m;
}

bool DegreeMatrix::is_lower_triangular() const
{
    for (std::size_t i = 1; i <= size_; ++i)
        for (std::size_t j = i + 1; j <= size_; ++j)
            if ((*this)(i, j) != 0)
                return false;
    return true;
}

bool DegreeMatrix::is_upper_triangular() const
{
    for (std::size_t i = 1; i <= size_; ++i)
        for (std::size_t j = 1; j < i; ++j)
            if ((*this)(i, j) != 0)
                return false;
    return true;
}

std::uint64_t DegreeMatrix::max_diagonal() const
{
    std::uint64_t d = 0;
    for (std::size_t i = 1; i <= size_; ++i)
        d = std::max(d, (*this)(i, i));
    return d;
}

std::vector<std::uint64_t> DegreeMatrix::diagonal() const
{
    std::vector<std::uint64_t> out;
    for (std::size_t i = 1; i <= size_; ++i)
        out.push_back((*this)(i, i));
    return out;
}

bool DegreeMatrix::entrywise_leq(const DegreeMatrix &other) const
{
    if (size_ != other.size_)
        throw std::invalid_argument("matrix size mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k)
        if (entries_[k] > other.entries_[k])
            return false;
    return true;
}

DegreeMatrix operator*(const DegreeMatrix &a, const DegreeMatrix &b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("matrix size mismatch");
    const std::size_t n = a.size();
    DegreeMatrix out(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            std::uint64_t sum = 0;
            for (std::size_t k = 1; k <= n; ++k) {
                std::uint64_t prod = 0;
                if (__builtin_mul_overflow(a(i, k), b(k, j), &prod) || __builtin_add_overflow(sum, prod, &sum))
                    throw std::overflow_error("degree matrix product overflows 64 bits");
            }
            out(i, j) = sum;
        }
    return out;
}

DegreeMatrix power(const DegreeMatrix &a, unsigned n)
{
    DegreeMatrix out = DegreeMatrix::identity(a.size());
    for (unsigned k = 0; k < n; ++k)
        out = out * a;
    return out;
}

void write_matrix_csv(std::ostream &os, const DegreeMatrix &m)
{
    for (std::size_t i = 1; i <= m.size(); ++i) {
        for (std::size_t j = 1; j <= m.size(); ++j)
            os << (j > 1 ? "," : "") << m(i, j);
        os << '\n';
    }
}

DegreeMatrix degree_matrix(const TriangularMap &f)
{
    const std::size_t n = f.dimension();
    DegreeMatrix m(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            m(i, j) = qpoly::degree_in_var(f.component(j), i);
    return m;
}

std::uint64_t map_degree(const TriangularMap &f)
{
    std::uint64_t d = 0;
    for (const auto &c : f.components())
        d = std::max(d, qpoly::total_degree(c));
    return d;
}

CompositionBoundsReport check_composition_bounds(const TriangularMap &f, const TriangularMap &g,
                                                 const maps::ResourceLimits &limits)
{
    CompositionBoundsReport r;
    r.deg_f = degree_matrix(f);
    r.deg_g = degree_matrix(g);
    r.deg_composite = degree_matrix(maps::compose(f, g, limits));
    r.bound = r.deg_g * r.deg_f;
    r.upper_bound_holds = r.deg_composite.entrywise_leq(r.bound);
    r.diagonal_product_holds = true;
    for (std::size_t i = 1; i <= f.dimension(); ++i)
        if (r.deg_composite(i, i) != r.deg_f(i, i) * r.deg_g(i, i))
            r.diagonal_product_holds = false;
    return r;
}

std::uint64_t dynamical_degree_exact(const TriangularMap &f)
{
    return degree_matrix(f).max_diagonal();
}

bool DegreeSequenceEstimate::submultiplicative() const
{
    // rows[k] holds n = k + 1.
    for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; a + b + 1 < rows.size(); ++b) {
            const auto lhs = mpz_class(static_cast<unsigned long>(rows[a + b + 1].degree));
            const auto rhs = mpz_class(static_cast<unsigned long>(rows[a].degree)) *
                             mpz_class(static_cast<unsigned long>(rows[b].degree));
            if (lhs > rhs)
                return false;
        }
    return true;
}

DegreeSequenceEstimate dynamical_degree_sequence(const TriangularMap &f, std::size_t n_max,
                                                 const maps::ResourceLimits &limits)
{
    if (n_max == 0)
        throw std::invalid_argument("dynamical_degree_sequence needs n_max >= 1");
    DegreeSequenceEstimate out;
    TriangularMap current = f;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            try {
                current = maps::compose(f, current, limits);
            } catch (const maps::ResourceExceeded &e) {
                out.truncated = true;
                out.truncation_reason = e.what();
                return out;
            }
        }
        const auto d = map_degree(current);
        out.rows.push_back({n, d, nth_root(mpz_class(static_cast<unsigned long>(d)), n)});
    }
    out.limit_claim = out.rows.back().root;
    return out;
}

void write_sequence_csv(std::ostream &os, const DegreeSequenceEstimate &seq)
{
    os << "n,deg_fn,root\n";
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto &row : seq.rows)
        os << row.n << ',' << row.degree << ',' << row.root << '\n';
    os.precision(old);
}

SpectralRadiusEstimate spectral_radius_maxroot(const DegreeMatrix &a, std::size_t n_max)
{
    if (n_max == 0)
        throw std::invalid_argument("spectral_radius_maxroot needs n_max >= 1");
    const std::size_t m = a.size();
    std::vector<mpz_class> base(m * m), current(m * m), next(m * m);
    for (std::size_t k = 0; k < m * m; ++k)
        base[k] = current[k] = static_cast<unsigned long>(a.entries()[k]);

    SpectralRadiusEstimate out;
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (n > 1) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    mpz_class sum = 0;
                    for (std::size_t k = 0; k < m; ++k)
                        sum += current[i * m + k] * base[k * m + j];
                    next[i * m + j] = sum;
                }
            std::swap(current, next);
        }
        const auto max_entry = *std::max_element(current.begin(), current.end());
        out.roots.push_back(max_entry == 0 ? 0.0 : nth_root(max_entry, n));
    }
    out.last = out.roots.back();
    if (a.is_lower_triangular() || a.is_upper_triangular())
        out.exact = a.max_diagonal();
    return out;
}

ProductDegreeReport product_dynamical_degree(const TriangularMap &f, const TriangularMap &g)
{
    ProductDegreeReport r;
    r.delta_f = dynamical_degree_exact(f);
    r.delta_g = dynamical_degree_exact(g);
    r.exact = std::max(r.delta_f, r.delta_g);
    r.product_delta = dynamical_degree_exact(maps::product_map(f, g));
    return r;
}

}  // namespace arithdyn::degrees
