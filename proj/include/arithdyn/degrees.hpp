#ifndef ARITHDYN_DEGREES_HPP
#define ARITHDYN_DEGREES_HPP

#include "arithdyn/maps.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace arithdyn::degrees {

using maps::TriangularMap;

/// Square matrix of nonnegative integers, row-major, 1-based accessors.
/// As a degree matrix, entry (i, j) is deg_{x_i} f_j.
class DegreeMatrix {
public:
    DegreeMatrix() = default;
    explicit DegreeMatrix(std::size_t size) : size_(size), entries_(size * size, 0) {}
    DegreeMatrix(std::size_t size, std::vector<std::uint64_t> row_major);

    static DegreeMatrix identity(std::size_t size);

    std::size_t size() const noexcept { return size_; }
    std::uint64_t operator()(std::size_t i, std::size_t j) const { return entries_[(i - 1) * size_ + (j - 1)]; }
    std::uint64_t &operator()(std::size_t i, std::size_t j) { return entries_[(i - 1) * size_ + (j - 1)]; }
    const std::vector<std::uint64_t> &entries() const noexcept { return entries_; }

    bool is_lower_triangular() const;
    bool is_upper_triangular() const;
    std::uint64_t max_diagonal() const;
    std::vector<std::uint64_t> diagonal() const;

    /// Entrywise A <= B.
    bool entrywise_leq(const DegreeMatrix &other) const;

    friend bool operator==(const DegreeMatrix &, const DegreeMatrix &) = default;

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> entries_;
};

/// Throws std::overflow_error if an entry leaves 64 bits.
DegreeMatrix operator*(const DegreeMatrix &a, const DegreeMatrix &b);
DegreeMatrix power(const DegreeMatrix &a, unsigned n);

/// Integer CSV block, one row per line.
void write_matrix_csv(std::ostream &os, const DegreeMatrix &m);

DegreeMatrix degree_matrix(const TriangularMap &f);

/// deg(f) := max_i total_degree(f_i). Some component attains the max, so
/// the homogenized tuple [X_0^d : F_1 : ... : F_N] has no common factor and
/// this is the degree of the induced self-map of projective space.
std::uint64_t map_degree(const TriangularMap &f);

struct CompositionBoundsReport {
    DegreeMatrix deg_f;
    DegreeMatrix deg_g;
    DegreeMatrix deg_composite;  // Deg(f o g)
    DegreeMatrix bound;          // Deg(g) * Deg(f)
    bool upper_bound_holds = false;
    bool diagonal_product_holds = false;
    bool passed() const { return upper_bound_holds && diagonal_product_holds; }
};

/// Deg(f o g) <= Deg(g) Deg(f) entrywise, with equality
/// (Deg(f o g))_{i,i} = d_{i,i} d'_{i,i} on the diagonal.
CompositionBoundsReport check_composition_bounds(const TriangularMap &f, const TriangularMap &g,
                                                 const maps::ResourceLimits &limits = {});

/// delta_f = max_i d_{i,i} for triangular maps.
std::uint64_t dynamical_degree_exact(const TriangularMap &f);

struct DegreeSequenceRow {
    std::size_t n;
    std::uint64_t degree;  // deg(f^n)
    double root;           // deg(f^n)^{1/n}
};

struct DegreeSequenceEstimate {
    std::vector<DegreeSequenceRow> rows;
    std::optional<double> limit_claim;  // last root when the run completed
    bool truncated = false;             // resource cap stopped the run early
    std::string truncation_reason;

    /// deg(f^{m+n}) <= deg(f^m) deg(f^n) over all recorded pairs.
    bool submultiplicative() const;
};

inline constexpr std::size_t default_sequence_length = 6;

/// deg(f^n) for n = 1..n_max by symbolic iteration. A resource overrun
/// returns the computed prefix with `truncated` set.
DegreeSequenceEstimate dynamical_degree_sequence(const TriangularMap &f, std::size_t n_max = default_sequence_length,
                                                 const maps::ResourceLimits &limits = {});

void write_sequence_csv(std::ostream &os, const DegreeSequenceEstimate &seq);

struct SpectralRadiusEstimate {
    std::vector<double> roots;          // roots[n-1] = max_{i,j} (A^n)_{i,j}^{1/n}
    double last = 0.0;
    std::optional<std::uint64_t> exact;  // max diagonal, when A is triangular
};

/// Max-entry n-th roots of A^n with exact big-integer powers.
SpectralRadiusEstimate spectral_radius_maxroot(const DegreeMatrix &a, std::size_t n_max);

struct ProductDegreeReport {
    std::uint64_t delta_f;
    std::uint64_t delta_g;
    std::uint64_t exact;          // max(delta_f, delta_g)
    std::uint64_t product_delta;  // dynamical_degree_exact(f x g)
    bool consistent() const { return exact == product_delta; }
};

ProductDegreeReport product_dynamical_degree(const TriangularMap &f, const TriangularMap &g);

}  // namespace arithdyn::degrees

#endif  // ARITHDYN_DEGREES_HPP
