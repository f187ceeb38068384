#ifndef ARITHDYN_PADIC_HPP
#define ARITHDYN_PADIC_HPP

#include "arithdyn/maps.hpp"

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace arithdyn::padic {

using maps::AffinePoint;
using maps::TriangularMap;
using qpoly::Rational;

/// v_p(x), with +infinity for x = 0. |x|_p = p^{-v_p(x)}.
class Valuation {
public:
    static Valuation infinity() { return Valuation(); }
    explicit Valuation(long value) : value_(value), infinite_(false) {}

    bool is_infinite() const noexcept { return infinite_; }
    /// Throws std::domain_error for +infinity.
    long value() const;

    friend Valuation operator+(const Valuation &a, const Valuation &b);
    friend bool operator==(const Valuation &, const Valuation &) = default;
    friend std::strong_ordering operator<=>(const Valuation &a, const Valuation &b);

private:
    Valuation() = default;
    long value_ = 0;
    bool infinite_ = true;
};

std::ostream &operator<<(std::ostream &os, const Valuation &v);

bool is_prime(std::uint64_t p);

/// Exponent of p in x. Throws std::invalid_argument when p is not prime.
Valuation vp(const Rational &x, std::uint64_t p);

/// Smallest prime >= start dividing no numerator or denominator of any
/// coefficient of f.
std::uint64_t find_unit_prime(const TriangularMap &f, std::uint64_t start = 2);

/// Minimal integer C with C > N * max_{i,j} deg_{x_i} f_j.
std::uint64_t choose_C(const TriangularMap &f);

/// Prime and constant defining the sector
///   U = { |x_i|_p > |x_{i+1}|_p^C > 1 for 1 <= i <= N-1 },
/// and for N = 1, U = { |x_1|_p > 1 }.
struct SectorConfig {
    std::uint64_t prime;
    std::uint64_t C;
    std::size_t dimension;
};

class SectorConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Validates C > N * max deg and that every coefficient is a p-adic unit.
SectorConfig make_sector_config(const TriangularMap &f, std::uint64_t prime, std::uint64_t C);

/// Automatic choice: find_unit_prime(f) and choose_C(f).
SectorConfig auto_sector_config(const TriangularMap &f);

bool in_U(const AffinePoint &point, const SectorConfig &cfg);

/// -v_p of each coordinate ("exponents" e_i of the point). Throws on zero.
std::vector<long> pole_orders(const AffinePoint &point, std::uint64_t p);

/// Deterministic points x_i = a_i / p^{e_i}: a_i a p-adic unit, e_N >= 1,
/// e_i >= C e_{i+1} + 1. Sample k has e_1 offset by k, so the valuation
/// signatures within a batch are pairwise distinct.
std::vector<AffinePoint> sample_U(const SectorConfig &cfg, std::size_t count, std::uint64_t seed);

struct StabilityRow {
    AffinePoint point;
    std::vector<Valuation> before;  // v_p(x_i)
    std::vector<Valuation> after;   // v_p(x_i^{(1)})
    bool image_in_U;
    bool first_coordinate_dominates;  // |x_1^{(1)}|_p = max_i |x_i^{(1)}|_p
    bool passed() const { return image_in_U && first_coordinate_dominates; }
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    bool all_passed() const;
};

class NotInSector : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks f(P) in U and the max condition for each sample (all in U).
StabilityReport verify_stability(const TriangularMap &f, const SectorConfig &cfg,
                                 const std::vector<AffinePoint> &samples);

class LexMaxDegreeMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Lex-maximal monomial of f_i (1-based). Its x_i-exponent must equal
/// d_{i,i}; otherwise LexMaxDegreeMismatch.
qpoly::Monomial dominant_monomial(const TriangularMap &f, std::size_t i);

struct DominantValueRow {
    std::size_t component;  // i, 1-based
    Valuation actual;       // v_p(x_i^{(1)})
    long predicted;         // sum_l e_{i,l} v_p(x_l) over the dominant monomial
    bool holds() const { return actual == Valuation(predicted); }
};

struct DominantValueReport {
    AffinePoint point;
    std::vector<DominantValueRow> rows;
    bool all_hold() const;
};

/// v_p(x_i^{(1)}) = d_{i,i} v_p(x_i) + sum_{l>i} e_{i,l} v_p(x_l), exactly.
DominantValueReport verify_dominant_value(const TriangularMap &f, const SectorConfig &cfg, const AffinePoint &point);

/// True when d_{i,i} > d_{i+1,i+1} for every i.
bool strictly_decreasing_diagonal(const TriangularMap &f);

/// Minimal pole orders m over U: m_N = 1, m_i = C m_{i+1} + 1 (N = 1: m_1 = 1).
std::vector<long> minimal_sector_poles(const SectorConfig &cfg);

/// Lower bound on -v_p(x_1) over f(U): sum_l e_{1,l} m_l.
long image_pole_floor(const TriangularMap &f, const SectorConfig &cfg);

/// P in U with -v_p(x_1) below image_pole_floor, hence P not in f(U).
class NotFirstCase : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

AffinePoint u_minus_fu_witness(const TriangularMap &f, const SectorConfig &cfg);

/// Whether P is certified to lie in U but outside f(U).
bool certified_outside_image(const TriangularMap &f, const SectorConfig &cfg, const AffinePoint &point);

struct GrowthRow {
    std::size_t n;
    Valuation v_x2;   // v_p(x_2^{(n)})
    long predicted;   // d_{2,2}^n v_p(x_2)
    bool stays_in_U;  // |x_2^{(n)}|_p > 1
};

struct GrowthReport {
    std::uint64_t d22 = 0;
    std::vector<GrowthRow> rows;
    bool all_hold() const;
};

class GrowthPrecondition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// N = 2 with d_{1,1} <= d_{2,2} on U = { |x_2|_p > 1 }:
/// v_p(x_2^{(n)}) = d_{2,2}^n v_p(x_2) for n = 0..n_max.
GrowthReport case_n2_growth(const TriangularMap &f, std::uint64_t prime, const AffinePoint &point, std::size_t n_max,
                            const maps::ResourceLimits &limits = {});

}  // namespace arithdyn::padic

#endif  // ARITHDYN_PADIC_HPP
