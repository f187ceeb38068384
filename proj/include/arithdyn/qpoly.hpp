#ifndef ARITHDYN_QPOLY_HPP
#define ARITHDYN_QPOLY_HPP

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arithdyn::qpoly {

// Exact scalars. GMP keeps mpq_class canonical (reduced, positive
// denominator) through every arithmetic operation.
using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown when two operands live in rings of different dimension.
class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);
    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string &what, std::size_t position);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Parses "a", "-a", "a/b" into canonical form. Rejects zero denominators.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational &value);

/// Number of bits needed for |numerator| plus |denominator|.
std::size_t bit_size(const Rational &value);

/// Exponent vector x_1^{e_1} ... x_N^{e_N}, stored 0-based.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t dimension) : exponents_(dimension, 0) {}
    explicit Monomial(std::vector<std::uint32_t> exponents) : exponents_(std::move(exponents)) {}

    static Monomial variable(std::size_t dimension, std::size_t index, std::uint32_t power = 1);

    std::size_t dimension() const noexcept { return exponents_.size(); }
    std::uint32_t operator[](std::size_t i) const { return exponents_[i]; }
    std::uint32_t &operator[](std::size_t i) { return exponents_[i]; }
    std::span<const std::uint32_t> exponents() const noexcept { return exponents_; }

    std::uint64_t total_degree() const noexcept;
    bool is_constant() const noexcept;

    Monomial operator*(const Monomial &other) const;

    // Lexicographic on exponent vectors: x_1 is the most significant.
    friend auto operator<=>(const Monomial &, const Monomial &) = default;
    friend bool operator==(const Monomial &, const Monomial &) = default;

private:
    std::vector<std::uint32_t> exponents_;
};

/// Sparse polynomial in Q[x_1, ..., x_N].
///
/// Terms are kept in descending lexicographic order, so the first stored
/// term is the lex-maximal ("dominant") monomial. No stored coefficient is
/// zero, which makes structural equality coincide with equality in the ring.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, std::greater<>>;

    Polynomial() = default;
    explicit Polynomial(std::size_t dimension) : dimension_(dimension) {}

    static Polynomial constant(std::size_t dimension, const Rational &value);
    static Polynomial variable(std::size_t dimension, std::size_t index);
    static Polynomial monomial(const Monomial &m, const Rational &coefficient);

    std::size_t dimension() const noexcept { return dimension_; }
    const TermMap &terms() const noexcept { return terms_; }
    std::size_t term_count() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;

    Rational coefficient(const Monomial &m) const;

    /// Adds c*m in place; removes the term if it cancels.
    void add_term(const Monomial &m, const Rational &c);

    /// Largest coefficient size in bits (numerator plus denominator).
    std::size_t max_coefficient_bits() const;

    friend bool operator==(const Polynomial &, const Polynomial &) = default;

private:
    std::size_t dimension_ = 0;
    TermMap terms_;
};

Polynomial add(const Polynomial &p, const Polynomial &q);
Polynomial sub(const Polynomial &p, const Polynomial &q);
Polynomial negate(const Polynomial &p);
Polynomial mul(const Polynomial &p, const Polynomial &q);
Polynomial scale(const Polynomial &p, const Rational &c);
Polynomial pow(const Polynomial &p, std::uint32_t exponent);

inline Polynomial operator+(const Polynomial &p, const Polynomial &q) { return add(p, q); }
inline Polynomial operator-(const Polynomial &p, const Polynomial &q) { return sub(p, q); }
inline Polynomial operator-(const Polynomial &p) { return negate(p); }
inline Polynomial operator*(const Polynomial &p, const Polynomial &q) { return mul(p, q); }

Rational evaluate(const Polynomial &p, std::span<const Rational> point);

/// Replaces x_i by subs[i] and expands.
Polynomial substitute(const Polynomial &p, std::span<const Polynomial> subs);

/// Max exponent of x_i (1-based i). Zero polynomial gives 0.
std::uint64_t degree_in_var(const Polynomial &p, std::size_t i);

/// Max total degree over terms. Zero polynomial gives 0.
std::uint64_t total_degree(const Polynomial &p);

/// Canonical text, terms in descending lex order: "3/2*x1^3*x2 + x2^2 - 1".
std::string to_string(const Polynomial &p);

/// Inverse of to_string. Accepts any whitespace, repeated factors and
/// numeric factors anywhere in a product; variables must be x1..xN.
Polynomial parse_polynomial(std::string_view text, std::size_t dimension);

}  // namespace arithdyn::qpoly

#endif  // ARITHDYN_QPOLY_HPP
