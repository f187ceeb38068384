#include "arithdyn/qpoly.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <unordered_map>

namespace arithdyn::qpoly {

namespace {

std::string mismatch_message(std::size_t expected, std::size_t actual)
{
    std::ostringstream os;
    os << "dimension mismatch: expected " << expected << ", got " << actual;
    return os.str();
}

void require_same_dimension(std::size_t expected, std::size_t actual)
{
    if (expected != actual)
        throw DimensionMismatch(expected, actual);
}

Integer lcm_of_denominators(const Polynomial &p)
{
    Integer l = 1;
    for (const auto &[m, c] : p.terms())
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    return l;
}

// Coefficients of L*p as integers, in term order.
std::vector<Integer> integer_coefficients(const Polynomial &p, const Integer &l)
{
    std::vector<Integer> out;
    out.reserve(p.term_count());
    for (const auto &[m, c] : p.terms()) {
        Integer v;
        mpz_divexact(v.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
        v *= c.get_num();
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::uint32_t> max_exponents(const Polynomial &p)
{
    std::vector<std::uint32_t> out(p.dimension(), 0);
    for (const auto &[m, c] : p.terms())
        for (std::size_t i = 0; i < p.dimension(); ++i)
            out[i] = std::max(out[i], m[i]);
    return out;
}

Rational make_rational(const Integer &num, const Integer &den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : std::invalid_argument(mismatch_message(expected, actual)), expected_(expected), actual_(actual)
{
}

ParseError::ParseError(const std::string &what, std::size_t position)
    : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position)
{
}

Rational parse_rational(std::string_view text)
{
    auto trimmed = text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
        trimmed.remove_prefix(1);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
        trimmed.remove_suffix(1);

    auto valid_integer = [](std::string_view s, bool allow_sign) {
        if (allow_sign && !s.empty() && (s.front() == '-' || s.front() == '+'))
            s.remove_prefix(1);
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
            return std::isdigit(static_cast<unsigned char>(ch)) != 0;
        });
    };

    const auto slash = trimmed.find('/');
    std::string_view num_text = trimmed.substr(0, slash);
    std::string_view den_text = slash == std::string_view::npos ? "1" : trimmed.substr(slash + 1);
    if (!valid_integer(num_text, true) || !valid_integer(den_text, false))
        throw ParseError("malformed rational '" + std::string(text) + "'", 0);
    if (num_text.front() == '+')
        num_text.remove_prefix(1);

    Integer num(std::string(num_text), 10);
    Integer den(std::string(den_text), 10);
    if (den == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'", slash + 1);
    return make_rational(num, den);
}

std::string to_string(const Rational &value)
{
    return value.get_str(10);
}

std::size_t bit_size(const Rational &value)
{
    return mpz_sizeinbase(value.get_num_mpz_t(), 2) + mpz_sizeinbase(value.get_den_mpz_t(), 2);
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(std::size_t dimension, std::size_t index, std::uint32_t power)
{
    if (index >= dimension)
        throw std::out_of_range("variable index out of range");
    Monomial m(dimension);
    m.exponents_[index] = power;
    return m;
}

std::uint64_t Monomial::total_degree() const noexcept
{
    std::uint64_t d = 0;
    for (auto e : exponents_)
        d += e;
    return d;
}

bool Monomial::is_constant() const noexcept
{
    return std::all_of(exponents_.begin(), exponents_.end(), [](auto e) { return e == 0; });
}

Monomial Monomial::operator*(const Monomial &other) const
{
    require_same_dimension(dimension(), other.dimension());
    Monomial out(*this);
    for (std::size_t i = 0; i < exponents_.size(); ++i)
        out.exponents_[i] += other.exponents_[i];
    return out;
}

// -------------------------------------------------------------- Polynomial

Polynomial Polynomial::constant(std::size_t dimension, const Rational &value)
{
    Polynomial p(dimension);
    p.add_term(Monomial(dimension), value);
    return p;
}

Polynomial Polynomial::variable(std::size_t dimension, std::size_t index)
{
    Polynomial p(dimension);
    p.add_term(Monomial::variable(dimension, index), Rational(1));
    return p;
}

Polynomial Polynomial::monomial(const Monomial &m, const Rational &coefficient)
{
    Polynomial p(m.dimension());
    p.add_term(m, coefficient);
    return p;
}

bool Polynomial::is_constant() const noexcept
{
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

Rational Polynomial::coefficient(const Monomial &m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial &m, const Rational &c)
{
    require_same_dimension(dimension_, m.dimension());
    // GMP arithmetic assumes canonical operands; callers may hand us a
    // freshly constructed num/den pair.
    Rational v = c;
    v.canonicalize();
    if (v == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, v);
    if (!inserted) {
        it->second += v;
        if (it->second == 0)
            terms_.erase(it);
    }
}

std::size_t Polynomial::max_coefficient_bits() const
{
    std::size_t bits = 0;
    for (const auto &[m, c] : terms_)
        bits = std::max(bits, bit_size(c));
    return bits;
}

// -------------------------------------------------------------- arithmetic

Polynomial add(const Polynomial &p, const Polynomial &q)
{
    require_same_dimension(p.dimension(), q.dimension());
    Polynomial out = p;
    for (const auto &[m, c] : q.terms())
        out.add_term(m, c);
    return out;
}

Polynomial negate(const Polynomial &p)
{
    Polynomial out(p.dimension());
    for (const auto &[m, c] : p.terms())
        out.add_term(m, -c);
    return out;
}

Polynomial sub(const Polynomial &p, const Polynomial &q)
{
    return add(p, negate(q));
}

Polynomial scale(const Polynomial &p, const Rational &c)
{
    Polynomial out(p.dimension());
    if (c == 0)
        return out;
    for (const auto &[m, a] : p.terms())
        out.add_term(m, a * c);
    return out;
}

Polynomial mul(const Polynomial &p, const Polynomial &q)
{
    require_same_dimension(p.dimension(), q.dimension());
    const std::size_t n = p.dimension();
    Polynomial out(n);
    if (p.is_zero() || q.is_zero())
        return out;

    // Work on integer multiples L_p*p and L_q*q so the inner loop is a
    // single mpz multiply-accumulate; divide once at the end.
    const Integer lp = lcm_of_denominators(p);
    const Integer lq = lcm_of_denominators(q);
    const auto pc = integer_coefficients(p, lp);
    const auto qc = integer_coefficients(q, lq);
    const Integer denominator = lp * lq;

    const auto pmax = max_exponents(p);
    const auto qmax = max_exponents(q);
    std::vector<unsigned> shift(n, 0), width(n, 0);
    unsigned total_bits = 0;
    for (std::size_t i = n; i-- > 0;) {
        shift[i] = total_bits;
        width[i] = static_cast<unsigned>(std::bit_width(std::uint64_t(pmax[i]) + qmax[i]));
        total_bits += width[i];
    }

    if (total_bits <= 64) {
        auto pack = [&](const Monomial &m) {
            std::uint64_t key = 0;
            for (std::size_t i = 0; i < n; ++i)
                key |= std::uint64_t(m[i]) << shift[i];
            return key;
        };
        std::vector<std::uint64_t> pk, qk;
        pk.reserve(p.term_count());
        qk.reserve(q.term_count());
        for (const auto &[m, c] : p.terms())
            pk.push_back(pack(m));
        for (const auto &[m, c] : q.terms())
            qk.push_back(pack(m));

        std::unordered_map<std::uint64_t, Integer> acc;
        acc.reserve(std::min<std::size_t>(pk.size() * qk.size(), std::size_t(1) << 20));
        for (std::size_t a = 0; a < pk.size(); ++a)
            for (std::size_t b = 0; b < qk.size(); ++b) {
                auto &slot = acc[pk[a] + qk[b]];
                mpz_addmul(slot.get_mpz_t(), pc[a].get_mpz_t(), qc[b].get_mpz_t());
            }

        for (auto &[key, value] : acc) {
            if (value == 0)
                continue;
            Monomial m(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t mask = width[i] >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << width[i]) - 1;
                m[i] = static_cast<std::uint32_t>((key >> shift[i]) & mask);
            }
            out.add_term(m, make_rational(value, denominator));
        }
        return out;
    }

    std::map<Monomial, Integer> acc;
    std::size_t a = 0;
    for (const auto &[mp, cp] : p.terms()) {
        std::size_t b = 0;
        for (const auto &[mq, cq] : q.terms()) {
            auto &slot = acc[mp * mq];
            mpz_addmul(slot.get_mpz_t(), pc[a].get_mpz_t(), qc[b].get_mpz_t());
            ++b;
        }
        ++a;
    }
    for (const auto &[m, value] : acc)
        if (value != 0)
            out.add_term(m, make_rational(value, denominator));
    return out;
}

Polynomial pow(const Polynomial &p, std::uint32_t exponent)
{
    Polynomial result = Polynomial::constant(p.dimension(), Rational(1));
    Polynomial base = p;
    while (exponent > 0) {
        if (exponent & 1u)
            result = mul(result, base);
        exponent >>= 1;
        if (exponent > 0)
            base = mul(base, base);
    }
    return result;
}

Rational evaluate(const Polynomial &p, std::span<const Rational> point)
{
    require_same_dimension(p.dimension(), point.size());
    // Power cache per variable; exponents are visited sparsely.
    std::vector<std::map<std::uint32_t, Rational>> powers(point.size());
    auto power_of = [&](std::size_t i, std::uint32_t e) -> const Rational & {
        auto [it, inserted] = powers[i].try_emplace(e);
        if (inserted) {
            // (a/b)^e = a^e / b^e is already reduced.
            mpz_pow_ui(it->second.get_num_mpz_t(), point[i].get_num_mpz_t(), e);
            mpz_pow_ui(it->second.get_den_mpz_t(), point[i].get_den_mpz_t(), e);
        }
        return it->second;
    };

    Rational sum = 0;
    for (const auto &[m, c] : p.terms()) {
        Rational term = c;
        for (std::size_t i = 0; i < point.size(); ++i)
            if (m[i] != 0)
                term *= power_of(i, m[i]);
        sum += term;
    }
    return sum;
}

Polynomial substitute(const Polynomial &p, std::span<const Polynomial> subs)
{
    require_same_dimension(p.dimension(), subs.size());
    if (subs.empty())
        return p;
    const std::size_t target = subs.front().dimension();
    for (const auto &s : subs)
        require_same_dimension(target, s.dimension());

    const auto maxe = max_exponents(p);
    // powers[i][k] = subs[i]^k, filled lazily by repeated multiplication.
    std::vector<std::vector<Polynomial>> powers(subs.size());
    auto power_of = [&](std::size_t i, std::uint32_t e) -> const Polynomial & {
        auto &cache = powers[i];
        if (cache.empty())
            cache.push_back(Polynomial::constant(target, Rational(1)));
        while (cache.size() <= e)
            cache.push_back(mul(cache.back(), subs[i]));
        return cache[e];
    };
    for (std::size_t i = 0; i < subs.size(); ++i)
        powers[i].reserve(maxe[i] + 1);

    Polynomial out(target);
    for (const auto &[m, c] : p.terms()) {
        Polynomial term = Polynomial::constant(target, c);
        for (std::size_t i = 0; i < subs.size(); ++i)
            if (m[i] != 0)
                term = mul(term, power_of(i, m[i]));
        out = add(out, term);
    }
    return out;
}

std::uint64_t degree_in_var(const Polynomial &p, std::size_t i)
{
    if (i < 1 || i > p.dimension())
        throw std::out_of_range("variable index " + std::to_string(i) + " outside 1.." +
                                std::to_string(p.dimension()));
    std::uint64_t d = 0;
    for (const auto &[m, c] : p.terms())
        d = std::max<std::uint64_t>(d, m[i - 1]);
    return d;
}

std::uint64_t total_degree(const Polynomial &p)
{
    std::uint64_t d = 0;
    for (const auto &[m, c] : p.terms())
        d = std::max(d, m.total_degree());
    return d;
}

// ------------------------------------------------------------------- text

std::string to_string(const Polynomial &p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto &[m, c] : p.terms()) {
        const bool negative = c < 0;
        if (first)
            out += negative ? "-" : "";
        else
            out += negative ? " - " : " + ";
        first = false;

        const Rational magnitude = abs(c);
        bool need_star = false;
        if (m.is_constant() || magnitude != 1) {
            out += to_string(magnitude);
            need_star = true;
        }
        for (std::size_t i = 0; i < m.dimension(); ++i) {
            if (m[i] == 0)
                continue;
            if (need_star)
                out += '*';
            out += 'x';
            out += std::to_string(i + 1);
            if (m[i] > 1) {
                out += '^';
                out += std::to_string(m[i]);
            }
            need_star = true;
        }
    }
    return out;
}

namespace {

class PolynomialParser {
public:
    PolynomialParser(std::string_view text, std::size_t dimension) : text_(text), dimension_(dimension) {}

    Polynomial parse()
    {
        Polynomial out(dimension_);
        skip_space();
        if (at_end())
            throw ParseError("empty polynomial", pos_);
        bool negative = false;
        if (peek() == '+' || peek() == '-') {
            negative = peek() == '-';
            ++pos_;
        }
        for (;;) {
            auto [m, c] = parse_term();
            out.add_term(m, negative ? Rational(-c) : c);
            skip_space();
            if (at_end())
                break;
            if (peek() != '+' && peek() != '-')
                throw ParseError(std::string("unexpected '") + peek() + "'", pos_);
            negative = peek() == '-';
            ++pos_;
        }
        return out;
    }

private:
    std::pair<Monomial, Rational> parse_term()
    {
        Monomial m(dimension_);
        Rational c = 1;
        for (;;) {
            skip_space();
            if (at_end())
                throw ParseError("expected factor", pos_);
            if (peek() == 'x') {
                ++pos_;
                const std::size_t var_pos = pos_;
                const auto index = parse_unsigned();
                if (index < 1 || index > dimension_)
                    throw ParseError("variable x" + std::to_string(index) + " outside x1..x" +
                                         std::to_string(dimension_),
                                     var_pos);
                std::uint64_t power = 1;
                skip_space();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    skip_space();
                    power = parse_unsigned();
                }
                const std::uint64_t e = std::uint64_t(m[index - 1]) + power;
                if (e > UINT32_MAX)
                    throw ParseError("exponent too large", var_pos);
                m[index - 1] = static_cast<std::uint32_t>(e);
            } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
                const std::size_t start = pos_;
                Integer num = parse_integer();
                Integer den = 1;
                skip_space();
                if (!at_end() && peek() == '/') {
                    ++pos_;
                    skip_space();
                    den = parse_integer();
                    if (den == 0)
                        throw ParseError("zero denominator", start);
                }
                c *= make_rational(num, den);
            } else {
                throw ParseError(std::string("unexpected '") + peek() + "'", pos_);
            }
            skip_space();
            if (at_end() || peek() != '*')
                break;
            ++pos_;
        }
        return {std::move(m), std::move(c)};
    }

    Integer parse_integer()
    {
        const std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            throw ParseError("expected digits", pos_);
        return Integer(std::string(text_.substr(start, pos_ - start)), 10);
    }

    std::uint64_t parse_unsigned()
    {
        const std::size_t start = pos_;
        Integer v = parse_integer();
        if (!v.fits_ulong_p())
            throw ParseError("integer too large", start);
        return v.get_ui();
    }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    std::string_view text_;
    std::size_t dimension_;
    std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t dimension)
{
    return PolynomialParser(text, dimension).parse();
}

}  // namespace arithdyn::qpoly
