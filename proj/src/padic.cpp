#include "arithdyn/padic.hpp"

#include "arithdyn/degrees.hpp"

#include <algorithm>
#include <ostream>
#include <random>

namespace arithdyn::padic {

namespace {

long checked_mul(long a, long b)
{
    long out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw std::overflow_error("valuation arithmetic overflows");
    return out;
}

long checked_add(long a, long b)
{
    long out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("valuation arithmetic overflows");
    return out;
}

long remove_factor(mpz_srcptr value, std::uint64_t p)
{
    if (mpz_sgn(value) == 0)
        return 0;
    mpz_class rest;
    mpz_class prime(static_cast<unsigned long>(p));
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), value, prime.get_mpz_t()));
}

bool is_unit(const Rational &c, std::uint64_t p)
{
    return mpz_divisible_ui_p(c.get_num_mpz_t(), p) == 0 && mpz_divisible_ui_p(c.get_den_mpz_t(), p) == 0;
}

// -v_p(x) > 0 and finite.
bool has_pole(const Valuation &v)
{
    return !v.is_infinite() && v.value() < 0;
}

}  // namespace

long Valuation::value() const
{
    if (infinite_)
        throw std::domain_error("valuation of zero is +infinity");
    return value_;
}

Valuation operator+(const Valuation &a, const Valuation &b)
{
    if (a.infinite_ || b.infinite_)
        return Valuation::infinity();
    return Valuation(checked_add(a.value_, b.value_));
}

std::strong_ordering operator<=>(const Valuation &a, const Valuation &b)
{
    if (a.infinite_ || b.infinite_)
        return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
}

std::ostream &operator<<(std::ostream &os, const Valuation &v)
{
    if (v.is_infinite())
        return os << "inf";
    return os << v.value();
}

bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    mpz_class v(static_cast<unsigned long>(p));
    return mpz_probab_prime_p(v.get_mpz_t(), 30) != 0;
}

Valuation vp(const Rational &x, std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (x == 0)
        return Valuation::infinity();
    return Valuation(remove_factor(x.get_num_mpz_t(), p) - remove_factor(x.get_den_mpz_t(), p));
}

std::uint64_t find_unit_prime(const TriangularMap &f, std::uint64_t start)
{
    mpz_class candidate(static_cast<unsigned long>(start < 2 ? 2 : start));
    if (mpz_probab_prime_p(candidate.get_mpz_t(), 30) == 0)
        mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
    for (;;) {
        const std::uint64_t p = candidate.get_ui();
        bool good = true;
        for (const auto &comp : f.components())
            for (const auto &[m, c] : comp.terms())
                good = good && is_unit(c, p);
        if (good)
            return p;
        mpz_nextprime(candidate.get_mpz_t(), candidate.get_mpz_t());
    }
}

std::uint64_t choose_C(const TriangularMap &f)
{
    const auto deg = degrees::degree_matrix(f);
    const auto max_entry = *std::max_element(deg.entries().begin(), deg.entries().end());
    return f.dimension() * max_entry + 1;
}

SectorConfig make_sector_config(const TriangularMap &f, std::uint64_t prime, std::uint64_t C)
{
    if (!is_prime(prime))
        throw SectorConfigError(std::to_string(prime) + " is not prime");
    if (C < choose_C(f))
        throw SectorConfigError("C = " + std::to_string(C) + " must exceed N * max deg_{x_i} f_j = " +
                                std::to_string(choose_C(f) - 1));
    for (std::size_t i = 1; i <= f.dimension(); ++i)
        for (const auto &[m, c] : f.component(i).terms())
            if (!is_unit(c, prime))
                throw SectorConfigError("coefficient " + qpoly::to_string(c) + " of f" + std::to_string(i) +
                                        " is not a unit at p = " + std::to_string(prime));
    return SectorConfig{prime, C, f.dimension()};
}

SectorConfig auto_sector_config(const TriangularMap &f)
{
    return make_sector_config(f, find_unit_prime(f), choose_C(f));
}

bool in_U(const AffinePoint &point, const SectorConfig &cfg)
{
    if (point.size() != cfg.dimension)
        throw qpoly::DimensionMismatch(cfg.dimension, point.size());
    std::vector<Valuation> v;
    for (const auto &x : point)
        v.push_back(vp(x, cfg.prime));
    if (cfg.dimension == 1)
        return has_pole(v[0]);
    const long C = static_cast<long>(cfg.C);
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (!has_pole(v[i]) || !has_pole(v[i + 1]))
            return false;
        const long outer = -v[i].value();
        const long inner = checked_mul(C, -v[i + 1].value());
        if (!(outer > inner && inner > 0))
            return false;
    }
    return true;
}

std::vector<long> pole_orders(const AffinePoint &point, std::uint64_t p)
{
    std::vector<long> out;
    for (const auto &x : point)
        out.push_back(-vp(x, p).value());
    return out;
}

std::vector<AffinePoint> sample_U(const SectorConfig &cfg, std::size_t count, std::uint64_t seed)
{
    if (count == 0)
        throw std::invalid_argument("sample_U needs count >= 1");
    // mt19937_64's output sequence is fixed by the standard; reducing it
    // by hand keeps samples identical across standard libraries.
    std::mt19937_64 rng(seed);
    auto draw = [&](std::uint64_t bound) { return rng() % bound; };

    const std::size_t n = cfg.dimension;
    const long C = static_cast<long>(cfg.C);
    const mpz_class p(static_cast<unsigned long>(cfg.prime));
    std::vector<AffinePoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        std::vector<long> e(n);
        e[n - 1] = 1 + static_cast<long>(draw(2));
        for (std::size_t i = n - 1; i-- > 1;)
            e[i] = checked_add(checked_mul(C, e[i + 1]), 1 + static_cast<long>(draw(2)));
        e[0] = n == 1 ? 1 + static_cast<long>(k) : checked_add(checked_mul(C, e[1]), 1 + static_cast<long>(k));

        AffinePoint point;
        for (std::size_t i = 0; i < n; ++i) {
            mpz_class a = static_cast<unsigned long>(1 + draw(cfg.prime - 1));
            a += p * static_cast<unsigned long>(draw(16));
            if (draw(2) == 1)
                a = -a;
            mpz_class den;
            mpz_pow_ui(den.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e[i]));
            Rational x(a, den);
            x.canonicalize();
            point.push_back(std::move(x));
        }
        out.push_back(std::move(point));
    }
    return out;
}

bool StabilityReport::all_passed() const
{
    return std::all_of(rows.begin(), rows.end(), [](const StabilityRow &r) { return r.passed(); });
}

StabilityReport verify_stability(const TriangularMap &f, const SectorConfig &cfg,
                                 const std::vector<AffinePoint> &samples)
{
    StabilityReport report;
    for (const auto &point : samples) {
        if (!in_U(point, cfg))
            throw NotInSector("sample " + maps::to_string(point) + " is not in U");
        StabilityRow row;
        row.point = point;
        const auto image = maps::apply(f, point);
        for (const auto &x : point)
            row.before.push_back(vp(x, cfg.prime));
        for (const auto &x : image)
            row.after.push_back(vp(x, cfg.prime));
        row.image_in_U = in_U(image, cfg);
        // Smallest valuation = largest absolute value.
        row.first_coordinate_dominates = row.after[0] == *std::min_element(row.after.begin(), row.after.end());
        report.rows.push_back(std::move(row));
    }
    return report;
}

qpoly::Monomial dominant_monomial(const TriangularMap &f, std::size_t i)
{
    if (i < 1 || i > f.dimension())
        throw std::out_of_range("component index out of range");
    const auto &comp = f.component(i);
    // Terms are stored in descending lex order.
    const auto &m = comp.terms().begin()->first;
    const auto d = qpoly::degree_in_var(comp, i);
    if (m[i - 1] != d)
        throw LexMaxDegreeMismatch("lex-max monomial of f" + std::to_string(i) + " has x" + std::to_string(i) +
                                   "-exponent " + std::to_string(m[i - 1]) + " but d_ii = " + std::to_string(d));
    return m;
}

bool DominantValueReport::all_hold() const
{
    return std::all_of(rows.begin(), rows.end(), [](const DominantValueRow &r) { return r.holds(); });
}

DominantValueReport verify_dominant_value(const TriangularMap &f, const SectorConfig &cfg, const AffinePoint &point)
{
    if (!in_U(point, cfg))
        throw NotInSector("point " + maps::to_string(point) + " is not in U");
    DominantValueReport report;
    report.point = point;
    std::vector<long> v;
    for (const auto &x : point)
        v.push_back(vp(x, cfg.prime).value());
    const auto image = maps::apply(f, point);
    for (std::size_t i = 1; i <= f.dimension(); ++i) {
        const auto m = dominant_monomial(f, i);
        long predicted = 0;
        for (std::size_t l = 0; l < m.dimension(); ++l)
            predicted = checked_add(predicted, checked_mul(static_cast<long>(m[l]), v[l]));
        report.rows.push_back({i, vp(image[i - 1], cfg.prime), predicted});
    }
    return report;
}

bool strictly_decreasing_diagonal(const TriangularMap &f)
{
    const auto diag = degrees::degree_matrix(f).diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i)
        if (diag[i] <= diag[i + 1])
            return false;
    return true;
}

std::vector<long> minimal_sector_poles(const SectorConfig &cfg)
{
    std::vector<long> m(cfg.dimension);
    m[cfg.dimension - 1] = 1;
    for (std::size_t i = cfg.dimension - 1; i-- > 0;)
        m[i] = checked_add(checked_mul(static_cast<long>(cfg.C), m[i + 1]), 1);
    return m;
}

long image_pole_floor(const TriangularMap &f, const SectorConfig &cfg)
{
    // On U the dominant monomial decides the valuation exactly, and every
    // pole order is at least its minimal value.
    const auto m = minimal_sector_poles(cfg);
    const auto lead = dominant_monomial(f, 1);
    long floor = 0;
    for (std::size_t l = 0; l < m.size(); ++l)
        floor = checked_add(floor, checked_mul(static_cast<long>(lead[l]), m[l]));
    return floor;
}

bool certified_outside_image(const TriangularMap &f, const SectorConfig &cfg, const AffinePoint &point)
{
    if (!in_U(point, cfg))
        return false;
    return -vp(point[0], cfg.prime).value() < image_pole_floor(f, cfg);
}

AffinePoint u_minus_fu_witness(const TriangularMap &f, const SectorConfig &cfg)
{
    if (!strictly_decreasing_diagonal(f))
        throw NotFirstCase("witness construction needs d_ii > d_{i+1,i+1} for every i");
    const auto m = minimal_sector_poles(cfg);
    const mpz_class p(static_cast<unsigned long>(cfg.prime));
    AffinePoint point;
    for (auto e : m) {
        mpz_class den;
        mpz_pow_ui(den.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
        point.emplace_back(mpz_class(1), den);
    }
    if (!certified_outside_image(f, cfg, point))
        throw NotFirstCase("f(U) reaches the minimal pole order of U; no witness at the boundary");
    return point;
}

bool GrowthReport::all_hold() const
{
    return std::all_of(rows.begin(), rows.end(),
                       [](const GrowthRow &r) { return r.v_x2 == Valuation(r.predicted) && r.stays_in_U; });
}

GrowthReport case_n2_growth(const TriangularMap &f, std::uint64_t prime, const AffinePoint &point, std::size_t n_max,
                            const maps::ResourceLimits &limits)
{
    if (f.dimension() != 2)
        throw GrowthPrecondition("second case needs N = 2");
    const auto deg = degrees::degree_matrix(f);
    if (deg(1, 1) > deg(2, 2))
        throw GrowthPrecondition("second case needs d_11 <= d_22");
    try {
        make_sector_config(f, prime, choose_C(f));
    } catch (const SectorConfigError &e) {
        throw GrowthPrecondition(e.what());
    }
    if (point.size() != 2)
        throw qpoly::DimensionMismatch(2, point.size());
    const auto v0 = vp(point[1], prime);
    if (!has_pole(v0))
        throw GrowthPrecondition("|x2|_p > 1 fails for " + maps::to_string(point));

    GrowthReport report;
    report.d22 = deg(2, 2);
    const auto orb = maps::orbit(f, point, n_max, limits);
    long scale = 1;
    for (std::size_t n = 0; n <= n_max; ++n) {
        if (n > 0)
            scale = checked_mul(scale, static_cast<long>(report.d22));
        const auto v = vp(orb.points[n][1], prime);
        report.rows.push_back({n, v, checked_mul(scale, v0.value()), has_pole(v)});
    }
    return report;
}

}  // namespace arithdyn::padic
