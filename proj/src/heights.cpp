#include "arithdyn/heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace arithdyn::heights {

namespace {

HeightRow make_row(std::size_t n, const AffinePoint &p, double delta)
{
    HeightRow row;
    row.n = n;
    const auto h = weil_height(embed_affine(p));
    row.h_exact = h.max_abs;
    row.h = h.value;
    row.h_plus = std::max(h.value, 1.0);
    if (n > 0)
        row.a_n = std::exp(std::log(row.h_plus) / static_cast<double>(n));
    // In log space: delta^n overflows long before h_plus does.
    row.khat_n = std::exp(std::log(row.h_plus) - static_cast<double>(n) * std::log(delta));
    return row;
}

}  // namespace

ProjectivePoint ProjectivePoint::canonical(std::vector<Integer> coordinates)
{
    Integer g = 0;
    for (const auto &c : coordinates)
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0)
        throw std::invalid_argument("projective point with all coordinates zero");
    const auto first = std::find_if(coordinates.begin(), coordinates.end(), [](const Integer &c) { return c != 0; });
    if (*first < 0)
        g = -g;
    for (auto &c : coordinates)
        mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return ProjectivePoint(std::move(coordinates));
}

ProjectivePoint embed_affine(const AffinePoint &point)
{
    Integer l = 1;
    for (const auto &x : point)
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    std::vector<Integer> coords;
    coords.reserve(point.size() + 1);
    coords.push_back(l);
    for (const auto &x : point) {
        Integer v;
        mpz_divexact(v.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
        coords.push_back(v * x.get_num());
    }
    return ProjectivePoint::canonical(std::move(coords));
}

ProjectivePoint segre(const ProjectivePoint &a, const ProjectivePoint &b)
{
    std::vector<Integer> coords;
    coords.reserve(a.size() * b.size());
    for (const auto &x : a.coordinates())
        for (const auto &y : b.coordinates())
            coords.push_back(x * y);
    return ProjectivePoint::canonical(std::move(coords));
}

double log_integer(const Integer &v)
{
    if (v <= 0)
        throw std::domain_error("log of a nonpositive integer");
    long exponent = 0;
    const double mantissa = mpz_get_d_2exp(&exponent, v.get_mpz_t());
    return std::log(mantissa) + static_cast<double>(exponent) * std::log(2.0);
}

Height weil_height(const ProjectivePoint &q)
{
    Height h;
    h.max_abs = 0;
    for (const auto &c : q.coordinates())
        if (abs(c) > h.max_abs)
            h.max_abs = abs(c);
    h.value = log_integer(h.max_abs);
    return h;
}

bool h_plus_equal(const Integer &a, const Integer &b)
{
    return a == b || (a <= 2 && b <= 2);
}

HeightSequence height_sequence(const TriangularMap &f, const AffinePoint &start, std::size_t n_max, double delta,
                               const maps::ResourceLimits &limits)
{
    return height_sequence(maps::orbit(f, start, n_max, limits), delta);
}

HeightSequence height_sequence(const maps::Orbit &orbit, double delta)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("delta must be positive");
    HeightSequence seq{orbit.map, orbit.start, delta, {}, orbit};
    seq.rows.reserve(orbit.points.size());
    for (std::size_t n = 0; n < orbit.points.size(); ++n)
        seq.rows.push_back(make_row(n, orbit.points[n], delta));
    return seq;
}

AlphaBounds alpha_bounds(const HeightSequence &seq, std::size_t tail)
{
    if (tail == 0)
        throw std::invalid_argument("alpha_bounds needs tail >= 1");
    if (seq.rows.size() < tail + 1)
        throw std::invalid_argument("alpha_bounds: " + std::to_string(seq.rows.size()) + " rows, need at least " +
                                    std::to_string(tail + 1));
    AlphaBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t k = seq.rows.size() - tail; k < seq.rows.size(); ++k) {
        const double a = *seq.rows[k].a_n;
        b.lower = std::min(b.lower, a);
        b.upper = std::max(b.upper, a);
    }
    return b;
}

void write_height_csv(std::ostream &os, const HeightSequence &seq)
{
    os << "n,h_exact_numerator_bits,h_float,h_plus_float,a_n,khat_n\n";
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto &row : seq.rows) {
        os << row.n << ',' << mpz_sizeinbase(row.h_exact.get_mpz_t(), 2) << ',' << row.h << ',' << row.h_plus << ',';
        if (row.a_n)
            os << *row.a_n;
        os << ',' << row.khat_n << '\n';
    }
    os.precision(old);
}

bool AdditivityReport::all_exact() const
{
    return std::all_of(rows.begin(), rows.end(),
                       [](const AdditivityRow &r) { return r.exact_additive && r.product_orbit_matches; });
}

double AdditivityReport::final_root_gap() const
{
    if (rows.empty() || !rows.back().sum_root || !rows.back().max_factor_root)
        return std::numeric_limits<double>::quiet_NaN();
    return std::abs(*rows.back().sum_root - *rows.back().max_factor_root);
}

AdditivityReport product_height_additivity(const TriangularMap &fa, const AffinePoint &pa, const TriangularMap &fb,
                                           const AffinePoint &pb, std::size_t n_max,
                                           const maps::ResourceLimits &limits)
{
    const auto product = maps::product_map(fa, fb);
    AffinePoint joint = pa;
    joint.insert(joint.end(), pb.begin(), pb.end());

    const auto joint_orbit = maps::orbit(product, joint, n_max, limits);
    const auto orbit_a = maps::orbit(fa, pa, n_max, limits);
    const auto orbit_b = maps::orbit(fb, pb, n_max, limits);

    AdditivityReport report;
    for (std::size_t n = 0; n <= n_max; ++n) {
        const auto &point = joint_orbit.points[n];
        const AffinePoint part_a(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(fa.dimension()));
        const AffinePoint part_b(point.begin() + static_cast<std::ptrdiff_t>(fa.dimension()), point.end());

        const auto qa = embed_affine(part_a);
        const auto qb = embed_affine(part_b);
        const auto ha = weil_height(qa);
        const auto hb = weil_height(qb);
        const auto hs = weil_height(segre(qa, qb));

        AdditivityRow row;
        row.n = n;
        row.h_a = ha.max_abs;
        row.h_b = hb.max_abs;
        row.h_segre = hs.max_abs;
        row.h_sum = ha.value + hb.value;
        row.exact_additive = hs.max_abs == ha.max_abs * hb.max_abs;
        row.product_orbit_matches = part_a == orbit_a.points[n] && part_b == orbit_b.points[n];
        if (n > 0) {
            const double inv = 1.0 / static_cast<double>(n);
            row.sum_root = std::pow(std::max(row.h_sum, 1.0), inv);
            row.max_factor_root = std::max(std::pow(std::max(ha.value, 1.0), inv), std::pow(std::max(hb.value, 1.0), inv));
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace arithdyn::heights
