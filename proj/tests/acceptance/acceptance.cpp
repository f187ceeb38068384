// Acceptance suite. Prints one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion 4   run one
//
// Exit status is 0 only when every selected criterion passes.

#include "arithdyn/degrees.hpp"
#include "arithdyn/experiments.hpp"
#include "arithdyn/heights.hpp"
#include "arithdyn/maps.hpp"
#include "arithdyn/padic.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace arithdyn;
using maps::AffinePoint;
using maps::TriangularMap;
using qpoly::Rational;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;
};

// Accumulates a verdict and the first few failure notes.
class Verdict {
public:
    void require(bool ok, const std::string &note)
    {
        if (ok)
            return;
        passed_ = false;
        if (++failures_ <= 3)
            notes_ << (notes_.tellp() > 0 ? "; " : "") << note;
    }
    void info(const std::string &text) { info_ << (info_.tellp() > 0 ? "; " : "") << text; }
    Outcome finish() const
    {
        std::string detail = info_.str();
        if (!passed_) {
            detail += (detail.empty() ? "" : " | ") + std::string("failures: ") + notes_.str();
            if (failures_ > 3)
                detail += " (+" + std::to_string(failures_ - 3) + " more)";
        }
        return {passed_, detail};
    }

private:
    bool passed_ = true;
    int failures_ = 0;
    std::ostringstream notes_;
    std::ostringstream info_;
};

std::string fmt(double x, int digits = 4)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

TriangularMap M(std::vector<const char *> comps)
{
    std::vector<qpoly::Polynomial> ps;
    for (auto *c : comps)
        ps.push_back(qpoly::parse_polynomial(c, comps.size()));
    return TriangularMap::validate(std::move(ps));
}

AffinePoint Pt(std::vector<const char *> coords)
{
    AffinePoint p;
    for (auto *c : coords)
        p.push_back(qpoly::parse_rational(c));
    return p;
}

struct CorpusEntry {
    std::string name;
    TriangularMap map;
    AffinePoint point;
};

// Ten triangular maps, N in {1, 2, 3}, every degree-matrix entry <= 3.
const std::vector<CorpusEntry> &corpus()
{
    static const std::vector<CorpusEntry> c{
        {"[x1^2]", M({"x1^2"}), Pt({"2"})},
        {"[x1^3 - x1 + 1]", M({"x1^3 - x1 + 1"}), Pt({"1/2"})},
        {"[x1^3 + x2, x2^2 + 1]", M({"x1^3 + x2", "x2^2 + 1"}), Pt({"1/3", "2"})},
        {"[x1 x2 + 1, x2^2]", M({"x1*x2 + 1", "x2^2"}), Pt({"2", "1/3"})},
        {"[x1^2 + x2, x2]", M({"x1^2 + x2", "x2"}), Pt({"1/2", "3"})},
        {"[x1^3 + x1 x2^2, x2^2 - x2]", M({"x1^3 + x1*x2^2", "x2^2 - x2"}), Pt({"2/3", "1/2"})},
        {"[x1^3 + x2, x2^2 + x3, x3 + 1]", M({"x1^3 + x2", "x2^2 + x3", "x3 + 1"}), Pt({"1/2", "1", "2"})},
        {"[x1^2 x3 + x2, x2^3 + x3^2, x3^2]", M({"x1^2*x3 + x2", "x2^3 + x3^2", "x3^2"}), Pt({"1/2", "1/3", "2"})},
        {"[x1^3 + x2^2 x3, x2^2 + x3^3, x3]", M({"x1^3 + x2^2*x3", "x2^2 + x3^3", "x3"}), Pt({"1/2", "2", "1/3"})},
        {"[x1 + x2^2 + x3^3, x2 + x3, x3^2]", M({"x1 + x2^2 + x3^3", "x2 + x3", "x3^2"}), Pt({"1/3", "1/2", "2"})},
    };
    return c;
}

const TriangularMap &E1() { return corpus()[2].map; }

std::uint64_t g_seed = 1;

// ------------------------------------------------------------------ criteria

Outcome degree_matrix_diagonal_law()
{
    Verdict v;
    for (const auto &e : corpus()) {
        const auto deg = degrees::degree_matrix(e.map);
        for (auto x : deg.entries())
            v.require(x <= 3, e.name + " has a degree-matrix entry > 3");
        const auto f2 = maps::iterate_symbolic(e.map, 2);
        const auto deg2 = degrees::degree_matrix(f2);
        const auto bound = deg * deg;
        for (std::size_t i = 1; i <= deg.size(); ++i)
            v.require(deg2(i, i) == deg(i, i) * deg(i, i),
                      e.name + ": Deg(f^2)_" + std::to_string(i) + std::to_string(i) + " = " +
                          std::to_string(deg2(i, i)));
        v.require(deg2.entrywise_leq(bound), e.name + ": Deg(f^2) exceeds Deg(f)^2");
    }
    v.info(std::to_string(corpus().size()) + " maps, exact integer comparison");
    return v.finish();
}

Outcome exact_dynamical_degree()
{
    Verdict v;
    double worst_gap = 0.0;
    for (const auto &e : corpus()) {
        const auto delta = degrees::degree_matrix(e.map).max_diagonal();
        v.require(degrees::dynamical_degree_exact(e.map) == delta, e.name + ": exact value is not max d_ii");
        const auto seq = degrees::dynamical_degree_sequence(e.map, 5);
        v.require(!seq.truncated && seq.rows.size() == 5, e.name + ": degree sequence truncated");
        if (seq.rows.size() != 5)
            continue;
        mpz_class power = 1;
        for (const auto &row : seq.rows) {
            power *= static_cast<unsigned long>(delta);
            v.require(mpz_class(static_cast<unsigned long>(row.degree)) >= power,
                      e.name + ": deg(f^" + std::to_string(row.n) + ") < delta^n");
        }
        const double root = seq.rows.back().root;
        v.require(root >= static_cast<double>(delta), e.name + ": root " + fmt(root) + " below delta");
        v.require(std::abs(root - static_cast<double>(delta)) <= 0.35,
                  e.name + ": root " + fmt(root) + " not within 0.35 of " + std::to_string(delta));
        worst_gap = std::max(worst_gap, root - static_cast<double>(delta));
    }
    v.info("max root - delta at n=5: " + fmt(worst_gap));
    return v.finish();
}

Outcome spectral_radius_limit()
{
    Verdict v;
    const degrees::DegreeMatrix a(2, {2, 0, 5, 2});
    const auto s = degrees::spectral_radius_maxroot(a, 30);
    const double r30 = s.roots[29];
    v.require(r30 >= 2.0 && r30 <= 2.2, "max-entry root at n=30 is " + fmt(r30) + ", outside [2.0, 2.2]");
    for (std::size_t n = 11; n <= 30; ++n)
        v.require(s.roots[n - 1] < s.roots[n - 2], "root increases at n=" + std::to_string(n));

    std::size_t checked = 1;
    v.require(s.exact == 2u, "exact path on [[2,0],[5,2]] is not 2");
    for (const auto &e : corpus()) {
        const auto deg = degrees::degree_matrix(e.map);
        const auto est = degrees::spectral_radius_maxroot(deg, 1);
        v.require(est.exact == deg.max_diagonal(), e.name + ": exact path differs from max diagonal");
        ++checked;
    }
    for (const auto &m : {degrees::DegreeMatrix(3, {3, 1, 2, 0, 2, 1, 0, 0, 1}),
                          degrees::DegreeMatrix(2, {1, 3, 0, 2})}) {
        v.require(degrees::spectral_radius_maxroot(m, 1).exact == m.max_diagonal(),
                  "exact path differs from max diagonal on an upper-triangular matrix");
        ++checked;
    }
    v.info("root(10)=" + fmt(s.roots[9]) + ", root(30)=" + fmt(r30) + "; exact path on " + std::to_string(checked) +
           " triangular matrices");
    return v.finish();
}

const padic::SectorConfig &e1_sector()
{
    static const auto cfg = padic::make_sector_config(E1(), 2, 7);
    return cfg;
}

std::vector<AffinePoint> e1_samples(std::size_t count) { return padic::sample_U(e1_sector(), count, g_seed); }

Outcome sector_stability()
{
    Verdict v;
    const auto samples = e1_samples(20);
    const auto report = padic::verify_stability(E1(), e1_sector(), samples);
    for (std::size_t k = 0; k < report.rows.size(); ++k) {
        const auto &row = report.rows[k];
        v.require(row.image_in_U, "sample " + std::to_string(k) + ": f(P) not in U");
        v.require(row.first_coordinate_dominates, "sample " + std::to_string(k) + ": |x1'|_p is not the max");
        const auto dom = padic::verify_dominant_value(E1(), e1_sector(), samples[k]);
        for (const auto &r : dom.rows)
            v.require(r.holds(), "sample " + std::to_string(k) + ": dominant value fails for x" +
                                     std::to_string(r.component));
    }
    v.info(std::to_string(samples.size()) + " samples, p=2, C=7, seed " + std::to_string(g_seed));
    return v.finish();
}

std::vector<heights::HeightSequence> e1_sequences(std::size_t n_max)
{
    std::vector<heights::HeightSequence> out;
    for (const auto &p : e1_samples(20))
        out.push_back(heights::height_sequence(E1(), p, n_max, 3.0));
    return out;
}

Outcome khat_lower_bound()
{
    Verdict v;
    const double log_p = std::log(2.0);
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t rows = 0;
    for (const auto &seq : e1_sequences(8)) {
        const long e1 = padic::pole_orders(seq.start, 2)[0];
        mpz_class floor = e1;
        for (std::size_t n = 0; n < seq.rows.size(); ++n) {
            if (n > 0)
                floor *= 3;
            const auto vx1 = padic::vp(seq.orbit.points[n][0], 2);
            v.require(!vx1.is_infinite() && mpz_class(-vx1.value()) >= floor,
                      "-v(x1) below d11^n e1 at n=" + std::to_string(n));
            const double bound = static_cast<double>(e1) * log_p;
            v.require(seq.rows[n].khat_n + 1e-9 >= bound, "khat_" + std::to_string(n) + " = " +
                                                              fmt(seq.rows[n].khat_n) + " < " + fmt(bound));
            min_slack = std::min(min_slack, seq.rows[n].khat_n - bound);
            ++rows;
        }
    }
    v.info(std::to_string(rows) + " rows (n <= 8), min khat_n - e1 log p = " + fmt(min_slack, 6));
    return v.finish();
}

const TriangularMap &second_case_map()
{
    static const auto f = M({"x1*x2 + 1", "x2^2"});
    return f;
}

double alpha_proxy(const heights::HeightSequence &seq, std::size_t from)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &row : seq.rows)
        if (row.n >= from && row.a_n)
            best = std::max(best, *row.a_n);
    return best;
}

Outcome second_case()
{
    Verdict v;
    const AffinePoint p{1, Rational(1, 2)};
    const auto growth = padic::case_n2_growth(second_case_map(), 2, p, 5);
    for (const auto &row : growth.rows)
        v.require(row.v_x2 == padic::Valuation(-(1L << row.n)), "v(x2^(" + std::to_string(row.n) + ")) != -2^n");

    const auto seq = heights::height_sequence(second_case_map(), p, 8, 2.0);
    const double proxy = alpha_proxy(seq, 5);
    const double a8 = *seq.rows[8].a_n;
    v.require(proxy <= 2.05, "alpha proxy " + fmt(proxy) + " > 2.05");
    v.require(std::abs(a8 - 2.0) <= 0.3, "a_8 = " + fmt(a8) + " not within 0.3 of 2");
    v.info("v(x2^(n)) = -2^n for n <= 5; max_{5<=n<=8} a_n = " + fmt(proxy) + ", a_8 = " + fmt(a8));
    return v.finish();
}

Outcome product_rule()
{
    Verdict v;
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {2, 0}, {3, 4}, {2, 3}, {6, 9}};
    std::size_t rows = 0;
    for (auto [a, b] : pairs) {
        const auto &A = corpus()[a];
        const auto &B = corpus()[b];
        const auto name = A.name + " x " + B.name;
        const auto product = maps::product_map(A.map, B.map);
        const auto expected = std::max(degrees::dynamical_degree_exact(A.map), degrees::dynamical_degree_exact(B.map));
        v.require(degrees::dynamical_degree_exact(product) == expected, name + ": delta of product != max");
        const auto add = heights::product_height_additivity(A.map, A.point, B.map, B.point, 6);
        for (const auto &row : add.rows) {
            v.require(row.exact_additive, name + ": h_prod != h_A + h_B at n=" + std::to_string(row.n));
            v.require(row.product_orbit_matches, name + ": product orbit differs at n=" + std::to_string(row.n));
            ++rows;
        }
    }
    v.info(std::to_string(pairs.size()) + " pairs, " + std::to_string(rows) + " additivity rows (n <= 6)");
    return v.finish();
}

Outcome iterate_consistency()
{
    Verdict v;
    for (const auto &e : corpus()) {
        const auto r = experiments::iterate_consistency(e.map, e.point, 2, 3);
        v.require(r.delta_power_holds(), e.name + ": delta(f^2) = " + std::to_string(r.delta_ft));
        for (const auto &row : r.rows)
            v.require(row.h_plus_equal, e.name + ": h+ rows differ at n=" + std::to_string(row.n));
    }
    v.info(std::to_string(corpus().size()) + " maps, t=2, n <= 3");
    return v.finish();
}

Outcome alpha_upper_direction()
{
    Verdict v;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0, experiments_run = 0;
    for (const auto &seq : e1_sequences(8)) {
        const double proxy = alpha_proxy(seq, 5);
        worst = std::max(worst, proxy - 3.0);
        if (proxy > 3.05)
            ++violations;
        v.require(proxy <= 3.05, "E1 sample " + maps::to_string(seq.start) + ": max a_n = " + fmt(proxy));
        ++experiments_run;
    }
    const auto seq = heights::height_sequence(second_case_map(), {1, Rational(1, 2)}, 8, 2.0);
    const double proxy = alpha_proxy(seq, 5);
    worst = std::max(worst, proxy - 2.0);
    v.require(proxy <= 2.05, "second case: max a_n = " + fmt(proxy));
    ++experiments_run;
    v.info(std::to_string(experiments_run) + " experiments (n_max = 8), " + std::to_string(violations) +
           " above delta + 0.05, worst max a_n - delta = " + fmt(worst));
    return v.finish();
}

Outcome density_proxy()
{
    Verdict v;
    const auto samples = e1_samples(12);
    const auto report = experiments::density_check(samples, 2);
    v.require(report.monomial_count == 6, "expected 6 monomials");
    v.require(report.rank == 6, "rank " + std::to_string(report.rank) + " < 6");

    std::vector<maps::Orbit> orbits;
    for (const auto &p : samples)
        orbits.push_back(maps::orbit(E1(), p, 4));
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < orbits.size(); ++a)
        for (std::size_t b = a + 1; b < orbits.size(); ++b, ++pairs)
            v.require(maps::orbits_disjoint_prefix(orbits[a], orbits[b]),
                      "orbits " + std::to_string(a) + " and " + std::to_string(b) + " meet");

    const auto again = experiments::density_check(e1_samples(12), 2);
    v.require(e1_samples(12) == samples && again.rank == report.rank && again.kernel_vector == report.kernel_vector,
              "rerun with the same seed differs");
    v.info("12 samples, rank " + std::to_string(report.rank) + "/6, " + std::to_string(pairs) +
           " orbit pairs disjoint (prefix length 5)");
    return v.finish();
}

struct Criterion {
    int id;
    const char *title;
    double budget_seconds;
    std::function<Outcome()> run;
};

const std::vector<Criterion> &criteria()
{
    static const std::vector<Criterion> c{
        {1, "degree-matrix diagonal law under composition", 10, degree_matrix_diagonal_law},
        {2, "exact dynamical degree vs degree sequence", 60, exact_dynamical_degree},
        {3, "spectral radius by max-entry roots", 1, spectral_radius_limit},
        {4, "p-adic sector stability and dominant values", 5, sector_stability},
        {5, "khat_n lower bound along sector orbits", 60, khat_lower_bound},
        {6, "N=2 second case valuation growth", 30, second_case},
        {7, "product map degree and height additivity", 30, product_rule},
        {8, "iterate consistency for f^2", 60, iterate_consistency},
        {9, "upper arithmetic degree bounded by delta", 90, alpha_upper_direction},
        {10, "density proxy and disjoint orbits", 10, density_proxy},
    };
    return c;
}

bool run_one(const Criterion &c)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.run();
    } catch (const std::exception &e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) {
        out.passed = false;
        out.detail += " | over time budget";
    }
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " | " << out.detail
              << " | " << fmt(secs, 2) << " s (budget " << fmt(c.budget_seconds, 0) << " s)" << std::endl;
    return out.passed;
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
    app.add_option("--seed", g_seed, "Sampling seed");
    CLI11_PARSE(app, argc, argv);

    bool all = true;
    for (const auto &c : criteria())
        if (only == 0 || c.id == only)
            all = run_one(c) && all;
    return all ? 0 : 1;
}
