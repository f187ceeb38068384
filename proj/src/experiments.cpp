#include "arithdyn/experiments.hpp"

#include "arithdyn/degrees.hpp"
#include "arithdyn/exact_rank.hpp"
#include "arithdyn/padic.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace arithdyn::experiments {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double log_margin = 1e-9;

std::size_t binomial(std::size_t n, std::size_t k)
{
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

json point_json(const AffinePoint &p)
{
    json out = json::array();
    for (const auto &x : p)
        out.push_back(qpoly::to_string(x));
    return out;
}

json matrix_json(const degrees::DegreeMatrix &m)
{
    json rows = json::array();
    for (std::size_t i = 1; i <= m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 1; j <= m.size(); ++j)
            row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

class Checks {
public:
    void add(const std::string &name, const std::string &statement, bool passed, json detail = json::object())
    {
        items_.push_back({{"name", name}, {"statement", statement}, {"passed", passed}, {"detail", std::move(detail)}});
        all_ = all_ && passed;
    }
    const json &items() const { return items_; }
    bool all() const { return all_; }

private:
    json items_ = json::array();
    bool all_ = true;
};

class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    template <typename Writer>
    void write(const std::string &name, Writer &&writer)
    {
        const auto path = dir_ / name;
        std::ofstream os(path, std::ios::binary);
        if (!os)
            throw std::runtime_error("cannot open " + path.string() + " for writing");
        writer(os);
        if (!os)
            throw std::runtime_error("write failed for " + path.string());
        files_.push_back(path);
    }

    ExperimentResult finish(json summary)
    {
        write("summary.json", [&](std::ostream &os) { os << summary.dump(2) << '\n'; });
        return ExperimentResult{std::move(summary), files_};
    }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

AffinePoint parse_point(const json &j, std::size_t dimension, const std::string &what)
{
    if (!j.is_array() || j.size() != dimension)
        throw ConfigError(what + " must be an array of " + std::to_string(dimension) + " rationals");
    AffinePoint p;
    for (const auto &x : j) {
        if (x.is_string())
            p.push_back(qpoly::parse_rational(x.get<std::string>()));
        else if (x.is_number_integer())
            p.push_back(Rational(x.get<long>()));
        else
            throw ConfigError(what + ": coordinates must be strings like \"3/2\" or integers");
    }
    return p;
}

TriangularMap parse_map_entry(const json &j, const fs::path &base_dir)
{
    if (j.is_string()) {
        const fs::path path = base_dir / j.get<std::string>();
        std::ifstream is(path);
        if (!is)
            throw ConfigError("cannot read map file " + path.string());
        std::stringstream ss;
        ss << is.rdbuf();
        return maps::map_from_json(ss.str());
    }
    if (j.is_object())
        return maps::map_from_json(j.dump());
    throw ConfigError("\"map\" must be a map document or a path to one");
}

template <typename T>
T get_unsigned(const json &doc, const char *key, T fallback)
{
    if (!doc.contains(key))
        return fallback;
    if (!doc[key].is_number_unsigned())
        throw ConfigError(std::string("\"") + key + "\" must be a nonnegative integer");
    return doc[key].get<T>();
}

void write_degree_reports(OutputDir &out, json &summary, Checks &checks, const TriangularMap &f, std::size_t n_max,
                          const maps::ResourceLimits &limits)
{
    const auto deg = degrees::degree_matrix(f);
    const auto delta = degrees::dynamical_degree_exact(f);
    summary["degree_matrix"] = matrix_json(deg);
    summary["delta_exact"] = delta;
    summary["map_degree"] = degrees::map_degree(f);
    out.write("degree_matrix.csv", [&](std::ostream &os) { degrees::write_matrix_csv(os, deg); });

    const auto seq = degrees::dynamical_degree_sequence(f, n_max, limits);
    out.write("degrees.csv", [&](std::ostream &os) { degrees::write_sequence_csv(os, seq); });
    json rows = json::array();
    bool lower_bound = true;
    mpz_class power = 1;
    for (const auto &row : seq.rows) {
        power *= static_cast<unsigned long>(delta);
        lower_bound = lower_bound && mpz_class(static_cast<unsigned long>(row.degree)) >= power;
        rows.push_back({{"n", row.n}, {"deg_fn", row.degree}, {"root", row.root}});
    }
    summary["degree_sequence"] = {{"rows", rows}, {"truncated", seq.truncated}};
    if (seq.truncated)
        summary["degree_sequence"]["truncation_reason"] = seq.truncation_reason;
    if (seq.limit_claim)
        summary["degree_sequence"]["estimate"] = *seq.limit_claim;

    checks.add("degree_growth_lower_bound", "max_i d_ii^n <= deg(f^n) for every computed n", lower_bound);
    checks.add("degree_submultiplicative", "deg(f^(m+n)) <= deg(f^m) deg(f^n)", seq.submultiplicative());

    const auto comp = degrees::check_composition_bounds(f, f, limits);
    checks.add("composition_upper_bound", "Deg(f o g) <= Deg(g) Deg(f) entrywise", comp.upper_bound_holds,
               {{"deg_composite", matrix_json(comp.deg_composite)}, {"bound", matrix_json(comp.bound)}});
    checks.add("composition_diagonal", "Deg(f o g)_ii = d_ii d'_ii", comp.diagonal_product_holds);

    const auto spectral = degrees::spectral_radius_maxroot(deg, 1);
    checks.add("spectral_radius_triangular", "rho(Deg(f)) = max_i d_ii = delta_f",
               spectral.exact.has_value() && *spectral.exact == delta);
}

// Applies fn to every item on worker threads; results keep input order, and
// the first failing item (by index) rethrows.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T> &items, Fn fn) -> std::vector<decltype(fn(items.front()))>
{
    using R = decltype(fn(items.front()));
    const std::size_t workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    std::vector<std::optional<R>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < items.size(); k = next++) {
            try {
                slots[k].emplace(fn(items[k]));
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < std::min(workers, items.size()); ++w)
        pool.emplace_back(work);
    work();
    for (auto &t : pool)
        t.join();
    std::vector<R> out;
    out.reserve(items.size());
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (errors[k])
            std::rethrow_exception(errors[k]);
        out.push_back(std::move(*slots[k]));
    }
    return out;
}

json alpha_json(const heights::HeightSequence &seq)
{
    const std::size_t tail = std::min<std::size_t>(5, seq.rows.size() - 1);
    if (tail == 0)
        return json();
    const auto b = heights::alpha_bounds(seq, tail);
    return {{"tail", tail}, {"lower_estimate", b.lower}, {"upper_estimate", b.upper}};
}

padic::SectorConfig sector_for(const ExperimentConfig &cfg)
{
    const auto prime = cfg.prime ? *cfg.prime : padic::find_unit_prime(cfg.map);
    const auto C = cfg.C ? *cfg.C : padic::choose_C(cfg.map);
    return padic::make_sector_config(cfg.map, prime, C);
}

void run_first_case(const ExperimentConfig &cfg, OutputDir &out, json &summary, Checks &checks)
{
    const auto &f = cfg.map;
    const auto sector = sector_for(cfg);
    const auto deg = degrees::degree_matrix(f);
    const auto delta = degrees::dynamical_degree_exact(f);
    const long d11 = static_cast<long>(deg(1, 1));
    const double log_p = std::log(static_cast<double>(sector.prime));
    summary["prime"] = sector.prime;
    summary["C"] = sector.C;

    const auto samples = padic::sample_U(sector, cfg.sample_count(), cfg.seed);
    const auto stability = padic::verify_stability(f, sector, samples);
    bool image_in_U = true, first_dominates = true;
    for (const auto &row : stability.rows) {
        image_in_U = image_in_U && row.image_in_U;
        first_dominates = first_dominates && row.first_coordinate_dominates;
    }
    checks.add("sector_stability", "f(U) is contained in U", image_in_U);
    checks.add("first_coordinate_dominates", "|x_1^(1)|_p = max_i |x_i^(1)|_p on U", first_dominates);

    const auto witness = padic::u_minus_fu_witness(f, sector);
    checks.add("u_minus_f_u_nonempty", "U \\ f(U) is nonempty",
               padic::certified_outside_image(f, sector, witness),
               {{"witness", point_json(witness)}, {"image_pole_floor", padic::image_pole_floor(f, sector)}});

    bool orbit_in_U = true, dominant_value = true, pole_floor = true, khat_bound = true;
    json sample_json = json::array();
    std::vector<maps::Orbit> orbits;
    std::vector<std::vector<long>> signatures;

    std::ostringstream sector_csv;
    sector_csv << "point_id";
    for (std::size_t i = 1; i <= f.dimension(); ++i)
        sector_csv << ",e" << i;
    sector_csv << ",n";
    for (std::size_t i = 1; i <= f.dimension(); ++i)
        sector_csv << ",v_x" << i;
    sector_csv << ",in_U,first_dominates,dominant_value,pole_floor,khat_bound\n";

    const auto sequences = parallel_map(samples, [&](const AffinePoint &start) {
        return heights::height_sequence(f, start, cfg.n_max, static_cast<double>(delta), cfg.limits);
    });
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto &start = samples[k];
        const auto e = padic::pole_orders(start, sector.prime);
        const auto &seq = sequences[k];
        const double khat_floor = static_cast<double>(e[0]) * log_p;

        mpz_class floor = e[0];
        for (std::size_t n = 0; n < seq.orbit.points.size(); ++n) {
            const auto &pt = seq.orbit.points[n];
            if (n > 0)
                floor *= static_cast<unsigned long>(d11);
            const bool in_u = padic::in_U(pt, sector);
            bool dom = true;
            bool value_ok = true;
            if (n > 0) {
                std::vector<padic::Valuation> v;
                for (const auto &x : pt)
                    v.push_back(padic::vp(x, sector.prime));
                dom = v[0] == *std::min_element(v.begin(), v.end());
                const auto &prev = seq.orbit.points[n - 1];
                value_ok = padic::in_U(prev, sector) && padic::verify_dominant_value(f, sector, prev).all_hold();
            }
            const auto v1 = padic::vp(pt[0], sector.prime);
            const bool floor_ok = !v1.is_infinite() && mpz_class(-v1.value()) >= floor;
            const bool khat_ok = seq.rows[n].khat_n + log_margin >= khat_floor;

            orbit_in_U = orbit_in_U && in_u;
            first_dominates = first_dominates && dom;
            dominant_value = dominant_value && value_ok;
            pole_floor = pole_floor && floor_ok;
            khat_bound = khat_bound && khat_ok;

            sector_csv << k;
            for (auto ei : e)
                sector_csv << ',' << ei;
            sector_csv << ',' << n;
            for (const auto &x : pt)
                sector_csv << ',' << padic::vp(x, sector.prime);
            sector_csv << ',' << in_u << ',' << dom << ',' << value_ok << ',' << floor_ok << ',' << khat_ok << '\n';
        }

        out.write("heights_" + std::to_string(k) + ".csv",
                  [&](std::ostream &os) { heights::write_height_csv(os, seq); });
        out.write("orbit_" + std::to_string(k) + ".csv", [&](std::ostream &os) { maps::write_orbit_csv(os, seq.orbit); });
        sample_json.push_back({{"id", k}, {"point", point_json(start)}, {"poles", e}, {"alpha", alpha_json(seq)}});
        orbits.push_back(seq.orbit);
        signatures.push_back(e);
    }
    out.write("sector.csv", [&](std::ostream &os) { os << sector_csv.str(); });

    checks.add("orbit_stays_in_U", "f^n(P) in U for every computed n", orbit_in_U);
    checks.add("dominant_monomial_valuation",
               "v(x_i^(1)) = d_ii v(x_i) + sum_l e_il v(x_l) along every orbit", dominant_value);
    checks.add("pole_growth_floor", "-v_p(x_1^(n)) >= d_11^n (-v_p(x_1))", pole_floor);
    checks.add("khat_lower_bound", "delta^-n h^+(f^n P) >= log |x_1|_p > 0", khat_bound);

    bool disjoint = true;
    for (std::size_t a = 0; a < orbits.size(); ++a)
        for (std::size_t b = a + 1; b < orbits.size(); ++b)
            disjoint = disjoint && maps::orbits_disjoint_prefix(orbits[a], orbits[b]);
    const std::set<std::vector<long>> distinct(signatures.begin(), signatures.end());
    checks.add("disjoint_orbit_prefixes", "sampled points have pairwise disjoint orbits (finite prefixes)", disjoint);
    checks.add("distinct_valuation_signatures", "sampled points have pairwise distinct pole orders",
               distinct.size() == signatures.size());

    const auto density = density_check(samples, cfg.density_degree);
    summary["density"] = density.to_json();
    if (density.conclusive())
        checks.add("no_common_hypersurface",
                   "no nonzero polynomial of degree <= " + std::to_string(cfg.density_degree) +
                       " vanishes on the samples",
                   density.no_common_hypersurface());

    summary["samples"] = sample_json;
}

void run_second_case(const ExperimentConfig &cfg, OutputDir &out, json &summary, Checks &checks)
{
    const auto &f = cfg.map;
    const auto prime = cfg.prime ? *cfg.prime : padic::find_unit_prime(f);
    const auto deg = degrees::degree_matrix(f);
    const auto delta = degrees::dynamical_degree_exact(f);
    const double log_p = std::log(static_cast<double>(prime));
    summary["prime"] = prime;
    checks.add("delta_is_d22", "delta_f = d_22 when d_11 <= d_22", delta == deg(2, 2));

    if (deg(2, 2) >= 2) {
        // Images of U have -v_p(x_2) >= d_22, so pole order 1 is never reached.
        const AffinePoint witness{Rational(0), Rational(mpz_class(1), mpz_class(static_cast<unsigned long>(prime)))};
        const auto image_floor = static_cast<long>(deg(2, 2));
        checks.add("u_minus_f_u_nonempty", "U \\ f(U) is nonempty",
                   -padic::vp(witness[1], prime).value() < image_floor,
                   {{"witness", point_json(witness)}, {"image_pole_floor", image_floor}});
    }

    bool growth = true, stable = true, khat_bound = true;
    json points = json::array();
    std::ostringstream growth_csv;
    growth_csv << "point_id,n,v_x2,predicted,in_U\n";
    for (std::size_t k = 0; k < cfg.points.size(); ++k) {
        const auto &start = cfg.points[k];
        const auto report = padic::case_n2_growth(f, prime, start, cfg.n_max, cfg.limits);
        for (const auto &row : report.rows) {
            growth = growth && row.v_x2 == padic::Valuation(row.predicted);
            stable = stable && row.stays_in_U;
            growth_csv << k << ',' << row.n << ',' << row.v_x2 << ',' << row.predicted << ',' << row.stays_in_U
                       << '\n';
        }
        const auto seq = heights::height_sequence(f, start, cfg.n_max, static_cast<double>(delta), cfg.limits);
        const double khat_floor = static_cast<double>(-padic::vp(start[1], prime).value()) * log_p;
        for (const auto &row : seq.rows)
            khat_bound = khat_bound && row.khat_n + log_margin >= khat_floor;
        out.write("heights_" + std::to_string(k) + ".csv",
                  [&](std::ostream &os) { heights::write_height_csv(os, seq); });
        out.write("orbit_" + std::to_string(k) + ".csv", [&](std::ostream &os) { maps::write_orbit_csv(os, seq.orbit); });

        json vals = json::array();
        for (const auto &row : report.rows)
            vals.push_back(row.v_x2.value());
        points.push_back({{"id", k}, {"point", point_json(start)}, {"v_x2", vals}, {"alpha", alpha_json(seq)}});
    }
    out.write("growth.csv", [&](std::ostream &os) { os << growth_csv.str(); });
    checks.add("x2_valuation_growth", "|x_2^(n)|_p = |x_2|_p^(d_22^n)", growth);
    checks.add("sector_stability", "{|x_2|_p > 1} is stable under f", stable);
    checks.add("khat_lower_bound", "delta^-n h^+(f^n P) >= log |x_2|_p > 0", khat_bound);
    summary["points"] = points;
}

void run_product(const ExperimentConfig &cfg, OutputDir &out, json &summary, Checks &checks)
{
    const auto &f = cfg.map;
    const auto &g = *cfg.partner_map;
    const auto report = degrees::product_dynamical_degree(f, g);
    summary["product"] = {{"delta_f", report.delta_f},
                          {"delta_g", report.delta_g},
                          {"delta_product", report.product_delta},
                          {"partner_map", json::parse(maps::map_to_json(g))}};
    checks.add("product_dynamical_degree", "delta_(f x g) = max(delta_f, delta_g)", report.consistent());

    const auto additivity =
        heights::product_height_additivity(f, cfg.points.front(), g, *cfg.partner_point, cfg.n_max, cfg.limits);
    out.write("additivity.csv", [&](std::ostream &os) {
        os << "n,h_a_bits,h_b_bits,h_product_bits,h_sum,sum_root,max_factor_root,exact_additive\n";
        os.precision(std::numeric_limits<double>::max_digits10);
        for (const auto &row : additivity.rows) {
            os << row.n << ',' << mpz_sizeinbase(row.h_a.get_mpz_t(), 2) << ','
               << mpz_sizeinbase(row.h_b.get_mpz_t(), 2) << ',' << mpz_sizeinbase(row.h_segre.get_mpz_t(), 2) << ','
               << row.h_sum << ',';
            if (row.sum_root)
                os << *row.sum_root;
            os << ',';
            if (row.max_factor_root)
                os << *row.max_factor_root;
            os << ',' << row.exact_additive << '\n';
        }
    });
    checks.add("height_additivity", "h on the product = h_A + h_B, integer-exact on every row", additivity.all_exact());
    summary["product"]["final_root_gap"] = additivity.final_root_gap();
}

void run_iterate(const ExperimentConfig &cfg, OutputDir &out, json &summary, Checks &checks)
{
    const auto report = iterate_consistency(cfg.map, cfg.points.front(), cfg.t, cfg.n_max, cfg.limits);
    summary["iterate"] = {{"t", report.t}, {"delta_f", report.delta_f}, {"delta_ft", report.delta_ft}};
    out.write("iterate.csv", [&](std::ostream &os) {
        os << "n,iterate_height_bits,direct_height_bits,h_plus_equal\n";
        for (const auto &row : report.rows)
            os << row.n << ',' << mpz_sizeinbase(row.iterate_height.get_mpz_t(), 2) << ','
               << mpz_sizeinbase(row.direct_height.get_mpz_t(), 2) << ',' << row.h_plus_equal << '\n';
    });
    checks.add("iterate_dynamical_degree", "delta_(f^t) = delta_f^t", report.delta_power_holds());
    checks.add("iterate_height_rows", "h^+((f^t)^n P) = h^+(f^(tn) P)", report.rows_hold());
}

}  // namespace

// ------------------------------------------------------------------ density

std::vector<qpoly::Monomial> monomials_up_to(std::size_t dimension, unsigned d)
{
    std::vector<qpoly::Monomial> out;
    qpoly::Monomial m(dimension);
    // Enumerate exponent vectors with sum <= d recursively.
    auto rec = [&](auto &&self, std::size_t i, unsigned budget) -> void {
        if (i == dimension) {
            out.push_back(m);
            return;
        }
        for (unsigned e = 0; e <= budget; ++e) {
            m[i] = e;
            self(self, i + 1, budget - e);
        }
        m[i] = 0;
    };
    rec(rec, 0, d);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::optional<qpoly::Polynomial> DensityReport::vanishing_polynomial() const
{
    if (!kernel_vector)
        return std::nullopt;
    qpoly::Polynomial p(monomials.empty() ? 0 : monomials.front().dimension());
    for (std::size_t k = 0; k < monomials.size(); ++k)
        p.add_term(monomials[k], Rational((*kernel_vector)[k]));
    return p;
}

std::string DensityReport::verdict() const
{
    if (!conclusive())
        return "inconclusive: need >= " + std::to_string(monomial_count) + " points";
    if (no_common_hypersurface())
        return "no common hypersurface of degree <= " + std::to_string(degree);
    return "common hypersurface of degree <= " + std::to_string(degree);
}

json DensityReport::to_json() const
{
    json j{{"degree", degree},
           {"monomial_count", monomial_count},
           {"point_count", point_count},
           {"rank", rank},
           {"conclusive", conclusive()},
           {"no_common_hypersurface", no_common_hypersurface()},
           {"verdict", verdict()}};
    if (auto p = vanishing_polynomial())
        j["vanishing_polynomial"] = qpoly::to_string(*p);
    return j;
}

DensityReport density_check(const std::vector<AffinePoint> &points, unsigned degree)
{
    if (degree < 1)
        throw std::invalid_argument("density_check needs degree >= 1");
    if (points.empty())
        throw std::invalid_argument("density_check needs at least one point");
    const std::size_t n = points.front().size();
    for (const auto &p : points)
        if (p.size() != n)
            throw qpoly::DimensionMismatch(n, p.size());
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b)
            if (points[a] == points[b])
                throw DuplicatePoints("points " + std::to_string(a) + " and " + std::to_string(b) + " coincide: " +
                                      maps::to_string(points[a]));

    DensityReport report;
    report.degree = degree;
    report.monomials = monomials_up_to(n, degree);
    report.monomial_count = report.monomials.size();
    report.point_count = points.size();

    std::vector<std::vector<Rational>> rows;
    rows.reserve(points.size());
    for (const auto &p : points) {
        std::vector<Rational> row;
        row.reserve(report.monomial_count);
        for (const auto &m : report.monomials)
            row.push_back(qpoly::evaluate(qpoly::Polynomial::monomial(m, Rational(1)), p));
        rows.push_back(std::move(row));
    }
    auto elimination = fraction_free_reduce(clear_row_denominators(rows));
    report.rank = elimination.rank;
    report.kernel_vector = std::move(elimination.kernel_vector);
    return report;
}

std::vector<AffinePoint> read_points_csv(std::istream &is)
{
    auto split = [](const std::string &line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(line);
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (!line.empty() && line.back() == ',')
            cells.emplace_back();
        for (auto &c : cells) {
            c.erase(0, c.find_first_not_of(" \t\r"));
            c.erase(c.find_last_not_of(" \t\r") + 1);
        }
        return cells;
    };

    std::string line;
    if (!std::getline(is, line))
        throw ConfigError("points CSV is empty");
    const auto header = split(line);

    // Column index per coordinate: either (value) or (num, den).
    std::vector<std::size_t> value_col, num_col, den_col;
    auto find = [&](const std::string &name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    for (std::size_t i = 1;; ++i) {
        const auto base = "x" + std::to_string(i);
        if (auto c = find(base)) {
            value_col.push_back(*c);
        } else if (auto cn = find(base + "_num")) {
            auto cd = find(base + "_den");
            if (!cd)
                throw ConfigError("points CSV has " + base + "_num without " + base + "_den");
            num_col.push_back(*cn);
            den_col.push_back(*cd);
        } else {
            break;
        }
    }
    if (value_col.empty() == num_col.empty())
        throw ConfigError("points CSV header needs columns x1..xN or x1_num,x1_den,...");

    std::vector<AffinePoint> points;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto cells = split(line);
        auto cell = [&](std::size_t c) -> const std::string & {
            if (c >= cells.size())
                throw ConfigError("points CSV line " + std::to_string(line_no) + " is short");
            return cells[c];
        };
        AffinePoint p;
        if (!value_col.empty()) {
            for (auto c : value_col)
                p.push_back(qpoly::parse_rational(cell(c)));
        } else {
            for (std::size_t i = 0; i < num_col.size(); ++i)
                p.push_back(qpoly::parse_rational(cell(num_col[i]) + "/" + cell(den_col[i])));
        }
        points.push_back(std::move(p));
    }
    return points;
}

// ---------------------------------------------------------------- iterates

bool IterateConsistencyReport::delta_power_holds() const
{
    mpz_class power = 1;
    for (std::size_t k = 0; k < t; ++k)
        power *= static_cast<unsigned long>(delta_f);
    return power == static_cast<unsigned long>(delta_ft);
}

bool IterateConsistencyReport::rows_hold() const
{
    return std::all_of(rows.begin(), rows.end(), [](const IterateRow &r) { return r.h_plus_equal; });
}

IterateConsistencyReport iterate_consistency(const TriangularMap &f, const AffinePoint &p, std::size_t t,
                                             std::size_t n_max, const maps::ResourceLimits &limits)
{
    if (t < 1 || t > 3)
        throw std::invalid_argument("iterate_consistency supports 1 <= t <= 3");
    IterateConsistencyReport report;
    report.t = t;
    const auto ft = maps::iterate_symbolic(f, t, limits);
    report.delta_f = degrees::dynamical_degree_exact(f);
    report.delta_ft = degrees::dynamical_degree_exact(ft);

    const auto iterated = maps::orbit(ft, p, n_max, limits);
    const auto direct = maps::orbit(f, p, t * n_max, limits);
    for (std::size_t n = 0; n <= n_max; ++n) {
        IterateRow row;
        row.n = n;
        row.iterate_height = heights::weil_height(heights::embed_affine(iterated.points[n])).max_abs;
        row.direct_height = heights::weil_height(heights::embed_affine(direct.points[t * n])).max_abs;
        row.h_plus_equal = heights::h_plus_equal(row.iterate_height, row.direct_height);
        report.rows.push_back(std::move(row));
    }
    return report;
}

// -------------------------------------------------------------- experiment

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::first_case:
        return "first_case";
    case Mode::second_case_n2:
        return "second_case_n2";
    case Mode::product:
        return "product";
    case Mode::iterate_check:
        return "iterate_check";
    }
    return "unknown";
}

std::size_t ExperimentConfig::sample_count() const
{
    return samples ? *samples : 2 * binomial(map.dimension() + density_degree, density_degree);
}

ExperimentConfig parse_config(std::string_view json_text, const fs::path &base_dir)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");
    if (!doc.contains("map"))
        throw ConfigError("config needs \"map\"");

    ExperimentConfig cfg;
    cfg.map = parse_map_entry(doc["map"], base_dir);

    const auto mode = doc.value("mode", std::string("first_case"));
    if (mode == "first_case")
        cfg.mode = Mode::first_case;
    else if (mode == "second_case_n2")
        cfg.mode = Mode::second_case_n2;
    else if (mode == "product")
        cfg.mode = Mode::product;
    else if (mode == "iterate_check")
        cfg.mode = Mode::iterate_check;
    else
        throw ConfigError("unknown mode \"" + mode + "\"");

    if (doc.contains("prime"))
        cfg.prime = get_unsigned<std::uint64_t>(doc, "prime", 0);
    if (doc.contains("C"))
        cfg.C = get_unsigned<std::uint64_t>(doc, "C", 0);
    cfg.n_max = get_unsigned<std::size_t>(doc, "n_max", cfg.n_max);
    cfg.degree_n_max = get_unsigned<std::size_t>(doc, "degree_n_max", std::min<std::size_t>(cfg.n_max, 6));
    if (doc.contains("samples"))
        cfg.samples = get_unsigned<std::size_t>(doc, "samples", 0);
    cfg.seed = get_unsigned<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.density_degree = get_unsigned<unsigned>(doc, "density_degree", cfg.density_degree);
    cfg.t = get_unsigned<std::size_t>(doc, "t", cfg.t);
    if (doc.contains("output")) {
        if (!doc["output"].is_string())
            throw ConfigError("\"output\" must be a path string");
        cfg.output = doc["output"].get<std::string>();
    }
    if (doc.contains("limits")) {
        const auto &lim = doc["limits"];
        cfg.limits.max_terms = get_unsigned<std::size_t>(lim, "max_terms", cfg.limits.max_terms);
        cfg.limits.max_coefficient_bits =
            get_unsigned<std::size_t>(lim, "max_coefficient_bits", cfg.limits.max_coefficient_bits);
    }
    if (doc.contains("points")) {
        if (!doc["points"].is_array())
            throw ConfigError("\"points\" must be an array of points");
        for (const auto &p : doc["points"])
            cfg.points.push_back(parse_point(p, cfg.map.dimension(), "point"));
    }
    if (doc.contains("partner")) {
        const auto &partner = doc["partner"];
        if (!partner.is_object() || !partner.contains("map"))
            throw ConfigError("\"partner\" needs a \"map\"");
        cfg.partner_map = parse_map_entry(partner["map"], base_dir);
        if (partner.contains("point"))
            cfg.partner_point = parse_point(partner["point"], cfg.partner_map->dimension(), "partner point");
    }

    if (cfg.n_max < 1 || cfg.degree_n_max < 1)
        throw ConfigError("n_max and degree_n_max must be >= 1");
    if (cfg.density_degree < 1)
        throw ConfigError("density_degree must be >= 1");
    if (cfg.samples && *cfg.samples < 1)
        throw ConfigError("samples must be >= 1");
    if (cfg.prime && !padic::is_prime(*cfg.prime))
        throw ConfigError("prime override " + std::to_string(*cfg.prime) + " is not prime");

    switch (cfg.mode) {
    case Mode::first_case:
        if (!padic::strictly_decreasing_diagonal(cfg.map))
            throw ConfigError("first_case needs d_ii > d_{i+1,i+1} for every i");
        try {
            sector_for(cfg);
        } catch (const padic::SectorConfigError &e) {
            throw ConfigError(e.what());
        }
        break;
    case Mode::second_case_n2: {
        if (cfg.map.dimension() != 2)
            throw ConfigError("second_case_n2 needs N = 2");
        const auto deg = degrees::degree_matrix(cfg.map);
        if (deg(1, 1) > deg(2, 2))
            throw ConfigError("second_case_n2 needs d_11 <= d_22 (use first_case otherwise)");
        if (cfg.points.empty())
            throw ConfigError("second_case_n2 needs \"points\"");
        break;
    }
    case Mode::product:
        if (!cfg.partner_map || !cfg.partner_point || cfg.points.empty())
            throw ConfigError("product needs \"points\" and a \"partner\" with \"map\" and \"point\"");
        break;
    case Mode::iterate_check:
        if (cfg.points.empty())
            throw ConfigError("iterate_check needs \"points\"");
        if (cfg.t < 1 || cfg.t > 3)
            throw ConfigError("iterate_check needs 1 <= t <= 3");
        break;
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path &path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("cannot read config " + path.string());
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

bool ExperimentResult::all_passed() const
{
    return summary.value("all_passed", false);
}

ExperimentResult run_experiment(const ExperimentConfig &cfg)
{
    OutputDir out(cfg.output);
    Checks checks;
    json summary{{"schema_version", summary_schema_version},
                 {"mode", to_string(cfg.mode)},
                 {"map", json::parse(maps::map_to_json(cfg.map))},
                 {"n_max", cfg.n_max},
                 {"seed", cfg.seed}};

    write_degree_reports(out, summary, checks, cfg.map, cfg.degree_n_max, cfg.limits);
    switch (cfg.mode) {
    case Mode::first_case:
        run_first_case(cfg, out, summary, checks);
        break;
    case Mode::second_case_n2:
        run_second_case(cfg, out, summary, checks);
        break;
    case Mode::product:
        run_product(cfg, out, summary, checks);
        break;
    case Mode::iterate_check:
        run_iterate(cfg, out, summary, checks);
        break;
    }
    summary["checks"] = checks.items();
    summary["all_passed"] = checks.all();
    return out.finish(std::move(summary));
}

ExperimentResult run_degrees(const TriangularMap &f, std::size_t n_max, const fs::path &out_dir,
                             const maps::ResourceLimits &limits)
{
    OutputDir out(out_dir);
    Checks checks;
    json summary{{"schema_version", summary_schema_version},
                 {"mode", "degrees"},
                 {"map", json::parse(maps::map_to_json(f))}};
    write_degree_reports(out, summary, checks, f, n_max, limits);

    const auto spectral = degrees::spectral_radius_maxroot(degrees::degree_matrix(f), std::max<std::size_t>(n_max, 1));
    summary["spectral_radius"] = {{"roots", spectral.roots}, {"last", spectral.last}};
    if (spectral.exact)
        summary["spectral_radius"]["exact"] = *spectral.exact;
    summary["checks"] = checks.items();
    summary["all_passed"] = checks.all();
    return out.finish(std::move(summary));
}

ExperimentResult run_density(const std::vector<AffinePoint> &points, unsigned degree, const fs::path &out_dir)
{
    OutputDir out(out_dir);
    const auto report = density_check(points, degree);
    Checks checks;
    json summary{{"schema_version", summary_schema_version}, {"mode", "density"}, {"density", report.to_json()}};
    if (report.conclusive())
        checks.add("no_common_hypersurface",
                   "no nonzero polynomial of degree <= " + std::to_string(degree) + " vanishes on the points",
                   report.no_common_hypersurface());
    summary["checks"] = checks.items();
    summary["all_passed"] = checks.all();
    return out.finish(std::move(summary));
}

}  // namespace arithdyn::experiments
