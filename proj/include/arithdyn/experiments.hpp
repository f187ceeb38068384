#ifndef ARITHDYN_EXPERIMENTS_HPP
#define ARITHDYN_EXPERIMENTS_HPP

#include "arithdyn/heights.hpp"
#include "arithdyn/maps.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arithdyn::experiments {

using maps::AffinePoint;
using maps::TriangularMap;

inline constexpr int summary_schema_version = 1;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DuplicatePoints : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ------------------------------------------------------------------ density

struct DensityReport {
    unsigned degree = 0;
    std::size_t monomial_count = 0;  // binom(N + d, d)
    std::size_t point_count = 0;
    std::size_t rank = 0;
    std::vector<qpoly::Monomial> monomials;  // column order
    /// Coefficients (in `monomials` order) of a nonzero polynomial of
    /// degree <= d vanishing on every point; empty iff rank == M.
    std::optional<std::vector<qpoly::Integer>> kernel_vector;

    bool conclusive() const { return point_count >= monomial_count; }
    bool no_common_hypersurface() const { return rank == monomial_count; }
    std::optional<qpoly::Polynomial> vanishing_polynomial() const;
    std::string verdict() const;
    nlohmann::json to_json() const;
};

/// All monomials of total degree <= d in N variables, descending lex.
std::vector<qpoly::Monomial> monomials_up_to(std::size_t dimension, unsigned d);

/// Exact rank over Q of the (points x monomials) evaluation matrix.
/// Throws DuplicatePoints if two points coincide.
DensityReport density_check(const std::vector<AffinePoint> &points, unsigned degree);

/// Points from CSV. The header selects the layout: either x1,...,xN with
/// rational text, or x1_num,x1_den,... (the orbit export). Extra columns
/// such as n or id are ignored.
std::vector<AffinePoint> read_points_csv(std::istream &is);

// ---------------------------------------------------------------- iterates

struct IterateRow {
    std::size_t n;
    qpoly::Integer iterate_height;  // H((f^t)^n P)
    qpoly::Integer direct_height;   // H(f^{tn} P)
    bool h_plus_equal;
};

struct IterateConsistencyReport {
    std::size_t t = 1;
    std::uint64_t delta_f = 0;
    std::uint64_t delta_ft = 0;
    std::vector<IterateRow> rows;
    bool delta_power_holds() const;
    bool rows_hold() const;
};

/// delta(f^t) = delta(f)^t and h^+((f^t)^n P) = h^+(f^{tn} P) for n <= n_max.
IterateConsistencyReport iterate_consistency(const TriangularMap &f, const AffinePoint &p, std::size_t t,
                                             std::size_t n_max, const maps::ResourceLimits &limits = {});

// -------------------------------------------------------------- experiment

enum class Mode { first_case, second_case_n2, product, iterate_check };

std::string to_string(Mode mode);

struct ExperimentConfig {
    TriangularMap map = TriangularMap::identity(1);
    Mode mode = Mode::first_case;
    std::optional<std::uint64_t> prime;
    std::optional<std::uint64_t> C;
    std::size_t n_max = 6;
    std::size_t degree_n_max = 6;
    std::optional<std::size_t> samples;  // default 2 * binom(N + d, d)
    std::uint64_t seed = 1;
    unsigned density_degree = 2;
    std::filesystem::path output = "out";
    std::vector<AffinePoint> points;
    std::optional<TriangularMap> partner_map;
    std::optional<AffinePoint> partner_point;
    std::size_t t = 2;
    maps::ResourceLimits limits;

    std::size_t sample_count() const;
};

/// Parses a config document. Relative map paths resolve against `base_dir`.
/// Mode preconditions are checked here, before any computation.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path &base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path &path);

struct ExperimentResult {
    nlohmann::json summary;
    std::vector<std::filesystem::path> files;
    bool all_passed() const;
};

/// Runs the pipeline for cfg.mode and writes CSV reports plus summary.json
/// under cfg.output.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Degree report for a map: matrix, exact value, sequence, spectral radius.
ExperimentResult run_degrees(const TriangularMap &f, std::size_t n_max, const std::filesystem::path &out_dir,
                             const maps::ResourceLimits &limits = {});

/// Density report for points read from CSV.
ExperimentResult run_density(const std::vector<AffinePoint> &points, unsigned degree,
                             const std::filesystem::path &out_dir);

}  // namespace arithdyn::experiments

#endif  // ARITHDYN_EXPERIMENTS_HPP
