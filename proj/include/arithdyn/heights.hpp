#ifndef ARITHDYN_HEIGHTS_HPP
#define ARITHDYN_HEIGHTS_HPP

#include "arithdyn/maps.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace arithdyn::heights {

using maps::AffinePoint;
using maps::TriangularMap;
using qpoly::Integer;

/// Point of projective space with coprime integer coordinates whose first
/// nonzero entry is positive.
class ProjectivePoint {
public:
    /// Scales by the gcd and fixes the sign. Throws on the zero vector.
    static ProjectivePoint canonical(std::vector<Integer> coordinates);

    const std::vector<Integer> &coordinates() const noexcept { return coords_; }
    std::size_t size() const noexcept { return coords_.size(); }

    friend bool operator==(const ProjectivePoint &, const ProjectivePoint &) = default;

private:
    explicit ProjectivePoint(std::vector<Integer> coords) : coords_(std::move(coords)) {}
    std::vector<Integer> coords_;
};

/// (x_1, ..., x_N) -> [1 : x_1 : ... : x_N] with denominators cleared.
ProjectivePoint embed_affine(const AffinePoint &point);

/// Segre image of a pair of projective points: all products a_i b_j.
ProjectivePoint segre(const ProjectivePoint &a, const ProjectivePoint &b);

/// Weil height over Q: log of the largest absolute coordinate. The exact
/// integer is kept so equality claims never go through floating point.
struct Height {
    Integer max_abs;
    double value = 0.0;
};

Height weil_height(const ProjectivePoint &q);

/// Natural log of a positive big integer, accurate to double precision.
double log_integer(const Integer &v);

/// h^+ = max(h, 1) compared exactly: both sides clamp to 1 when the
/// underlying integer is 1 or 2 (log 2 < 1 < log 3).
bool h_plus_equal(const Integer &a, const Integer &b);

struct HeightRow {
    std::size_t n = 0;
    Integer h_exact;  // max |coordinate| of the canonical projective point
    double h = 0.0;
    double h_plus = 0.0;
    std::optional<double> a_n;  // h_plus^{1/n}; undefined at n = 0
    double khat_n = 0.0;        // delta^{-n} h_plus
};

struct HeightSequence {
    TriangularMap map;
    AffinePoint start;
    double delta = 1.0;
    std::vector<HeightRow> rows;
    maps::Orbit orbit;
};

/// Rows n = 0..n_max along the exact orbit of `start`.
HeightSequence height_sequence(const TriangularMap &f, const AffinePoint &start, std::size_t n_max, double delta,
                               const maps::ResourceLimits &limits = {});

/// Same, reusing an orbit already computed.
HeightSequence height_sequence(const maps::Orbit &orbit, double delta);

struct AlphaBounds {
    double lower;
    double upper;
};

/// Min and max of a_n over the last `tail` rows. These are finite-tail
/// estimates, not limits.
AlphaBounds alpha_bounds(const HeightSequence &seq, std::size_t tail);

void write_height_csv(std::ostream &os, const HeightSequence &seq);

struct AdditivityRow {
    std::size_t n;
    Integer h_a;       // max coordinate of factor A
    Integer h_b;       // max coordinate of factor B
    Integer h_segre;   // max coordinate of the canonical Segre image
    double h_sum;      // h_A + h_B
    std::optional<double> sum_root;  // max(h_sum, 1)^{1/n}
    std::optional<double> max_factor_root;  // max(a_A(n), a_B(n))
    bool exact_additive;  // h_segre == h_a * h_b
    bool product_orbit_matches;  // (f x g)^n(P_A, P_B) == (f^n P_A, g^n P_B)
};

struct AdditivityReport {
    std::vector<AdditivityRow> rows;
    bool all_exact() const;
    /// |sum_root - max_factor_root| at the last row.
    double final_root_gap() const;
};

/// Height on the product space relative to pr_1^*H + pr_2^*H, computed on
/// the orbit of the product map, against the factors' heights.
AdditivityReport product_height_additivity(const TriangularMap &fa, const AffinePoint &pa, const TriangularMap &fb,
                                           const AffinePoint &pb, std::size_t n_max,
                                           const maps::ResourceLimits &limits = {});

}  // namespace arithdyn::heights

#endif  // ARITHDYN_HEIGHTS_HPP
