#ifndef ARITHDYN_MAPS_HPP
#define ARITHDYN_MAPS_HPP

#include "arithdyn/qpoly.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace arithdyn::maps {

using qpoly::Polynomial;
using qpoly::Rational;

using AffinePoint = std::vector<Rational>;

/// Caps on symbolic iteration and orbit growth. Overruns throw
/// ResourceExceeded; nothing is ever truncated silently.
struct ResourceLimits {
    std::size_t max_terms = 1'000'000;
    std::size_t max_coefficient_bits = 10'000'000;
};

/// Component i (1-based) uses x_j for some j < i.
class NotTriangular : public std::invalid_argument {
public:
    NotTriangular(std::size_t component, std::size_t variable);
    std::size_t component() const noexcept { return component_; }
    std::size_t variable() const noexcept { return variable_; }

private:
    std::size_t component_;
    std::size_t variable_;
};

/// deg_{x_i} f_i = 0 for the reported (1-based) i.
class NotDominant : public std::invalid_argument {
public:
    explicit NotDominant(std::size_t component);
    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

/// A resource cap was hit. `last_safe()` is the last iterate index that
/// stayed within the limits (0 when even the first step overflowed).
class ResourceExceeded : public std::runtime_error {
public:
    ResourceExceeded(const std::string &what, std::size_t last_safe);
    std::size_t last_safe() const noexcept { return last_safe_; }

private:
    std::size_t last_safe_;
};

/// Triangular polynomial self-map f = (f_1, ..., f_N) of affine N-space,
/// with f_i in Q[x_i, ..., x_N] and deg_{x_i} f_i >= 1.
///
/// For triangular maps the diagonal condition is equivalent to dominance:
/// with every deg_{x_i} f_i >= 1 the components are algebraically
/// independent by back substitution, and if some deg_{x_i} f_i = 0 then
/// f_i, ..., f_N are N-i+1 polynomials in the N-i variables x_{i+1}..x_N.
class TriangularMap {
public:
    /// Checks triangular support and dominance; throws NotTriangular or
    /// NotDominant naming the first offending index.
    static TriangularMap validate(std::vector<Polynomial> components);

    static TriangularMap identity(std::size_t dimension);

    std::size_t dimension() const noexcept { return components_.size(); }
    const std::vector<Polynomial> &components() const noexcept { return components_; }
    /// 1-based component access.
    const Polynomial &component(std::size_t i) const { return components_.at(i - 1); }

    std::size_t term_count() const;

    friend bool operator==(const TriangularMap &, const TriangularMap &) = default;

private:
    explicit TriangularMap(std::vector<Polynomial> components) : components_(std::move(components)) {}

    std::vector<Polynomial> components_;
};

/// f(P), exactly.
AffinePoint apply(const TriangularMap &f, const AffinePoint &point);

/// (f o g)_j = f_j(g_1, ..., g_N).
TriangularMap compose(const TriangularMap &f, const TriangularMap &g, const ResourceLimits &limits = {});

/// t-fold composition f^t, t >= 1.
TriangularMap iterate_symbolic(const TriangularMap &f, std::size_t t, const ResourceLimits &limits = {});

/// f x g on N_f + N_g variables: f acts on x_1..x_{N_f}, g on the rest.
TriangularMap product_map(const TriangularMap &f, const TriangularMap &g);

struct Orbit {
    TriangularMap map;
    AffinePoint start;
    std::vector<AffinePoint> points;  // points[n] = f^n(start)
};

/// Orbit prefix f^0(P), ..., f^{n_max}(P). On overflow throws
/// OrbitResourceExceeded, which carries the safe prefix.
Orbit orbit(const TriangularMap &f, const AffinePoint &start, std::size_t n_max,
            const ResourceLimits &limits = {});

class OrbitResourceExceeded : public ResourceExceeded {
public:
    OrbitResourceExceeded(const std::string &what, Orbit partial);
    const Orbit &partial() const noexcept { return partial_; }

private:
    Orbit partial_;
};

/// No point of one prefix equals any point of the other.
bool orbits_disjoint_prefix(const Orbit &a, const Orbit &b);

std::string to_string(const AffinePoint &point);

/// Map description document: {"dimension": N, "components": ["<poly>", ...]}.
TriangularMap map_from_json(std::string_view text);
std::string map_to_json(const TriangularMap &f);

/// CSV with header n,x1_num,x1_den,...,xN_num,xN_den.
void write_orbit_csv(std::ostream &os, const Orbit &orbit);

}  // namespace arithdyn::maps

#endif  // ARITHDYN_MAPS_HPP
