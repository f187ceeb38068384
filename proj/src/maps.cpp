#include "arithdyn/maps.hpp"

#include <algorithm>
#include <sstream>

namespace arithdyn::maps {

namespace {

void check_limits(const Polynomial &p, const ResourceLimits &limits, std::size_t last_safe)
{
    if (p.term_count() > limits.max_terms)
        throw ResourceExceeded("term count " + std::to_string(p.term_count()) + " exceeds cap " +
                                   std::to_string(limits.max_terms),
                               last_safe);
    const auto bits = p.max_coefficient_bits();
    if (bits > limits.max_coefficient_bits)
        throw ResourceExceeded("coefficient size " + std::to_string(bits) + " bits exceeds cap " +
                                   std::to_string(limits.max_coefficient_bits),
                               last_safe);
}

Polynomial shift_variables(const Polynomial &p, std::size_t offset, std::size_t dimension)
{
    Polynomial out(dimension);
    for (const auto &[m, c] : p.terms()) {
        qpoly::Monomial shifted(dimension);
        for (std::size_t i = 0; i < m.dimension(); ++i)
            shifted[offset + i] = m[i];
        out.add_term(shifted, c);
    }
    return out;
}

}  // namespace

NotTriangular::NotTriangular(std::size_t component, std::size_t variable)
    : std::invalid_argument("NotTriangular: component f" + std::to_string(component) + " depends on x" +
                            std::to_string(variable)),
      component_(component), variable_(variable)
{
}

NotDominant::NotDominant(std::size_t component)
    : std::invalid_argument("NotDominant: component f" + std::to_string(component) + " has degree 0 in x" +
                            std::to_string(component)),
      component_(component)
{
}

ResourceExceeded::ResourceExceeded(const std::string &what, std::size_t last_safe)
    : std::runtime_error(what + " (last safe step " + std::to_string(last_safe) + ")"), last_safe_(last_safe)
{
}

OrbitResourceExceeded::OrbitResourceExceeded(const std::string &what, Orbit partial)
    : ResourceExceeded(what, partial.points.empty() ? 0 : partial.points.size() - 1),
      partial_(std::move(partial))
{
}

TriangularMap TriangularMap::validate(std::vector<Polynomial> components)
{
    const std::size_t n = components.size();
    if (n == 0)
        throw std::invalid_argument("a map needs at least one component");
    for (std::size_t i = 0; i < n; ++i)
        if (components[i].dimension() != n)
            throw qpoly::DimensionMismatch(n, components[i].dimension());

    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j < i; ++j)
            if (qpoly::degree_in_var(components[i - 1], j) != 0)
                throw NotTriangular(i, j);
    for (std::size_t i = 1; i <= n; ++i)
        if (qpoly::degree_in_var(components[i - 1], i) == 0)
            throw NotDominant(i);
    return TriangularMap(std::move(components));
}

TriangularMap TriangularMap::identity(std::size_t dimension)
{
    std::vector<Polynomial> comps;
    for (std::size_t i = 0; i < dimension; ++i)
        comps.push_back(Polynomial::variable(dimension, i));
    return validate(std::move(comps));
}

std::size_t TriangularMap::term_count() const
{
    std::size_t total = 0;
    for (const auto &c : components_)
        total += c.term_count();
    return total;
}

AffinePoint apply(const TriangularMap &f, const AffinePoint &point)
{
    if (point.size() != f.dimension())
        throw qpoly::DimensionMismatch(f.dimension(), point.size());
    AffinePoint out;
    out.reserve(point.size());
    for (const auto &c : f.components())
        out.push_back(qpoly::evaluate(c, point));
    return out;
}

TriangularMap compose(const TriangularMap &f, const TriangularMap &g, const ResourceLimits &limits)
{
    if (f.dimension() != g.dimension())
        throw qpoly::DimensionMismatch(f.dimension(), g.dimension());
    std::vector<Polynomial> comps;
    comps.reserve(f.dimension());
    for (const auto &fj : f.components()) {
        comps.push_back(qpoly::substitute(fj, g.components()));
        check_limits(comps.back(), limits, 0);
    }
    return TriangularMap::validate(std::move(comps));
}

TriangularMap iterate_symbolic(const TriangularMap &f, std::size_t t, const ResourceLimits &limits)
{
    if (t == 0)
        throw std::invalid_argument("iterate_symbolic needs t >= 1");
    TriangularMap current = f;
    for (std::size_t step = 2; step <= t; ++step) {
        try {
            current = compose(f, current, limits);
        } catch (const ResourceExceeded &e) {
            throw ResourceExceeded("iterate " + std::to_string(step) + ": " + e.what(), step - 1);
        }
    }
    return current;
}

TriangularMap product_map(const TriangularMap &f, const TriangularMap &g)
{
    const std::size_t n = f.dimension() + g.dimension();
    std::vector<Polynomial> comps;
    comps.reserve(n);
    for (const auto &c : f.components())
        comps.push_back(shift_variables(c, 0, n));
    for (const auto &c : g.components())
        comps.push_back(shift_variables(c, f.dimension(), n));
    // Block-diagonal, so triangular in this order; re-validated anyway.
    return TriangularMap::validate(std::move(comps));
}

Orbit orbit(const TriangularMap &f, const AffinePoint &start, std::size_t n_max, const ResourceLimits &limits)
{
    if (start.size() != f.dimension())
        throw qpoly::DimensionMismatch(f.dimension(), start.size());
    Orbit out{f, start, std::vector<AffinePoint>(1, start)};
    out.points.reserve(n_max + 1);
    for (std::size_t n = 1; n <= n_max; ++n) {
        AffinePoint next = maps::apply(f, out.points.back());
        for (std::size_t i = 0; i < next.size(); ++i) {
            const auto bits = qpoly::bit_size(next[i]);
            if (bits > limits.max_coefficient_bits) {
                std::ostringstream os;
                os << "orbit coordinate x" << (i + 1) << " at n=" << n << " needs " << bits
                   << " bits, cap is " << limits.max_coefficient_bits;
                throw OrbitResourceExceeded(os.str(), std::move(out));
            }
        }
        out.points.push_back(std::move(next));
    }
    return out;
}

bool orbits_disjoint_prefix(const Orbit &a, const Orbit &b)
{
    for (const auto &p : a.points)
        for (const auto &q : b.points)
            if (p == q)
                return false;
    return true;
}

std::string to_string(const AffinePoint &point)
{
    std::string out = "(";
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (i)
            out += ", ";
        out += qpoly::to_string(point[i]);
    }
    return out + ")";
}

}  // namespace arithdyn::maps
