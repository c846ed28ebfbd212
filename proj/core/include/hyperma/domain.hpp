#pragma once

// Dirichlet problem instances: a domain with an analytic defining function,
// boundary data, a right-hand side f(q, u, p), and seed-fixed sample sets.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperma/test_function.hpp"

namespace hyperma {

enum class DomainKind {
    ball,       // scale (|q - c|^2 - R^2)
    ellipsoid,  // scale (sum_i c_i |q_i - center_i|^2 - 1)
    box,        // |x_p - center_p| < half_width for every real coordinate
};

std::string to_string(DomainKind kind);

struct DomainSpec {
    std::size_t n = 1;
    DomainKind kind = DomainKind::ball;
    double radius = 1.0;
    std::vector<double> coeffs;  // ellipsoid, length n, positive
    double half_width = 0.5;
    Point center;                // empty means the origin
    double scale = 1.0;          // multiplies r

    static DomainSpec ball(std::size_t n, double radius = 1.0, Point center = {});
    static DomainSpec ellipsoid(std::vector<double> coeffs, Point center = {});
    static DomainSpec box(std::size_t n, double half_width, Point center = {});

    // Throws PreconditionError on inconsistent parameters.
    void validate() const;

    Point center_point() const;

    // Strictly psh defining function: negative inside, zero on the boundary.
    // A box is not strictly pseudoconvex; it gets the defining function of
    // its circumscribed ball, which is negative on the box but does not
    // vanish on its faces.
    TestFunction defining_function() const;
    bool defining_function_exact() const { return kind != DomainKind::box; }

    bool contains(std::span<const double> x) const;
    // Half extent of the axis-aligned bounding box, per real coordinate.
    std::vector<double> half_extent() const;
};

enum class RhsKind {
    constant,    // value
    abs_sq,      // constant + scale |q - c|^2
    exp_u,       // constant + scale exp(rate u)
    grad_power,  // constant + scale |p|^exponent (exponent defaults to n)
};

std::string to_string(RhsKind kind);

struct RhsFunction {
    RhsKind kind = RhsKind::constant;
    double value = 1.0;     // constant kind
    double constant = 0.0;  // additive part of the other kinds
    double scale = 1.0;
    double rate = 1.0;
    double exponent = -1.0;  // negative: use n
    Point center;

    static RhsFunction constant_value(double v);
    static RhsFunction abs_sq(double scale, double constant = 0.0);
    static RhsFunction exp_u(double scale = 1.0, double rate = 1.0, double constant = 0.0);
    static RhsFunction grad_power(double constant, double scale, double exponent = -1.0);

    // f(q, u, |p|)
    double operator()(std::span<const double> x, double u, double grad_norm, std::size_t n) const;
    // df/du
    double du(std::span<const double> x, double u, double grad_norm, std::size_t n) const;
    bool depends_on_gradient() const { return kind == RhsKind::grad_power; }
    bool depends_on_u() const { return kind == RhsKind::exp_u; }
    // Multiplies f by s.
    RhsFunction scaled(double s) const;
};

struct Problem {
    std::size_t n = 1;
    DomainSpec domain;
    TestFunction phi;
    RhsFunction f;
    std::optional<TestFunction> exact;
};

struct SampleSet {
    std::vector<Point> interior;
    std::vector<Point> boundary;
};

inline constexpr std::size_t kDefaultInteriorSamples = 10000;
inline constexpr std::size_t kDefaultBoundarySamples = 1000;
inline constexpr std::uint64_t kDefaultSampleSeed = 20240611;

// Interior points from a randomly shifted Halton sequence over the bounding
// box (rejection outside the domain); boundary points from normal
// directions projected to the boundary (balls, ellipsoids) or random faces
// (boxes). Deterministic in the seed.
SampleSet sample_domain(const DomainSpec& domain, std::size_t interior, std::size_t boundary,
                        std::uint64_t seed = kDefaultSampleSeed);

// Closed-form harmonic extension of phi|boundary into a ball, for phi built
// from constant, affine, abs_sq and quadratic_form terms (degree <= 2) and
// for radial terms centered at the ball's center. Throws PreconditionError
// for other data or domains.
TestFunction harmonic_extension(const TestFunction& phi, const DomainSpec& domain);

}  // namespace hyperma
