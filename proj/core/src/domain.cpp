#include "hyperma/domain.hpp"

#include <algorithm>
#include <cmath>

#include "hyperma/errors.hpp"
#include "hyperma/random.hpp"

namespace hyperma {

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                           59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

double radical_inverse(std::uint64_t index, int base) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
        index /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

bool same_center(const Point& a, const Point& b) {
    const std::size_t d = std::max(a.size(), b.size());
    for (std::size_t p = 0; p < d; ++p) {
        const double x = p < a.size() ? a[p] : 0.0;
        const double y = p < b.size() ? b[p] : 0.0;
        if (x != y) return false;
    }
    return true;
}

}  // namespace

std::string to_string(DomainKind kind) {
    switch (kind) {
        case DomainKind::ball: return "ball";
        case DomainKind::ellipsoid: return "ellipsoid";
        case DomainKind::box: return "box";
    }
    return "unknown";
}

std::string to_string(RhsKind kind) {
    switch (kind) {
        case RhsKind::constant: return "constant";
        case RhsKind::abs_sq: return "abs_sq";
        case RhsKind::exp_u: return "exp_u";
        case RhsKind::grad_power: return "grad_power";
    }
    return "unknown";
}

DomainSpec DomainSpec::ball(std::size_t n, double radius, Point center) {
    DomainSpec d;
    d.n = n;
    d.kind = DomainKind::ball;
    d.radius = radius;
    d.center = std::move(center);
    d.validate();
    return d;
}

DomainSpec DomainSpec::ellipsoid(std::vector<double> coeffs, Point center) {
    DomainSpec d;
    d.n = coeffs.size();
    d.kind = DomainKind::ellipsoid;
    d.coeffs = std::move(coeffs);
    d.center = std::move(center);
    d.validate();
    return d;
}

DomainSpec DomainSpec::box(std::size_t n, double half_width, Point center) {
    DomainSpec d;
    d.n = n;
    d.kind = DomainKind::box;
    d.half_width = half_width;
    d.center = std::move(center);
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    if (n == 0) throw PreconditionError("domain: n must be positive");
    if (!center.empty() && center.size() != 4 * n) throw PreconditionError("domain: center must have 4n coordinates");
    if (!(scale > 0.0)) throw PreconditionError("domain: scale must be positive");
    switch (kind) {
        case DomainKind::ball:
            if (!(radius > 0.0)) throw PreconditionError("domain: ball radius must be positive");
            break;
        case DomainKind::ellipsoid:
            if (coeffs.size() != n) throw PreconditionError("domain: ellipsoid needs n coefficients");
            for (double c : coeffs) {
                if (!(c > 0.0)) throw PreconditionError("domain: ellipsoid coefficients must be positive");
            }
            break;
        case DomainKind::box:
            if (!(half_width > 0.0)) throw PreconditionError("domain: box half_width must be positive");
            break;
    }
}

Point DomainSpec::center_point() const { return center.empty() ? Point(4 * n, 0.0) : center; }

TestFunction DomainSpec::defining_function() const {
    const Point c = center_point();
    TestFunction r;
    switch (kind) {
        case DomainKind::ball:
            r = TestFunction::abs_sq(n).shifted(c) + TestFunction::constant(n, -radius * radius);
            break;
        case DomainKind::ellipsoid:
            r = TestFunction::quadratic_form(HyperHermitianMatrix::diagonal(coeffs)).shifted(c) +
                TestFunction::constant(n, -1.0);
            break;
        case DomainKind::box: {
            const double rr = 4.0 * static_cast<double>(n) * half_width * half_width;
            r = TestFunction::abs_sq(n).shifted(c) + TestFunction::constant(n, -rr);
            break;
        }
    }
    r *= scale;
    return r;
}

bool DomainSpec::contains(std::span<const double> x) const {
    const auto offset = [&](std::size_t p) { return x[p] - (center.empty() ? 0.0 : center[p]); };
    double s = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
        const double y = offset(p);
        switch (kind) {
            case DomainKind::ball: s += y * y; break;
            case DomainKind::ellipsoid: s += coeffs[p / 4] * y * y; break;
            case DomainKind::box:
                if (std::abs(y) >= half_width) return false;
                break;
        }
    }
    switch (kind) {
        case DomainKind::ball: return s < radius * radius;
        case DomainKind::ellipsoid: return s < 1.0;
        case DomainKind::box: return true;
    }
    return false;
}

std::vector<double> DomainSpec::half_extent() const {
    std::vector<double> e(4 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        switch (kind) {
            case DomainKind::ball: v = radius; break;
            case DomainKind::ellipsoid: v = 1.0 / std::sqrt(coeffs[i]); break;
            case DomainKind::box: v = half_width; break;
        }
        for (int a = 0; a < 4; ++a) e[4 * i + static_cast<std::size_t>(a)] = v;
    }
    return e;
}

RhsFunction RhsFunction::constant_value(double v) {
    RhsFunction f;
    f.kind = RhsKind::constant;
    f.value = v;
    return f;
}

RhsFunction RhsFunction::abs_sq(double scale, double constant) {
    RhsFunction f;
    f.kind = RhsKind::abs_sq;
    f.scale = scale;
    f.constant = constant;
    return f;
}

RhsFunction RhsFunction::exp_u(double scale, double rate, double constant) {
    RhsFunction f;
    f.kind = RhsKind::exp_u;
    f.scale = scale;
    f.rate = rate;
    f.constant = constant;
    return f;
}

RhsFunction RhsFunction::grad_power(double constant, double scale, double exponent) {
    RhsFunction f;
    f.kind = RhsKind::grad_power;
    f.constant = constant;
    f.scale = scale;
    f.exponent = exponent;
    return f;
}

double RhsFunction::operator()(std::span<const double> x, double u, double grad_norm, std::size_t n) const {
    switch (kind) {
        case RhsKind::constant: return value;
        case RhsKind::abs_sq: {
            double s = 0.0;
            for (std::size_t p = 0; p < x.size(); ++p) {
                const double y = x[p] - (center.empty() ? 0.0 : center[p]);
                s += y * y;
            }
            return constant + scale * s;
        }
        case RhsKind::exp_u: return constant + scale * std::exp(rate * u);
        case RhsKind::grad_power: {
            const double e = exponent < 0.0 ? static_cast<double>(n) : exponent;
            return constant + scale * std::pow(grad_norm, e);
        }
    }
    return 0.0;
}

double RhsFunction::du(std::span<const double>, double u, double, std::size_t) const {
    if (kind == RhsKind::exp_u) return scale * rate * std::exp(rate * u);
    return 0.0;
}

RhsFunction RhsFunction::scaled(double s) const {
    RhsFunction f = *this;
    f.value *= s;
    f.constant *= s;
    f.scale *= s;
    return f;
}

SampleSet sample_domain(const DomainSpec& domain, std::size_t interior, std::size_t boundary, std::uint64_t seed) {
    domain.validate();
    const std::size_t d = 4 * domain.n;
    if (d > std::size(kPrimes)) throw DimensionError("sample_domain: dimension too large for the Halton bases");
    const Point c = domain.center_point();
    const auto ext = domain.half_extent();
    SampleSet out;

    auto shift_rng = sample_rng(seed, 0, 0);
    std::vector<double> shift(d);
    for (auto& s : shift) s = uniform(shift_rng, 0.0, 1.0);
    const std::uint64_t cap = 4096 * (interior + 1) + 1000000;
    Point x(d);
    for (std::uint64_t index = 1; out.interior.size() < interior; ++index) {
        if (index > cap) throw ConstructionError("sample_domain: rejection sampling did not fill the interior");
        for (std::size_t p = 0; p < d; ++p) {
            double u = radical_inverse(index, kPrimes[p]) + shift[p];
            u -= std::floor(u);
            x[p] = c[p] + (2.0 * u - 1.0) * ext[p];
        }
        if (domain.contains(x)) out.interior.push_back(x);
    }

    std::normal_distribution<double> normal;
    for (std::size_t s = 0; s < boundary; ++s) {
        auto rng = sample_rng(seed, 1, s);
        Point y(d);
        if (domain.kind == DomainKind::box) {
            for (std::size_t p = 0; p < d; ++p) y[p] = c[p] + uniform(rng, -domain.half_width, domain.half_width);
            const auto face = static_cast<std::size_t>(uniform(rng, 0.0, static_cast<double>(d)));
            const std::size_t p = std::min(face, d - 1);
            y[p] = c[p] + (uniform(rng) < 0.0 ? -domain.half_width : domain.half_width);
        } else {
            std::vector<double> dir(d);
            double norm = 0.0;
            for (auto& v : dir) {
                v = normal(rng);
                norm += v * v;
            }
            norm = std::sqrt(norm);
            double t = 1.0;
            if (domain.kind == DomainKind::ball) {
                t = domain.radius / norm;
            } else {
                double q = 0.0;
                for (std::size_t p = 0; p < d; ++p) q += domain.coeffs[p / 4] * dir[p] * dir[p];
                t = 1.0 / std::sqrt(q);
            }
            for (std::size_t p = 0; p < d; ++p) y[p] = c[p] + t * dir[p];
        }
        out.boundary.push_back(std::move(y));
    }
    return out;
}

TestFunction harmonic_extension(const TestFunction& phi, const DomainSpec& domain) {
    if (domain.kind != DomainKind::ball) throw PreconditionError("harmonic_extension: closed form needs a ball");
    const std::size_t n = phi.n();
    if (n != domain.n) throw DimensionError("harmonic_extension: dimension mismatch");
    const Point c = domain.center_point();
    const double r2 = domain.radius * domain.radius;
    const double dim = 4.0 * static_cast<double>(n);

    std::vector<TestTerm> quadratic;
    double constant = 0.0;
    for (const auto& term : phi.terms()) {
        switch (term.kind) {
            case TestKind::constant:
            case TestKind::affine:
            case TestKind::abs_sq:
            case TestKind::quadratic_form: quadratic.push_back(term); break;
            case TestKind::radial_pow4:
                if (!same_center(term.center, c)) throw PreconditionError("harmonic_extension: off-center radial term");
                constant += term.scale * r2 * r2;
                break;
            case TestKind::exp_abs_sq:
                if (!same_center(term.center, c)) throw PreconditionError("harmonic_extension: off-center radial term");
                constant += term.scale * std::exp(term.lambda * r2);
                break;
        }
    }
    TestFunction out(n, quadratic);
    // A quadratic P has constant Laplacian L; P - L/(2d) (|x - c|^2 - R^2)
    // is harmonic and equals P on the sphere.
    const double lap = quadratic.empty() ? 0.0 : out.real_hessian(c).trace();
    if (lap != 0.0) {
        out += TestFunction::abs_sq(n, -lap / (2.0 * dim)).shifted(c);
        constant += lap * r2 / (2.0 * dim);
    }
    if (constant != 0.0 || out.terms().empty()) out += TestFunction::constant(n, constant);
    return out;
}

}  // namespace hyperma
