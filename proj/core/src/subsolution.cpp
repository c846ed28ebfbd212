#include "hyperma/subsolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperma/errors.hpp"
#include "hyperma/operators.hpp"
#include "hyperma/parallel.hpp"

namespace hyperma {

namespace {

std::vector<const Point*> closure(const SampleSet& samples) {
    std::vector<const Point*> all;
    all.reserve(samples.interior.size() + samples.boundary.size());
    for (const auto& x : samples.interior) all.push_back(&x);
    for (const auto& x : samples.boundary) all.push_back(&x);
    return all;
}

double min_hessian_eigenvalue(const TestFunction& u, const std::vector<const Point*>& points, Point* argmin) {
    std::vector<double> lam(points.size());
    parallel_for(points.size(), [&](std::size_t s) { lam[s] = min_eigenvalue(hyper_hessian(u, *points[s])); });
    const auto it = std::min_element(lam.begin(), lam.end());
    if (it == lam.end()) throw PreconditionError("no samples");
    if (argmin != nullptr) *argmin = *points[static_cast<std::size_t>(it - lam.begin())];
    return *it;
}

std::string format_point(const Point& x) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (std::size_t p = 0; p < x.size(); ++p) os << (p ? ", " : "") << x[p];
    os << ')';
    return os.str();
}

struct SampleData {
    const Point* x;
    double r;
    Eigen::VectorXd grad_r;
    double grad_r_norm;
    double phi;
    Eigen::VectorXd grad_phi;
};

}  // namespace

double Subsolution::value(std::span<const double> x) const {
    return phi_ext.value(x) + s * (std::exp(k * r.value(x)) - 1.0);
}

Eigen::VectorXd Subsolution::gradient(std::span<const double> x) const {
    return phi_ext.gradient(x) + s * k * std::exp(k * r.value(x)) * r.gradient(x);
}

Eigen::MatrixXd Subsolution::real_hessian(std::span<const double> x) const {
    const Eigen::VectorXd g = r.gradient(x);
    const double e = s * k * std::exp(k * r.value(x));
    return phi_ext.real_hessian(x) + e * (r.real_hessian(x) + k * g * g.transpose());
}

HyperHermitianMatrix Subsolution::hessian(std::span<const double> x) const {
    return hyper_hessian_from_real(real_hessian(x));
}

double Subsolution::ma(std::span<const double> x) const { return moore_det(hessian(x)); }

AlphaReport alpha_of(const DomainSpec& domain, const SampleSet& samples) {
    const auto points = closure(samples);
    AlphaReport out;
    out.samples = points.size();
    out.alpha = min_hessian_eigenvalue(domain.defining_function(), points, &out.argmin);
    if (!(out.alpha > 0.0)) {
        throw PreconditionError("alpha_of: defining function is not strictly psh (min eigenvalue " +
                                std::to_string(out.alpha) + " at " + format_point(out.argmin) + ")");
    }
    return out;
}

Extension extend_boundary_data(const TestFunction& phi, const DomainSpec& domain, const SampleSet& samples) {
    const auto points = closure(samples);
    Extension ext;
    ext.min_eigenvalue_before = min_hessian_eigenvalue(phi, points, nullptr);
    if (ext.min_eigenvalue_before >= 0.0) {
        ext.function = phi;
        ext.min_eigenvalue_after = ext.min_eigenvalue_before;
        return ext;
    }
    if (!domain.defining_function_exact()) {
        throw ConstructionError("extend_boundary_data: boundary data is not psh and a box has no defining "
                                "function vanishing on its faces");
    }
    const double alpha = alpha_of(domain, samples).alpha;
    ext.identity = false;
    ext.correction = -ext.min_eigenvalue_before / alpha;
    ext.function = phi + ext.correction * domain.defining_function();
    ext.min_eigenvalue_after = min_hessian_eigenvalue(ext.function, points, nullptr);
    const double tol = kPshTol * (1.0 + std::abs(ext.min_eigenvalue_before) + ext.correction * alpha);
    if (ext.min_eigenvalue_after < -tol) {
        throw ConstructionError("extend_boundary_data: corrected extension is not psh (min eigenvalue " +
                                std::to_string(ext.min_eigenvalue_after) + ")");
    }
    return ext;
}

GrowthReport rhs_growth_constant(const RhsFunction& f, double m, std::size_t n, const SampleSet& samples) {
    const auto points = closure(samples);
    std::vector<double> etas{0.0};
    for (int s = 0; s < kGrowthEtaSteps; ++s) {
        const double t = static_cast<double>(s) / (kGrowthEtaSteps - 1);
        etas.push_back(kGrowthEtaMin * std::pow(kGrowthEtaMax / kGrowthEtaMin, t));
    }
    const double omegas[] = {m, m - 1.0, m - 10.0};
    const double dn = static_cast<double>(n);
    GrowthReport out;
    // Ratio at each eta magnitude, maximised over q and w.
    std::vector<double> by_eta(etas.size(), 0.0);
    for (const Point* x : points) {
        for (double w : omegas) {
            for (std::size_t e = 0; e < etas.size(); ++e) {
                const double val = f(*x, w, etas[e], n);
                // f = c |q|^2 vanishes at a single point; only negative values are rejected.
                if (val < 0.0) throw PreconditionError("rhs_growth_constant: f < 0 at " + format_point(*x));
                if (f.du(*x, w, etas[e], n) < 0.0) {
                    throw PreconditionError("rhs_growth_constant: df/du < 0 at " + format_point(*x));
                }
                const double ratio = val / (1.0 + std::pow(etas[e], dn));
                ++out.evaluations;
                by_eta[e] = std::max(by_eta[e], ratio);
                if (ratio > out.constant) {
                    out.constant = ratio;
                    out.worst_eta = etas[e];
                    out.worst_u = w;
                    out.worst_point = *x;
                }
            }
        }
    }
    const std::size_t last = by_eta.size() - 1;
    if (by_eta[last] > by_eta[last - 1] * (1.0 + 1e-3) && by_eta[last - 1] > by_eta[last - 2] * (1.0 + 1e-3)) {
        throw ConstructionError("rhs_growth_constant: f / (1 + |p|^n) keeps growing up to |p| = " +
                                std::to_string(etas[last]) + "; no finite C on the sampled range");
    }
    return out;
}

BuildReport build_subsolution(const Problem& problem, const SubsolutionOptions& options) {
    const DomainSpec& domain = problem.domain;
    domain.validate();
    const std::size_t n = domain.n;
    if (problem.phi.n() != n) throw DimensionError("build_subsolution: phi dimension mismatch");

    BuildReport rep;
    rep.samples = sample_domain(domain, options.interior_samples, options.boundary_samples, options.seed);
    const SampleSet& samples = rep.samples;
    rep.extension = extend_boundary_data(problem.phi, domain, samples);
    rep.alpha = alpha_of(domain, samples);
    const double alpha = rep.alpha.alpha;
    rep.m = -std::numeric_limits<double>::infinity();
    for (const auto& x : samples.boundary) rep.m = std::max(rep.m, problem.phi.value(x));
    rep.growth = rhs_growth_constant(problem.f, rep.m, n, samples);
    const double cm = rep.growth.constant;

    const TestFunction r = domain.defining_function();
    const TestFunction& phi_ext = rep.extension.function;
    const auto points = closure(samples);
    std::vector<SampleData> data(points.size());
    parallel_for(points.size(), [&](std::size_t s) {
        const Point& x = *points[s];
        data[s] = {&x, r.value(x), r.gradient(x), 0.0, phi_ext.value(x), phi_ext.gradient(x)};
        data[s].grad_r_norm = data[s].grad_r.norm();
    });

    const double dn = static_cast<double>(n);
    double max_grad_phi = 0.0;
    for (const auto& d : data) max_grad_phi = std::max(max_grad_phi, d.grad_phi.norm());
    rep.c2 = std::pow(2.0, dn - 1.0);
    rep.c1 = rep.c2 * std::pow(max_grad_phi, dn);

    const auto k_inequality = [&](double k) {
        return std::all_of(data.begin(), data.end(), [&](const SampleData& d) {
            const double g = d.grad_r_norm;
            return cm * rep.c2 * std::pow(g, dn) <= k * std::pow(alpha, dn - 1.0) * g * g;
        });
    };
    for (int j = 0; j <= 60; ++j) {
        if (k_inequality(std::ldexp(1.0, j))) {
            rep.k_inequality_min = std::ldexp(1.0, j);
            break;
        }
    }

    // bound - f at one sample for candidate (s, k).
    const auto chain_gap = [&](const SampleData& d, double s, double k) {
        const double e = s * k * std::exp(k * d.r);
        const double bound = std::pow(alpha * e, dn) * (1.0 + (k / alpha) * d.grad_r_norm * d.grad_r_norm);
        const double u = d.phi + s * (std::exp(k * d.r) - 1.0);
        const double p = (d.grad_phi + e * d.grad_r).norm();
        return bound - problem.f(*d.x, u, p, n);
    };

    std::string last_failure = "no candidate examined";
    for (int kj = 0; kj <= options.max_k_doublings; ++kj) {
        const double k = std::ldexp(1.0, kj);
        for (int sj = options.min_s_exponent; sj <= options.max_s_exponent; ++sj) {
            const double s = std::ldexp(1.0, sj);
            ++rep.candidates;
            std::size_t bad = data.size();
            for (std::size_t i = 0; i < data.size(); ++i) {
                if (!(chain_gap(data[i], s, k) >= 0.0)) {
                    bad = i;
                    break;
                }
            }
            if (bad != data.size()) {
                last_failure = "chain fails at " + format_point(*data[bad].x) + " for k=" + std::to_string(k) +
                               ", s=" + std::to_string(s);
                continue;
            }
            Subsolution sub{phi_ext, r, s, k};
            std::vector<double> margin(data.size());
            std::vector<double> det_slack(data.size());
            std::vector<double> chain(data.size());
            parallel_for(data.size(), [&](std::size_t i) {
                const Point& x = *data[i].x;
                const double ma = sub.ma(x);
                const double u = sub.value(x);
                const double fv = problem.f(x, u, sub.gradient(x).norm(), n);
                chain[i] = chain_gap(data[i], s, k);
                const double bound = chain[i] + fv;
                margin[i] = ma - fv;
                det_slack[i] = (ma - bound) / (1.0 + std::abs(bound));
            });
            const auto worst = std::min_element(margin.begin(), margin.end());
            if (*worst < 0.0) {
                last_failure = "ma(u) < f at " + format_point(*data[static_cast<std::size_t>(worst - margin.begin())].x);
                continue;
            }
            rep.sub = sub;
            rep.chain_slack = *std::min_element(chain.begin(), chain.end());
            rep.det_slack = *std::min_element(det_slack.begin(), det_slack.end());
            rep.k_inequality_holds = k_inequality(k);
            return rep;
        }
    }
    throw ConstructionError("build_subsolution: no (s, k) verified within the search cap; last: " + last_failure);
}

VerifyReport verify_subsolution(const Subsolution& sub, const Problem& problem, const SampleSet& samples) {
    VerifyReport rep;
    const std::size_t n = problem.domain.n;
    rep.interior_samples = samples.interior.size();
    rep.boundary_samples = samples.boundary.size();

    std::vector<double> mismatch(samples.boundary.size());
    parallel_for(samples.boundary.size(), [&](std::size_t i) {
        const Point& x = samples.boundary[i];
        mismatch[i] = std::abs(sub.value(x) - problem.phi.value(x));
    });
    for (std::size_t i = 0; i < mismatch.size(); ++i) {
        if (mismatch[i] > rep.boundary_mismatch || i == 0) {
            rep.boundary_mismatch = mismatch[i];
            rep.boundary_worst = samples.boundary[i];
        }
    }

    std::vector<double> margin(samples.interior.size());
    std::vector<double> lam(samples.interior.size());
    std::vector<double> slack(samples.interior.size());
    parallel_for(samples.interior.size(), [&](std::size_t i) {
        const Point& x = samples.interior[i];
        const auto h = sub.hessian(x);
        double scale = 0.0;
        for (const auto& q : h.matrix().data()) scale = std::max(scale, abs(q));
        lam[i] = min_eigenvalue(h);
        slack[i] = kPshTol * (1.0 + scale);
        margin[i] = moore_det(h) - problem.f(x, sub.value(x), sub.gradient(x).norm(), n);
    });
    rep.psh = true;
    for (std::size_t i = 0; i < margin.size(); ++i) {
        if (margin[i] < rep.min_margin) {
            rep.min_margin = margin[i];
            rep.margin_worst = samples.interior[i];
        }
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, lam[i]);
        if (lam[i] < -slack[i]) rep.psh = false;
    }
    rep.boundary_ok = rep.boundary_mismatch <= kBoundaryMismatchTol;
    rep.margin_ok = rep.min_margin >= -kMarginTol;
    rep.passed = rep.boundary_ok && rep.margin_ok && rep.psh;
    return rep;
}

}  // namespace hyperma
