#include "hyperma/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "hyperma/errors.hpp"

namespace hyperma {

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

KrylovResult gmres(const LinearMap& a, const Vec& b, Vec& x, const KrylovSettings& settings, const LinearMap& precond) {
    const std::size_t size = b.size();
    if (x.size() != size) throw DimensionError("gmres: initial guess has the wrong size");
    const std::size_t m = std::max<std::size_t>(1, settings.restart);
    const double bnorm = norm2(b);
    const double target = std::max(settings.rel_tol * bnorm, settings.abs_tol);

    KrylovResult out;
    Vec r(size), w(size), z(size);
    std::vector<Vec> v(m + 1, Vec(size));
    std::vector<Vec> zs(precond ? m : 0, Vec(size));
    std::vector<std::vector<double>> hm(m + 1, std::vector<double>(m, 0.0));
    std::vector<double> cs(m), sn(m), g(m + 1);

    const auto residual = [&]() {
        a(x, w);
        for (std::size_t i = 0; i < size; ++i) r[i] = b[i] - w[i];
        return norm2(r);
    };

    double beta = residual();
    out.residual = beta;
    if (beta <= target) {
        out.converged = true;
        return out;
    }
    while (out.iterations < settings.max_iterations) {
        for (std::size_t i = 0; i < size; ++i) v[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;
        std::size_t j = 0;
        for (; j < m && out.iterations < settings.max_iterations; ++j) {
            ++out.iterations;
            const Vec* dir = &v[j];
            if (precond) {
                precond(v[j], zs[j]);
                dir = &zs[j];
            }
            a(*dir, w);
            // Modified Gram-Schmidt.
            for (std::size_t i = 0; i <= j; ++i) {
                hm[i][j] = dot(w, v[i]);
                for (std::size_t p = 0; p < size; ++p) w[p] -= hm[i][j] * v[i][p];
            }
            hm[j + 1][j] = norm2(w);
            if (hm[j + 1][j] > 0.0) {
                for (std::size_t p = 0; p < size; ++p) v[j + 1][p] = w[p] / hm[j + 1][j];
            }
            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * hm[i][j] + sn[i] * hm[i + 1][j];
                hm[i + 1][j] = -sn[i] * hm[i][j] + cs[i] * hm[i + 1][j];
                hm[i][j] = t;
            }
            const double d = std::hypot(hm[j][j], hm[j + 1][j]);
            cs[j] = d == 0.0 ? 1.0 : hm[j][j] / d;
            sn[j] = d == 0.0 ? 0.0 : hm[j + 1][j] / d;
            hm[j][j] = d;
            hm[j + 1][j] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];
            if (std::abs(g[j + 1]) <= target) {
                ++j;
                break;
            }
        }
        // Back substitution for the update coefficients.
        std::vector<double> y(j, 0.0);
        for (std::size_t i = j; i-- > 0;) {
            double s = g[i];
            for (std::size_t k = i + 1; k < j; ++k) s -= hm[i][k] * y[k];
            y[i] = hm[i][i] == 0.0 ? 0.0 : s / hm[i][i];
        }
        for (std::size_t i = 0; i < j; ++i) {
            const Vec& dir = precond ? zs[i] : v[i];
            for (std::size_t p = 0; p < size; ++p) x[p] += y[i] * dir[p];
        }
        beta = residual();
        out.residual = beta;
        if (beta <= target) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

KrylovResult conjugate_gradient(const LinearMap& a, const Vec& b, Vec& x, const KrylovSettings& settings) {
    const std::size_t size = b.size();
    if (x.size() != size) throw DimensionError("conjugate_gradient: initial guess has the wrong size");
    const double target = std::max(settings.rel_tol * norm2(b), settings.abs_tol);
    Vec r(size), p(size), ap(size);
    a(x, ap);
    for (std::size_t i = 0; i < size; ++i) r[i] = b[i] - ap[i];
    p = r;
    double rr = dot(r, r);
    KrylovResult out;
    out.residual = std::sqrt(rr);
    while (out.residual > target && out.iterations < settings.max_iterations) {
        ++out.iterations;
        a(p, ap);
        const double pap = dot(p, ap);
        if (!(pap > 0.0)) throw SolverError("conjugate_gradient: operator is not positive definite");
        const double alpha = rr / pap;
        for (std::size_t i = 0; i < size; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        for (std::size_t i = 0; i < size; ++i) p[i] = r[i] + (rr_new / rr) * p[i];
        rr = rr_new;
        out.residual = std::sqrt(rr);
    }
    out.converged = out.residual <= target;
    return out;
}

}  // namespace hyperma
