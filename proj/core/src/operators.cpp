#include "hyperma/operators.hpp"

#include <algorithm>
#include <cmath>

#include "hyperma/errors.hpp"

namespace hyperma {

namespace {

double psh_slack(const HyperHermitianMatrix& a, double tol) {
    double scale = 0.0;
    for (const auto& q : a.matrix().data()) scale = std::max(scale, abs(q));
    return tol * (1.0 + scale);
}

Quaternion fd_partial(const QuatField& f, std::span<const double> x, std::size_t p, double step) {
    std::vector<double> y(x.begin(), x.end());
    const auto at = [&](double offset) {
        y[p] = x[p] + offset;
        return f(y);
    };
    const Quaternion d = (8.0 * (at(step) - at(-step)) - (at(2.0 * step) - at(-2.0 * step))) / (12.0 * step);
    return d;
}

}  // namespace

HyperHermitianMatrix hyper_hessian_from_real(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols() || h.rows() % 4 != 0 || h.rows() == 0) {
        throw DimensionError("hyper_hessian: real Hessian must be 4n x 4n");
    }
    const std::size_t n = static_cast<std::size_t>(h.rows()) / 4;
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Quaternion entry;
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    const double v = h(static_cast<Eigen::Index>(4 * i + a), static_cast<Eigen::Index>(4 * j + b));
                    entry += v * (Quaternion::unit(a) * conj(Quaternion::unit(b)));
                }
            }
            m(i, j) = entry;
        }
    }
    const double residue = hyperhermitian_residue(m);
    const double bound = kHessianResidueTol * (1.0 + h.cwiseAbs().maxCoeff());
    if (!(residue <= bound)) {
        throw PreconditionError("hyper_hessian: hyperhermitian residue " + std::to_string(residue) +
                                " above tolerance " + std::to_string(bound));
    }
    return HyperHermitianMatrix::symmetrized(m);
}

Quaternion dirac_weyl_bar_from_gradient(const Eigen::VectorXd& g, std::size_t j) {
    const auto b = static_cast<Eigen::Index>(4 * j);
    return {g(b), g(b + 1), g(b + 2), g(b + 3)};
}

Quaternion dirac_weyl_from_gradient(const Eigen::VectorXd& g, std::size_t i) {
    return conj(dirac_weyl_bar_from_gradient(g, i));
}

double gradient_norm(const Eigen::VectorXd& g) { return g.norm(); }

Quaternion dirac_weyl_bar(const TestFunction& u, std::span<const double> x, std::size_t j) {
    if (j >= u.n()) throw DimensionError("dirac_weyl_bar: variable index out of range");
    return dirac_weyl_bar_from_gradient(u.gradient(x), j);
}

Quaternion dirac_weyl(const TestFunction& u, std::span<const double> x, std::size_t i) {
    if (i >= u.n()) throw DimensionError("dirac_weyl: variable index out of range");
    return dirac_weyl_from_gradient(u.gradient(x), i);
}

HyperHermitianMatrix hyper_hessian(const TestFunction& u, std::span<const double> x) {
    return hyper_hessian_from_real(u.real_hessian(x));
}

double ma_operator(const TestFunction& u, std::span<const double> x) { return moore_det(hyper_hessian(u, x)); }

bool is_psh_at(const TestFunction& u, std::span<const double> x, double tol) {
    const auto a = hyper_hessian(u, x);
    return min_eigenvalue(a) >= -psh_slack(a, tol);
}

bool is_spsh_region(const TestFunction& u, const std::vector<Point>& region, double eps) {
    return std::all_of(region.begin(), region.end(),
                       [&](const Point& x) { return min_eigenvalue(hyper_hessian(u, x)) >= eps; });
}

Quaternion dirac_weyl_bar(const GridFunction& u, std::size_t node, std::size_t j) {
    if (j >= u.n()) throw DimensionError("dirac_weyl_bar: variable index out of range");
    return dirac_weyl_bar_from_gradient(grid_gradient(u, node), j);
}

Quaternion dirac_weyl(const GridFunction& u, std::size_t node, std::size_t i) {
    if (i >= u.n()) throw DimensionError("dirac_weyl: variable index out of range");
    return dirac_weyl_from_gradient(grid_gradient(u, node), i);
}

HyperHermitianMatrix hyper_hessian(const GridFunction& u, std::size_t node) {
    return hyper_hessian_from_real(grid_real_hessian(u, node));
}

double ma_operator(const GridFunction& u, std::size_t node) { return moore_det(hyper_hessian(u, node)); }

bool is_psh_at(const GridFunction& u, std::size_t node, double tol) {
    const auto a = hyper_hessian(u, node);
    return min_eigenvalue(a) >= -psh_slack(a, tol);
}

bool is_spsh_region(const GridFunction& u, std::span<const std::size_t> nodes, double eps) {
    return std::all_of(nodes.begin(), nodes.end(),
                       [&](std::size_t node) { return min_eigenvalue(hyper_hessian(u, node)) >= eps; });
}

Quaternion dirac_weyl_bar(const QuatField& f, std::span<const double> x, std::size_t j, double step) {
    if (4 * j + 3 >= x.size()) throw DimensionError("dirac_weyl_bar: variable index out of range");
    Quaternion sum;
    for (int b = 0; b < 4; ++b) sum += Quaternion::unit(b) * fd_partial(f, x, 4 * j + static_cast<std::size_t>(b), step);
    return sum;
}

Quaternion dirac_weyl(const QuatField& f, std::span<const double> x, std::size_t i, double step) {
    if (4 * i + 3 >= x.size()) throw DimensionError("dirac_weyl: variable index out of range");
    Quaternion sum;
    for (int a = 0; a < 4; ++a) {
        sum += fd_partial(f, x, 4 * i + static_cast<std::size_t>(a), step) * conj(Quaternion::unit(a));
    }
    return sum;
}

}  // namespace hyperma
