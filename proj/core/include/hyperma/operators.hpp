#pragma once

// Dirac-Weyl operators, the hyperhermitian Hessian, the quaternionic
// Monge-Ampere operator and plurisubharmonicity tests, on closed-form test
// functions, on lattice samples and (by finite differences) on general
// quaternion-valued fields.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hyperma/grid.hpp"
#include "hyperma/quat_matrix.hpp"
#include "hyperma/test_function.hpp"

namespace hyperma {

// Residue of the assembled Hessian accepted before symmetrization:
// kHessianResidueTol * (1 + max |real Hessian entry|).
inline constexpr double kHessianResidueTol = 1e-9;

// Default negative slack for "non-negative" in is_psh_at, relative to 1 + |H|.
inline constexpr double kPshTol = 1e-10;

// Entry (i,j) = sum_{a,b} e_a H[4i+a][4j+b] conj(e_b) from the real 4n x 4n
// Hessian H, i.e. d/dq_j (du/dq-bar_i). With this placement the Hessian of
// q* A q is 8A and xi* H xi is the Laplacian of u along the right line
// q + xi lambda. Throws PreconditionError when the result is not
// hyperhermitian within kHessianResidueTol, then symmetrizes.
HyperHermitianMatrix hyper_hessian_from_real(const Eigen::MatrixXd& h);

// (sum_b e_b g[4j+b]) and (sum_a g[4i+a] conj(e_a)) for a real gradient g.
Quaternion dirac_weyl_bar_from_gradient(const Eigen::VectorXd& g, std::size_t j);
Quaternion dirac_weyl_from_gradient(const Eigen::VectorXd& g, std::size_t i);

// |grad| in R^{4n}.
double gradient_norm(const Eigen::VectorXd& g);

// Closed-form test functions at a point x in R^{4n}.
Quaternion dirac_weyl_bar(const TestFunction& u, std::span<const double> x, std::size_t j);
Quaternion dirac_weyl(const TestFunction& u, std::span<const double> x, std::size_t i);
HyperHermitianMatrix hyper_hessian(const TestFunction& u, std::span<const double> x);
double ma_operator(const TestFunction& u, std::span<const double> x);
bool is_psh_at(const TestFunction& u, std::span<const double> x, double tol = kPshTol);
// Every point of the region has min eigenvalue >= eps.
bool is_spsh_region(const TestFunction& u, const std::vector<Point>& region, double eps);

// Lattice samples at a node with one-cell margin; central differences of
// order h^2. Throw MarginError otherwise.
Quaternion dirac_weyl_bar(const GridFunction& u, std::size_t node, std::size_t j);
Quaternion dirac_weyl(const GridFunction& u, std::size_t node, std::size_t i);
HyperHermitianMatrix hyper_hessian(const GridFunction& u, std::size_t node);
double ma_operator(const GridFunction& u, std::size_t node);
bool is_psh_at(const GridFunction& u, std::size_t node, double tol = kPshTol);
bool is_spsh_region(const GridFunction& u, std::span<const std::size_t> nodes, double eps);

// Quaternion-valued fields on R^{4n}, differentiated with fourth-order
// central differences of step `step`.
using QuatField = std::function<Quaternion(std::span<const double>)>;

// sum_b e_b dF/dx_j^b
Quaternion dirac_weyl_bar(const QuatField& f, std::span<const double> x, std::size_t j, double step);
// sum_a dF/dx_i^a conj(e_a)
Quaternion dirac_weyl(const QuatField& f, std::span<const double> x, std::size_t i, double step);

}  // namespace hyperma
