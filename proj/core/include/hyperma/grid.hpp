#pragma once

// Real fields sampled on a uniform 4n-dimensional lattice, with central
// difference derivatives and a JSON header + float64 sidecar file format.

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "hyperma/test_function.hpp"

namespace hyperma {

using Shape = std::vector<std::size_t>;
using MultiIndex = std::vector<std::size_t>;

class GridFunction {
public:
    GridFunction() = default;
    GridFunction(std::size_t n, Shape shape, double h, Point origin, std::vector<double> values);
    // All values zero.
    GridFunction(std::size_t n, Shape shape, double h, Point origin);

    static GridFunction sample(const std::function<double(std::span<const double>)>& u, std::size_t n, Shape shape,
                               double h, Point origin);
    static GridFunction sample(const TestFunction& u, Shape shape, double h, Point origin);
    // Cube of `nodes` points per axis centered at `center` (origin of H^n if empty).
    static GridFunction sample_cube(const TestFunction& u, std::size_t nodes, double h, Point center = {});

    std::size_t n() const { return n_; }
    std::size_t dim() const { return 4 * n_; }
    std::size_t size() const { return values_.size(); }
    const Shape& shape() const { return shape_; }
    const std::vector<std::size_t>& strides() const { return strides_; }
    double h() const { return h_; }
    const Point& origin() const { return origin_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double& operator[](std::size_t index) { return values_[index]; }
    double operator[](std::size_t index) const { return values_[index]; }

    std::size_t index(std::span<const std::size_t> multi) const;
    MultiIndex multi_index(std::size_t index) const;
    Point position(std::size_t index) const;
    void position(std::size_t index, std::span<double> out) const;

    // Node whose position equals x up to 1e-9 h. Throws MarginError if x is
    // outside the lattice or between nodes.
    std::size_t node_at(std::span<const double> x) const;

    // True when the node is at least `cells` nodes away from every face.
    bool has_margin(std::size_t index, std::size_t cells) const;

    // Same lattice, new values.
    GridFunction with_values(std::vector<double> values) const;

private:
    std::size_t n_ = 0;
    Shape shape_;
    std::vector<std::size_t> strides_;
    double h_ = 1.0;
    Point origin_;
    std::vector<double> values_;
};

// Central differences of order h^2 at an interior node with margin one.
// Throw MarginError otherwise.
Eigen::VectorXd grid_gradient(const GridFunction& u, std::size_t index);
Eigen::MatrixXd grid_real_hessian(const GridFunction& u, std::size_t index);

// Writes `header` (JSON) and a sidecar `<stem>.bin` of little-endian float64
// values next to it.
void write_grid(const std::filesystem::path& header, const GridFunction& u);
// Throws FormatError naming the file and field on malformed input.
GridFunction read_grid(const std::filesystem::path& header);

}  // namespace hyperma
