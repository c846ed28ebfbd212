#include "hyperma/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hyperma/errors.hpp"

namespace hyperma {

namespace {

std::size_t product(const Shape& shape) {
    std::size_t total = 1;
    for (auto s : shape) total *= s;
    return total;
}

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
        return r;
    }
    return v;
}

void require_margin(const GridFunction& u, std::size_t index) {
    if (!u.has_margin(index, 1)) {
        throw MarginError("grid stencil at node " + std::to_string(index) + " leaves the lattice");
    }
}

}  // namespace

GridFunction::GridFunction(std::size_t n, Shape shape, double h, Point origin, std::vector<double> values)
    : n_{n}, shape_(std::move(shape)), h_{h}, origin_(std::move(origin)), values_(std::move(values)) {
    if (n_ == 0) throw DimensionError("GridFunction: n must be positive");
    if (shape_.size() != 4 * n_) throw DimensionError("GridFunction: shape must have 4n extents");
    if (origin_.size() != 4 * n_) throw DimensionError("GridFunction: origin must have 4n coordinates");
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw PreconditionError("GridFunction: h must be positive");
    if (product(shape_) != values_.size()) {
        throw DimensionError("GridFunction: shape holds " + std::to_string(product(shape_)) + " nodes but " +
                             std::to_string(values_.size()) + " values given");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw PreconditionError("GridFunction: non-finite value");
    }
    strides_.assign(shape_.size(), 1);
    for (std::size_t p = shape_.size(); p-- > 1;) strides_[p - 1] = strides_[p] * shape_[p];
}

GridFunction::GridFunction(std::size_t n, Shape shape, double h, Point origin)
    : GridFunction(n, shape, h, std::move(origin), std::vector<double>(product(shape), 0.0)) {}

GridFunction GridFunction::sample(const std::function<double(std::span<const double>)>& u, std::size_t n,
                                  Shape shape, double h, Point origin) {
    GridFunction g(n, std::move(shape), h, std::move(origin));
    Point x(g.dim());
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        g.position(idx, x);
        g.values_[idx] = u(x);
    }
    return g;
}

GridFunction GridFunction::sample(const TestFunction& u, Shape shape, double h, Point origin) {
    return sample([&u](std::span<const double> x) { return u.value(x); }, u.n(), std::move(shape), h,
                  std::move(origin));
}

GridFunction GridFunction::sample_cube(const TestFunction& u, std::size_t nodes, double h, Point center) {
    if (center.empty()) center.assign(u.dim(), 0.0);
    Point origin(center);
    for (auto& c : origin) c -= 0.5 * static_cast<double>(nodes - 1) * h;
    return sample(u, Shape(u.dim(), nodes), h, origin);
}

std::size_t GridFunction::index(std::span<const std::size_t> multi) const {
    if (multi.size() != shape_.size()) throw DimensionError("GridFunction::index: wrong number of indices");
    std::size_t idx = 0;
    for (std::size_t p = 0; p < multi.size(); ++p) {
        if (multi[p] >= shape_[p]) throw MarginError("GridFunction::index: index outside lattice");
        idx += multi[p] * strides_[p];
    }
    return idx;
}

MultiIndex GridFunction::multi_index(std::size_t index) const {
    MultiIndex m(shape_.size());
    for (std::size_t p = 0; p < shape_.size(); ++p) {
        m[p] = index / strides_[p];
        index %= strides_[p];
    }
    return m;
}

Point GridFunction::position(std::size_t index) const {
    Point x(dim());
    position(index, x);
    return x;
}

void GridFunction::position(std::size_t index, std::span<double> out) const {
    for (std::size_t p = 0; p < shape_.size(); ++p) {
        out[p] = origin_[p] + h_ * static_cast<double>(index / strides_[p]);
        index %= strides_[p];
    }
}

std::size_t GridFunction::node_at(std::span<const double> x) const {
    if (x.size() != dim()) throw DimensionError("GridFunction::node_at: point has wrong dimension");
    std::size_t idx = 0;
    for (std::size_t p = 0; p < shape_.size(); ++p) {
        const double s = (x[p] - origin_[p]) / h_;
        const double r = std::round(s);
        if (std::abs(s - r) > 1e-9 || r < 0.0 || r >= static_cast<double>(shape_[p])) {
            throw MarginError("point is not a lattice node (coordinate " + std::to_string(p) + ")");
        }
        idx += static_cast<std::size_t>(r) * strides_[p];
    }
    return idx;
}

bool GridFunction::has_margin(std::size_t index, std::size_t cells) const {
    if (index >= values_.size()) return false;
    for (std::size_t p = 0; p < shape_.size(); ++p) {
        const std::size_t m = index / strides_[p];
        index %= strides_[p];
        if (m < cells || m + cells >= shape_[p]) return false;
    }
    return true;
}

GridFunction GridFunction::with_values(std::vector<double> values) const {
    return GridFunction(n_, shape_, h_, origin_, std::move(values));
}

Eigen::VectorXd grid_gradient(const GridFunction& u, std::size_t index) {
    require_margin(u, index);
    const auto d = static_cast<Eigen::Index>(u.dim());
    const auto& s = u.strides();
    Eigen::VectorXd g(d);
    for (Eigen::Index p = 0; p < d; ++p) g(p) = (u[index + s[p]] - u[index - s[p]]) / (2.0 * u.h());
    return g;
}

Eigen::MatrixXd grid_real_hessian(const GridFunction& u, std::size_t index) {
    require_margin(u, index);
    const auto d = static_cast<Eigen::Index>(u.dim());
    const auto& s = u.strides();
    const double h2 = u.h() * u.h();
    const double u0 = u[index];
    Eigen::MatrixXd hess(d, d);
    for (Eigen::Index p = 0; p < d; ++p) {
        hess(p, p) = (u[index + s[p]] - 2.0 * u0 + u[index - s[p]]) / h2;
        for (Eigen::Index q = p + 1; q < d; ++q) {
            const double cross = u[index + s[p] + s[q]] - u[index + s[p] - s[q]] - u[index - s[p] + s[q]] +
                                 u[index - s[p] - s[q]];
            hess(p, q) = hess(q, p) = cross / (4.0 * h2);
        }
    }
    return hess;
}

void write_grid(const std::filesystem::path& header, const GridFunction& u) {
    std::filesystem::path sidecar = header;
    sidecar.replace_extension(".bin");
    nlohmann::json j;
    j["n"] = u.n();
    j["shape"] = u.shape();
    j["h"] = u.h();
    j["origin"] = u.origin();
    j["data"] = sidecar.filename().string();
    j["dtype"] = "float64-le";
    std::ofstream hout(header);
    if (!hout) throw FormatError(header.string() + ": cannot open for writing");
    hout << j.dump(2) << '\n';

    std::ofstream bout(sidecar, std::ios::binary);
    if (!bout) throw FormatError(sidecar.string() + ": cannot open for writing");
    for (double v : u.values()) {
        const std::uint64_t le = to_little_endian(std::bit_cast<std::uint64_t>(v));
        char bytes[8];
        std::memcpy(bytes, &le, 8);
        bout.write(bytes, 8);
    }
    if (!bout) throw FormatError(sidecar.string() + ": write failed");
}

GridFunction read_grid(const std::filesystem::path& header) {
    std::ifstream hin(header);
    if (!hin) throw FormatError(header.string() + ": cannot open");
    nlohmann::json j;
    try {
        hin >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(header.string() + ": " + e.what());
    }
    const auto field = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw FormatError(header.string() + ": missing field '" + key + "'");
        return j.at(key);
    };
    std::size_t n = 0;
    Shape shape;
    double h = 0.0;
    Point origin;
    std::string data;
    try {
        n = field("n").get<std::size_t>();
        shape = field("shape").get<Shape>();
        h = field("h").get<double>();
        origin = field("origin").get<Point>();
        data = field("data").get<std::string>();
    } catch (const nlohmann::json::type_error& e) {
        throw FormatError(header.string() + ": " + e.what());
    }
    if (j.contains("dtype") && j["dtype"] != "float64-le") {
        throw FormatError(header.string() + ": field 'dtype' must be float64-le");
    }
    const std::filesystem::path sidecar = header.parent_path() / data;
    std::ifstream bin(sidecar, std::ios::binary);
    if (!bin) throw FormatError(sidecar.string() + ": cannot open (referenced by " + header.string() + ")");
    std::vector<double> values;
    char bytes[8];
    while (bin.read(bytes, 8)) {
        std::uint64_t le = 0;
        std::memcpy(&le, bytes, 8);
        values.push_back(std::bit_cast<double>(to_little_endian(le)));
    }
    if (bin.gcount() != 0) throw FormatError(sidecar.string() + ": length is not a multiple of 8 bytes");
    try {
        return GridFunction(n, std::move(shape), h, std::move(origin), std::move(values));
    } catch (const Error& e) {
        throw FormatError(header.string() + ": " + e.what());
    }
}

}  // namespace hyperma
