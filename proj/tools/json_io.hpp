#pragma once

// JSON codecs for the CLI's input and report files. Readers throw
// FormatError with "<file>:<json pointer>: <problem>" locations.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hyperma/domain.hpp"
#include "hyperma/quat_matrix.hpp"
#include "hyperma/test_function.hpp"

namespace hyperma::io {

using Json = nlohmann::json;

// Location inside a document: file name plus JSON pointer.
class Where {
public:
    explicit Where(std::string file, std::string pointer = "") : file_(std::move(file)), ptr_(std::move(pointer)) {}
    Where operator/(const std::string& key) const { return Where(file_, ptr_ + "/" + key); }
    Where operator/(std::size_t index) const { return *this / std::to_string(index); }
    [[noreturn]] void fail(const std::string& what) const;
    std::string str() const { return file_ + ":" + (ptr_.empty() ? "/" : ptr_); }

private:
    std::string file_;
    std::string ptr_;
};

Json load_json(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const Json& doc);

double number_from(const Json& j, const Where& at);
std::size_t count_from(const Json& j, const Where& at);
std::vector<double> numbers_from(const Json& j, const Where& at);

// [t, x, y, z] or a bare real number.
Quaternion quaternion_from(const Json& j, const Where& at);
Json to_json(const Quaternion& q);

// {"n", "entries": [[q, ...], ...]}; must be hyperhermitian.
HyperHermitianMatrix matrix_from(const Json& j, const Where& at);
Json to_json(const HyperHermitianMatrix& a);

// {kind, params}; kind "sum" takes params.terms, a list of {kind, params}.
// n comes from the enclosing document (or from j["n"] when present).
TestFunction function_from(const Json& j, std::size_t n, const Where& at);
Json to_json(const TestFunction& f);

DomainSpec domain_from(const Json& j, std::size_t n, const Where& at);
Json to_json(const DomainSpec& d);

RhsFunction rhs_from(const Json& j, const Where& at);
Json to_json(const RhsFunction& f);

// {n, domain, phi, f, exact?}
Problem problem_from(const Json& j, const Where& at);
Json to_json(const Problem& p);

}  // namespace hyperma::io
