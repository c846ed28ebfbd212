#include "json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hyperma/errors.hpp"

namespace hyperma::io {

namespace {

const Json& member(const Json& j, const std::string& key, const Where& at) {
    if (!j.is_object()) at.fail("expected an object");
    const auto it = j.find(key);
    if (it == j.end()) at.fail("missing field '" + key + "'");
    return *it;
}

const Json* optional_member(const Json& j, const std::string& key) {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

void allow_only(const Json& j, const std::set<std::string>& keys, const Where& at) {
    if (!j.is_object()) at.fail("expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) (at / key).fail("unknown field");
    }
}

double number_or(const Json& j, const std::string& key, double fallback, const Where& at) {
    const Json* v = optional_member(j, key);
    return v ? number_from(*v, at / key) : fallback;
}

Point center_or_empty(const Json& j, std::size_t n, const Where& at) {
    const Json* v = optional_member(j, "center");
    if (!v) return {};
    Point c = numbers_from(*v, at / "center");
    if (c.size() != 4 * n) (at / "center").fail("expected " + std::to_string(4 * n) + " coordinates");
    return c;
}

const Json& params_of(const Json& j, const Where& at) {
    static const Json empty = Json::object();
    const Json* p = optional_member(j, "params");
    if (!p) return empty;
    if (!p->is_object()) (at / "params").fail("expected an object");
    return *p;
}

std::string kind_of(const Json& j, const Where& at) {
    const Json& k = member(j, "kind", at);
    if (!k.is_string()) (at / "kind").fail("expected a string");
    return k.get<std::string>();
}

void append_terms(const Json& j, std::size_t n, const Where& at, std::vector<TestTerm>& terms) {
    if (!j.is_object()) at.fail("expected an object");
    allow_only(j, {"kind", "params", "n"}, at);
    const std::string kind = kind_of(j, at);
    const Json& params = params_of(j, at);
    const Where pat = at / "params";
    if (kind == "sum") {
        allow_only(params, {"terms"}, pat);
        const Json& list = member(params, "terms", pat);
        if (!list.is_array()) (pat / "terms").fail("expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) append_terms(list[i], n, pat / "terms" / i, terms);
        return;
    }
    TestKind tk;
    try {
        tk = test_kind_from_string(kind);
    } catch (const FormatError& e) {
        (at / "kind").fail(e.what());
    }
    TestTerm term;
    term.kind = tk;
    switch (tk) {
        case TestKind::constant:
            allow_only(params, {"value", "scale"}, pat);
            term.scale = number_or(params, "value", number_or(params, "scale", 0.0, pat), pat);
            break;
        case TestKind::affine: {
            allow_only(params, {"coeffs", "constant", "var", "component", "scale", "center"}, pat);
            term.scale = number_or(params, "scale", 1.0, pat);
            term.center = center_or_empty(params, n, pat);
            if (const Json* w = optional_member(params, "coeffs")) {
                term.coeffs = numbers_from(*w, pat / "coeffs");
                if (term.coeffs.size() != 4 * n) (pat / "coeffs").fail("expected " + std::to_string(4 * n) + " weights");
            } else {
                const std::size_t var = count_from(member(params, "var", pat), pat / "var");
                const std::size_t comp =
                    params.contains("component") ? count_from(params["component"], pat / "component") : 0;
                if (var >= n) (pat / "var").fail("variable index out of range");
                if (comp >= 4) (pat / "component").fail("component must be 0..3");
                term.coeffs.assign(4 * n, 0.0);
                term.coeffs[4 * var + comp] = 1.0;
            }
            const double c = number_or(params, "constant", 0.0, pat);
            terms.push_back(term);
            if (c != 0.0) {
                TestTerm k;
                k.kind = TestKind::constant;
                k.scale = c;
                terms.push_back(k);
            }
            return;
        }
        case TestKind::abs_sq:
        case TestKind::radial_pow4:
            allow_only(params, {"scale", "center"}, pat);
            term.scale = number_or(params, "scale", 1.0, pat);
            term.center = center_or_empty(params, n, pat);
            break;
        case TestKind::exp_abs_sq:
            allow_only(params, {"scale", "center", "lambda"}, pat);
            term.scale = number_or(params, "scale", 1.0, pat);
            term.lambda = number_or(params, "lambda", 1.0, pat);
            term.center = center_or_empty(params, n, pat);
            break;
        case TestKind::quadratic_form:
            allow_only(params, {"scale", "center", "matrix"}, pat);
            term.scale = number_or(params, "scale", 1.0, pat);
            term.center = center_or_empty(params, n, pat);
            term.form = matrix_from(member(params, "matrix", pat), pat / "matrix");
            if (term.form.size() != n) (pat / "matrix").fail("matrix dimension differs from n");
            break;
    }
    terms.push_back(term);
}

Json term_to_json(const TestTerm& t) {
    Json params = Json::object();
    if (t.kind == TestKind::constant) {
        params["value"] = t.scale;
    } else {
        params["scale"] = t.scale;
        if (!t.center.empty()) params["center"] = t.center;
    }
    if (t.kind == TestKind::affine) params["coeffs"] = t.coeffs;
    if (t.kind == TestKind::exp_abs_sq) params["lambda"] = t.lambda;
    if (t.kind == TestKind::quadratic_form) params["matrix"] = to_json(t.form);
    return Json{{"kind", to_string(t.kind)}, {"params", params}};
}

}  // namespace

void Where::fail(const std::string& what) const { throw FormatError(str() + ": " + what); }

Json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(path.string() + ": byte " + std::to_string(e.byte) + ": invalid JSON");
    }
}

void save_json(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path);
    if (!out) throw FormatError(path.string() + ": cannot write file");
    out << doc.dump(2) << '\n';
}

double number_from(const Json& j, const Where& at) {
    if (!j.is_number()) at.fail("expected a number");
    return j.get<double>();
}

std::size_t count_from(const Json& j, const Where& at) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        at.fail("expected a non-negative integer");
    }
    return j.get<std::size_t>();
}

std::vector<double> numbers_from(const Json& j, const Where& at) {
    if (!j.is_array()) at.fail("expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_from(j[i], at / i));
    return out;
}

Quaternion quaternion_from(const Json& j, const Where& at) {
    if (j.is_number()) return Quaternion{j.get<double>(), 0.0, 0.0, 0.0};
    const auto v = numbers_from(j, at);
    if (v.size() != 4) at.fail("expected [t, x, y, z]");
    return Quaternion{v[0], v[1], v[2], v[3]};
}

Json to_json(const Quaternion& q) { return Json::array({q.t, q.x, q.y, q.z}); }

HyperHermitianMatrix matrix_from(const Json& j, const Where& at) {
    allow_only(j, {"n", "entries"}, at);
    const std::size_t n = count_from(member(j, "n", at), at / "n");
    if (n == 0) (at / "n").fail("n must be positive");
    const Json& rows = member(j, "entries", at);
    if (!rows.is_array() || rows.size() != n) (at / "entries").fail("expected " + std::to_string(n) + " rows");
    QuatMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Where row = at / "entries" / i;
        if (!rows[i].is_array() || rows[i].size() != n) row.fail("expected " + std::to_string(n) + " entries");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = quaternion_from(rows[i][k], row / k);
    }
    const double residue = hyperhermitian_residue(m);
    if (residue > 1e-12) {
        std::ostringstream os;
        os << "matrix is not hyperhermitian (residue " << residue << ")";
        (at / "entries").fail(os.str());
    }
    return HyperHermitianMatrix::symmetrized(m);
}

Json to_json(const HyperHermitianMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.size(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < a.size(); ++k) row.push_back(to_json(a(i, k)));
        rows.push_back(row);
    }
    return Json{{"n", a.size()}, {"entries", rows}};
}

TestFunction function_from(const Json& j, std::size_t n, const Where& at) {
    if (j.is_object() && j.contains("n")) {
        const std::size_t declared = count_from(j["n"], at / "n");
        if (n != 0 && declared != n) (at / "n").fail("disagrees with the enclosing n");
        n = declared;
    }
    if (n == 0) at.fail("missing field 'n'");
    std::vector<TestTerm> terms;
    append_terms(j, n, at, terms);
    return TestFunction(n, std::move(terms));
}

Json to_json(const TestFunction& f) {
    Json j;
    if (f.terms().size() == 1) {
        j = term_to_json(f.terms().front());
    } else {
        Json list = Json::array();
        for (const auto& t : f.terms()) list.push_back(term_to_json(t));
        j = Json{{"kind", "sum"}, {"params", {{"terms", list}}}};
    }
    j["n"] = f.n();
    return j;
}

DomainSpec domain_from(const Json& j, std::size_t n, const Where& at) {
    allow_only(j, {"kind", "params"}, at);
    const std::string kind = kind_of(j, at);
    const Json& params = params_of(j, at);
    const Where pat = at / "params";
    DomainSpec d;
    d.n = n;
    if (kind == "ball") {
        allow_only(params, {"radius", "center", "scale"}, pat);
        d.kind = DomainKind::ball;
        d.radius = number_or(params, "radius", 1.0, pat);
    } else if (kind == "ellipsoid") {
        allow_only(params, {"coeffs", "center", "scale"}, pat);
        d.kind = DomainKind::ellipsoid;
        d.coeffs = numbers_from(member(params, "coeffs", pat), pat / "coeffs");
    } else if (kind == "box") {
        allow_only(params, {"half_width", "center"}, pat);
        d.kind = DomainKind::box;
        d.half_width = number_or(params, "half_width", 0.5, pat);
    } else {
        (at / "kind").fail("unknown domain kind '" + kind + "'");
    }
    d.center = center_or_empty(params, n, pat);
    d.scale = number_or(params, "scale", 1.0, pat);
    try {
        d.validate();
    } catch (const PreconditionError& e) {
        pat.fail(e.what());
    }
    return d;
}

Json to_json(const DomainSpec& d) {
    Json params = Json::object();
    switch (d.kind) {
        case DomainKind::ball:
            params["radius"] = d.radius;
            params["scale"] = d.scale;
            break;
        case DomainKind::ellipsoid:
            params["coeffs"] = d.coeffs;
            params["scale"] = d.scale;
            break;
        case DomainKind::box: params["half_width"] = d.half_width; break;
    }
    if (!d.center.empty()) params["center"] = d.center;
    return Json{{"kind", to_string(d.kind)}, {"params", params}};
}

RhsFunction rhs_from(const Json& j, const Where& at) {
    allow_only(j, {"kind", "params"}, at);
    const std::string kind = kind_of(j, at);
    const Json& params = params_of(j, at);
    const Where pat = at / "params";
    RhsFunction f;
    if (kind == "constant") {
        allow_only(params, {"value"}, pat);
        f = RhsFunction::constant_value(number_from(member(params, "value", pat), pat / "value"));
    } else if (kind == "abs_sq") {
        allow_only(params, {"scale", "constant", "center"}, pat);
        f = RhsFunction::abs_sq(number_or(params, "scale", 1.0, pat), number_or(params, "constant", 0.0, pat));
        if (const Json* c = optional_member(params, "center")) f.center = numbers_from(*c, pat / "center");
    } else if (kind == "exp_u") {
        allow_only(params, {"scale", "rate", "constant"}, pat);
        f = RhsFunction::exp_u(number_or(params, "scale", 1.0, pat), number_or(params, "rate", 1.0, pat),
                               number_or(params, "constant", 0.0, pat));
    } else if (kind == "grad_power") {
        allow_only(params, {"scale", "constant", "exponent"}, pat);
        f = RhsFunction::grad_power(number_or(params, "constant", 0.0, pat), number_or(params, "scale", 1.0, pat),
                                    number_or(params, "exponent", -1.0, pat));
    } else {
        (at / "kind").fail("unknown right-hand side kind '" + kind + "'");
    }
    return f;
}

Json to_json(const RhsFunction& f) {
    Json params = Json::object();
    switch (f.kind) {
        case RhsKind::constant: params["value"] = f.value; break;
        case RhsKind::abs_sq:
            params["scale"] = f.scale;
            params["constant"] = f.constant;
            if (!f.center.empty()) params["center"] = f.center;
            break;
        case RhsKind::exp_u:
            params["scale"] = f.scale;
            params["rate"] = f.rate;
            params["constant"] = f.constant;
            break;
        case RhsKind::grad_power:
            params["scale"] = f.scale;
            params["constant"] = f.constant;
            params["exponent"] = f.exponent;
            break;
    }
    return Json{{"kind", to_string(f.kind)}, {"params", params}};
}

Problem problem_from(const Json& j, const Where& at) {
    allow_only(j, {"n", "domain", "phi", "f", "exact"}, at);
    Problem p;
    p.n = count_from(member(j, "n", at), at / "n");
    if (p.n == 0) (at / "n").fail("n must be positive");
    p.domain = domain_from(member(j, "domain", at), p.n, at / "domain");
    p.phi = function_from(member(j, "phi", at), p.n, at / "phi");
    p.f = rhs_from(member(j, "f", at), at / "f");
    if (p.f.kind == RhsKind::abs_sq && !p.f.center.empty() && p.f.center.size() != 4 * p.n) {
        (at / "f" / "params" / "center").fail("expected " + std::to_string(4 * p.n) + " coordinates");
    }
    if (const Json* e = optional_member(j, "exact")) p.exact = function_from(*e, p.n, at / "exact");
    return p;
}

Json to_json(const Problem& p) {
    Json j{{"n", p.n}, {"domain", to_json(p.domain)}, {"phi", to_json(p.phi)}, {"f", to_json(p.f)}};
    if (p.exact) j["exact"] = to_json(*p.exact);
    return j;
}

}  // namespace hyperma::io
