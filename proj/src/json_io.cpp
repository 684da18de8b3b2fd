#include "kolmo/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace kolmo
{

namespace
{

void write_number(std::string& out, double x)
{
    if (!std::isfinite(x)) {
        // JSON has no inf/nan
        out += "null";
        return;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
}

void write_string(std::string& out, const std::string& s)
{
    // reuse the library's escaping
    out += Json(s).dump();
}

void write(std::string& out, const Json& j, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad;
            write_string(out, it.key());
            out += ": ";
            write(out, it.value(), depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // scalar arrays on one line
        const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
        out += flat ? "[" : "[\n";
        bool first = true;
        for (const Json& e : j) {
            if (!first) {
                out += flat ? ", " : ",\n";
            }
            first = false;
            if (!flat) {
                out += pad;
            }
            write(out, e, depth + 1);
        }
        out += flat ? "]" : "\n" + close_pad + "]";
        return;
    }
    case Json::value_t::number_float:
        write_number(out, j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

const Json& field(const Json& doc, const char* name)
{
    if (!doc.is_object()) {
        throw InputError("expected a JSON object");
    }
    const auto it = doc.find(name);
    if (it == doc.end()) {
        throw InputError(std::string("missing field \"") + name + "\"");
    }
    return *it;
}

std::vector<double> number_array(const Json& doc, const char* name)
{
    const Json& a = field(doc, name);
    if (!a.is_array()) {
        throw InputError(std::string("field \"") + name + "\" must be an array of numbers");
    }
    std::vector<double> out;
    for (const Json& e : a) {
        if (!e.is_number()) {
            throw InputError(std::string("field \"") + name + "\" must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> exponent_array(const Json& doc)
{
    const Json& a = field(doc, "k");
    if (!a.is_array() || a.empty()) {
        throw InputError("field \"k\" must be a nonempty array of integers");
    }
    std::vector<int> out;
    for (const Json& e : a) {
        if (!e.is_number_integer()) {
            throw InputError("field \"k\" must contain only integers");
        }
        out.push_back(e.get<int>());
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i] <= out[i - 1]) {
            throw InputError("field \"k\" must be strictly increasing (k_1 < k_2 < ... < k_d)");
        }
    }
    if (out.front() < 0) {
        throw InputError("field \"k\" must be nonnegative");
    }
    return out;
}

Vector<double> to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Vector<double>>(v.data(), static_cast<Index>(v.size()));
}

Json to_array(const Vector<double>& v)
{
    Json a = Json::array();
    for (Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

/// Converts library domain errors raised while building objects into input errors.
template <typename F>
auto checked(F&& build)
{
    try {
        return build();
    } catch (const DomainError& e) {
        throw InputError(e.what());
    }
}

} // namespace

std::string dump(const Json& doc)
{
    std::string out;
    write(out, doc, 0);
    out += "\n";
    return out;
}

Json parse_document(const std::string& text)
{
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(std::string("malformed JSON: ") + e.what());
    }
}

FamilyKind parse_family(const std::string& name)
{
    if (name == "am") {
        return FamilyKind::AM;
    }
    if (name == "mm") {
        return FamilyKind::MM;
    }
    throw InputError("family must be \"am\" or \"mm\", got \"" + name + "\"");
}

namespace
{

FunctionFamily family_from(const Json& doc, int default_r)
{
    const Json& f = field(doc, "family");
    if (!f.is_string()) {
        throw InputError("field \"family\" must be a string");
    }
    const FamilyKind kind = parse_family(f.get<std::string>());
    int r = default_r;
    if (doc.contains("r")) {
        if (!doc["r"].is_number_integer()) {
            throw InputError("field \"r\" must be an integer");
        }
        r = doc["r"].get<int>();
    } else if (kind == FamilyKind::MM) {
        throw InputError("missing field \"r\" (required for family \"mm\")");
    }
    return checked([&] { return FunctionFamily(kind, r); });
}

} // namespace

Json to_json(const IdealSpline& spline)
{
    Json j;
    j["family"] = to_string(spline.family().kind);
    j["r"] = spline.family().r;
    j["knots"] = spline.knots();
    j["weights"] = spline.weights();
    j["constant"] = spline.constant();
    return j;
}

IdealSpline spline_from_json(const Json& doc)
{
    const FunctionFamily family = family_from(doc, 0);
    if (!doc.contains("r")) {
        throw InputError("missing field \"r\"");
    }
    auto knots = number_array(doc, "knots");
    auto weights = number_array(doc, "weights");
    double constant = 0.0;
    if (doc.contains("constant")) {
        if (!doc["constant"].is_number()) {
            throw InputError("field \"constant\" must be a number");
        }
        constant = doc["constant"].get<double>();
    }
    return checked([&] { return IdealSpline(family, std::move(knots), std::move(weights), constant); });
}

Json to_json(const NormVector& norms)
{
    Json j;
    j["family"] = to_string(norms.family.kind);
    j["r"] = norms.family.r;
    j["k"] = norms.exponents.values();
    j["M"] = to_array(norms.values);
    return j;
}

NormVector problem_from_json(const Json& doc)
{
    const std::vector<int> k = exponent_array(doc);
    const FunctionFamily family = family_from(doc, std::max(1, k.back()));
    const std::vector<double> m = number_array(doc, "M");
    if (m.size() != k.size()) {
        throw InputError("fields \"k\" and \"M\" differ in length");
    }
    if (family.kind == FamilyKind::MM && k.back() > family.r) {
        throw InputError("exponent k_d exceeds the order r of the mm family");
    }
    return checked([&] {
        return NormVector(to_vector(m), ExponentVector(k, std::max(family.r, k.back())), family);
    });
}

Json to_json(const MomentVector& c)
{
    Json j;
    j["k"] = c.exponents.values();
    j["c"] = to_array(c.values);
    return j;
}

MomentVector moments_from_json(const Json& doc)
{
    if (doc.is_object() && doc.contains("family")) {
        const NormVector norms = problem_from_json(doc);
        return checked([&] { return moment_coordinates(norms); });
    }
    const std::vector<int> k = exponent_array(doc);
    const std::vector<double> c = number_array(doc, "c");
    if (c.size() != k.size()) {
        throw InputError("fields \"k\" and \"c\" differ in length");
    }
    for (double x : c) {
        if (!std::isfinite(x)) {
            throw InputError("moments must be finite");
        }
    }
    return checked([&] { return MomentVector(to_vector(c), ExponentVector(k)); });
}

Json to_json(const Representation& rep)
{
    Json j;
    j["index"] = index_of(rep).to_string();
    Json atoms = Json::array();
    for (const Atom& a : rep.atoms()) {
        Json atom;
        atom["node"] = a.node;
        atom["weight"] = a.weight;
        atoms.push_back(std::move(atom));
    }
    j["atoms"] = std::move(atoms);
    return j;
}

Json to_json(const FeasibilityReport& report)
{
    Json j;
    j["feasible"] = report.feasible;
    j["residual"] = report.residual;
    j["support"] = to_json(report.support)["atoms"];
    return j;
}

Json to_json(const Classification& c, bool with_oracle)
{
    Json j;
    j["class"] = to_string(c.kind);
    j["witness"] = c.witness ? to_json(*c.witness) : Json(nullptr);
    if (with_oracle) {
        if (c.oracle) {
            Json o = to_json(*c.oracle);
            const bool member = c.kind == ConeClass::Boundary || c.kind == ConeClass::Interior;
            o["agrees"] = o["feasible"].get<bool>() == member;
            j["oracle"] = std::move(o);
        } else {
            j["oracle"] = nullptr;
        }
    }
    return j;
}

Json to_json(const AdmissibilityResult& result)
{
    Json j;
    j["status"] = to_string(result.status);
    j["witness"] = result.witness ? to_json(*result.witness) : Json(nullptr);
    Json trace = Json::array();
    for (const TraceRecord& t : result.trace) {
        Json level;
        level["k"] = t.k;
        level["classification"] = to_string(t.classification);
        if (t.compared) {
            Json cmp;
            cmp["lhs"] = t.compared->lhs;
            cmp["rhs"] = t.compared->rhs;
            level["compared"] = std::move(cmp);
        } else {
            level["compared"] = nullptr;
        }
        trace.push_back(std::move(level));
    }
    j["trace"] = std::move(trace);
    return j;
}

} // namespace kolmo
