#include "funcspec.hpp"

#include <cmath>

namespace qjensen {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SpecError("spec error at " + path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) fail(path + "/" + key, "unknown field");
    }
}

double get_real(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a real number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

Quaternion get_quaternion(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 4) fail(path, "expected a 4-element real array");
    return {get_real(j[0], path + "[0]"), get_real(j[1], path + "[1]"),
            get_real(j[2], path + "[2]"), get_real(j[3], path + "[3]")};
}

json quaternion_to_json(const Quaternion& q) {
    return json::array({q.x0, q.x1, q.x2, q.x3});
}

FactoredSlicePreserving parse_factored(const json& j, const std::string& path, json& echo) {
    require_keys(j, path, {"kind", "monomial_power", "real_factors", "sphere_factors", "tail"});
    const int n = j.contains("monomial_power") ? get_int(j["monomial_power"], path) : 0;
    std::vector<RealFactor> rf;
    if (j.contains("real_factors")) {
        const auto& arr = j["real_factors"];
        if (!arr.is_array()) fail(path + "/real_factors", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + "/real_factors[" + std::to_string(i) + "]";
            require_keys(arr[i], p, {"point", "multiplicity"});
            if (!arr[i].contains("point") || !arr[i].contains("multiplicity"))
                fail(p, "needs point and multiplicity");
            rf.push_back({get_real(arr[i]["point"], p), get_int(arr[i]["multiplicity"], p)});
        }
    }
    std::vector<SphereFactor> sf;
    if (j.contains("sphere_factors")) {
        const auto& arr = j["sphere_factors"];
        if (!arr.is_array()) fail(path + "/sphere_factors", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = path + "/sphere_factors[" + std::to_string(i) + "]";
            require_keys(arr[i], p, {"point", "multiplicity"});
            if (!arr[i].contains("point") || !arr[i].contains("multiplicity"))
                fail(p, "needs point and multiplicity");
            sf.push_back(
                {get_quaternion(arr[i]["point"], p), get_int(arr[i]["multiplicity"], p)});
        }
    }
    std::optional<RealCoeffSeries> tail;
    if (j.contains("tail")) {
        const std::string p = path + "/tail";
        require_keys(j["tail"], p, {"coefficients", "radius_hint"});
        if (!j["tail"].contains("coefficients")) fail(p, "needs coefficients");
        const auto& cs = j["tail"]["coefficients"];
        if (!cs.is_array() || cs.empty()) fail(p + "/coefficients", "expected a nonempty array");
        std::vector<double> coeffs;
        for (std::size_t i = 0; i < cs.size(); ++i)
            coeffs.push_back(get_real(cs[i], p + "/coefficients[" + std::to_string(i) + "]"));
        const double radius = j["tail"].contains("radius_hint")
                                  ? get_real(j["tail"]["radius_hint"], p + "/radius_hint")
                                  : 1e3;
        if (!(radius > 0.0)) fail(p + "/radius_hint", "must be positive");
        tail = RealCoeffSeries(coeffs, radius);
    }
    FactoredSlicePreserving out(n, rf, sf, tail);

    echo["kind"] = "slice_preserving_factored";
    echo["monomial_power"] = n;
    echo["real_factors"] = json::array();
    for (const auto& f : rf)
        echo["real_factors"].push_back({{"point", f.point}, {"multiplicity", f.multiplicity}});
    echo["sphere_factors"] = json::array();
    for (const auto& f : sf)
        echo["sphere_factors"].push_back(
            {{"point", quaternion_to_json(f.point)}, {"multiplicity", f.multiplicity}});
    if (tail)
        echo["tail"] = {{"coefficients", tail->coefficients}, {"radius_hint", tail->radius_hint}};
    return out;
}

PQLFunction parse_pql(const json& j, const std::string& path, json& echo) {
    require_keys(j, path, {"kind", "constants", "factors"});
    if (!j.contains("constants")) fail(path, "pql needs constants");
    const auto& carr = j["constants"];
    if (!carr.is_array() || carr.empty()) fail(path + "/constants", "expected a nonempty array");
    std::vector<Quaternion> constants;
    for (std::size_t i = 0; i < carr.size(); ++i)
        constants.push_back(get_quaternion(carr[i], path + "/constants[" + std::to_string(i) + "]"));
    std::vector<Quaternion> points;
    std::vector<int> signs;
    if (j.contains("factors")) {
        const auto& farr = j["factors"];
        if (!farr.is_array()) fail(path + "/factors", "expected an array");
        for (std::size_t i = 0; i < farr.size(); ++i) {
            const std::string p = path + "/factors[" + std::to_string(i) + "]";
            require_keys(farr[i], p, {"point", "sign"});
            if (!farr[i].contains("point") || !farr[i].contains("sign"))
                fail(p, "needs point and sign");
            points.push_back(get_quaternion(farr[i]["point"], p));
            signs.push_back(get_int(farr[i]["sign"], p));
        }
    }
    PQLFunction out(constants, points, signs);

    echo["kind"] = "pql";
    echo["constants"] = json::array();
    for (const auto& a : constants) echo["constants"].push_back(quaternion_to_json(a));
    echo["factors"] = json::array();
    for (std::size_t i = 0; i < points.size(); ++i)
        echo["factors"].push_back({{"point", quaternion_to_json(points[i])}, {"sign", signs[i]}});
    return out;
}

BlaschkeSpec parse_blaschke(const json& j, const std::string& path, BlaschkeKind kind,
                            json& echo) {
    require_keys(j, path, {"kind", "a", "rho"});
    if (!j.contains("a") || !j.contains("rho")) fail(path, "blaschke needs a and rho");
    const Quaternion a = get_quaternion(j["a"], path + "/a");
    const double rho = get_real(j["rho"], path + "/rho");
    BlaschkeSpec out(a, rho, kind);
    echo["kind"] =
        kind == BlaschkeKind::Punctual ? "blaschke_punctual" : "blaschke_spherical";
    echo["a"] = quaternion_to_json(a);
    echo["rho"] = rho;
    return out;
}

} // namespace

FunctionSpec parse_function_spec(const json& doc) {
    FunctionSpec spec;
    if (!doc.is_object()) throw SpecError("spec error at /: expected an object");
    if (!doc.contains("kind") || !doc["kind"].is_string())
        throw SpecError("spec error at /kind: missing or non-string");
    const std::string kind = doc["kind"].get<std::string>();
    json echo = json::object();
    try {
        if (kind == "slice_preserving_factored") {
            spec.kind = FunctionSpec::Kind::SlicePreservingFactored;
            spec.factored = parse_factored(doc, "/", echo);
        } else if (kind == "pql") {
            spec.kind = FunctionSpec::Kind::Pql;
            spec.pql = parse_pql(doc, "/", echo);
        } else if (kind == "blaschke_punctual") {
            spec.kind = FunctionSpec::Kind::BlaschkePunctual;
            spec.blaschke = parse_blaschke(doc, "/", BlaschkeKind::Punctual, echo);
        } else if (kind == "blaschke_spherical") {
            spec.kind = FunctionSpec::Kind::BlaschkeSpherical;
            spec.blaschke = parse_blaschke(doc, "/", BlaschkeKind::Spherical, echo);
        } else if (kind == "mixed") {
            spec.kind = FunctionSpec::Kind::Mixed;
            require_keys(doc, "/", {"kind", "parts"});
            if (!doc.contains("parts") || !doc["parts"].is_array() || doc["parts"].empty())
                fail("/parts", "expected a nonempty array");
            echo["kind"] = "mixed";
            echo["parts"] = json::array();
            for (std::size_t i = 0; i < doc["parts"].size(); ++i) {
                const auto& pj = doc["parts"][i];
                const std::string p = "/parts[" + std::to_string(i) + "]";
                if (!pj.is_object() || !pj.contains("kind") || !pj["kind"].is_string())
                    fail(p, "part needs a kind");
                const std::string pk = pj["kind"].get<std::string>();
                json pecho = json::object();
                if (pk == "slice_preserving_factored")
                    spec.parts.emplace_back(parse_factored(pj, p, pecho));
                else if (pk == "pql")
                    spec.parts.emplace_back(parse_pql(pj, p, pecho));
                else
                    fail(p + "/kind", "mixed parts must be slice_preserving_factored or pql");
                echo["parts"].push_back(pecho);
            }
        } else {
            throw SpecError("spec error at /kind: unknown kind '" + kind + "'");
        }
    } catch (const DomainError& e) {
        throw SpecError(std::string("spec error: invariant violated: ") + e.what());
    }
    spec.echo = echo;
    return spec;
}

FunctionSpec parse_function_spec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SpecError(std::string("spec error: invalid JSON: ") + e.what());
    }
    return parse_function_spec(doc);
}

ZeroPoleLedger FunctionSpec::ledger() const {
    switch (kind) {
        case Kind::SlicePreservingFactored: return factored->ledger();
        case Kind::Pql: return pql->ledger();
        case Kind::BlaschkePunctual:
        case Kind::BlaschkeSpherical: return blaschke->ledger();
        case Kind::Mixed: {
            ZeroPoleLedger merged;
            for (const auto& p : parts) {
                const ZeroPoleLedger l = std::visit([](const auto& g) { return g.ledger(); }, p);
                merged.entries.insert(merged.entries.end(), l.entries.begin(), l.entries.end());
                merged.origin_order += l.origin_order;
                merged.origin_zero_or_pole |= l.origin_zero_or_pole;
            }
            return merged;
        }
    }
    return {};
}

EvalResult FunctionSpec::eval(const Quaternion& x) const {
    switch (kind) {
        case Kind::SlicePreservingFactored: return factored->eval(x);
        case Kind::Pql: return pql->eval(x);
        case Kind::BlaschkePunctual:
        case Kind::BlaschkeSpherical: return blaschke->eval(x);
        case Kind::Mixed: {
            Quaternion acc(1.0);
            for (const auto& p : parts) {
                const EvalResult r =
                    std::visit([&](const auto& g) { return g.eval(x); }, p);
                if (!r.is_finite()) return r;
                acc = acc * r.value;
            }
            return EvalResult::finite(acc);
        }
    }
    return EvalResult::finite(Quaternion{});
}

double FunctionSpec::log_abs(const Quaternion& x) const {
    switch (kind) {
        case Kind::SlicePreservingFactored: return factored->log_abs(x);
        case Kind::Pql: return pql->log_abs(x);
        case Kind::BlaschkePunctual:
        case Kind::BlaschkeSpherical: return blaschke->log_abs(x);
        case Kind::Mixed: {
            double s = 0.0;
            for (const auto& p : parts)
                s += std::visit([&](const auto& g) { return g.log_abs(x); }, p);
            return s;
        }
    }
    return 0.0;
}

const char* FunctionSpec::kind_name() const {
    switch (kind) {
        case Kind::SlicePreservingFactored: return "slice_preserving_factored";
        case Kind::Pql: return "pql";
        case Kind::BlaschkePunctual: return "blaschke_punctual";
        case Kind::BlaschkeSpherical: return "blaschke_spherical";
        case Kind::Mixed: return "mixed";
    }
    return "unknown";
}

} // namespace qjensen
