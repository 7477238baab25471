#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "blaschke.hpp"
#include "factored.hpp"
#include "pql.hpp"

namespace qjensen {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One function declaration loaded from a spec document. Quaternions are
/// 4-element real arrays [x0,x1,x2,x3]; unknown fields are rejected and all
/// constructor invariants re-checked on load.
struct FunctionSpec {
    enum class Kind { SlicePreservingFactored, Pql, BlaschkePunctual, BlaschkeSpherical, Mixed };
    Kind kind = Kind::SlicePreservingFactored;
    std::optional<FactoredSlicePreserving> factored;
    std::optional<PQLFunction> pql;
    std::optional<BlaschkeSpec> blaschke;
    std::vector<MixedPart> parts;

    /// Normalized document (reparses to an equal object).
    nlohmann::json echo;

    ZeroPoleLedger ledger() const;
    EvalResult eval(const Quaternion& x) const;
    double log_abs(const Quaternion& x) const;
    const char* kind_name() const;
};

FunctionSpec parse_function_spec(const nlohmann::json& doc);
FunctionSpec parse_function_spec_text(const std::string& text);

} // namespace qjensen
