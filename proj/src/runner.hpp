#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "funcspec.hpp"
#include "jensen.hpp"
#include "riesz.hpp"

namespace qjensen {

/// Flags shared by all commands; parsed from an options document with unknown
/// keys rejected so runs stay reproducible.
struct RunOptions {
    double rho = 1.0;
    double r = 0.0;    // bounds / sphere-mean inner radius
    double R = 0.0;    // bounds outer radius
    GridSpec grid{48, 48, 96};
    double fd_h = 1e-2;
    int richardson = 2;
    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    std::uint64_t seed = 0;
    double tolerance = 1e-4;
    std::array<double, 4> at{0, 0, 0, 0};
    bool has_phi = false;
    std::array<double, 4> phi_center{0, 0, 0, 0};
    double phi_radius = 0.0;
    BallResolution ball{};
};

RunOptions parse_run_options(const nlohmann::json& doc);

struct RunOutcome {
    nlohmann::json report;
    int exit_code = 0;  // 0 ok, 1 input error, 2 residual breach
};

/// command: eval | jensen | riesz | blaschke-verify | bounds | sphere-mean.
/// Never throws for breaches (exit_code 2); throws SpecError/DomainError for
/// invalid inputs (callers map those to exit 1).
RunOutcome run_command(const FunctionSpec& spec, const std::string& command,
                       const RunOptions& opts);

nlohmann::json jensen_report_to_json(const JensenReport& rep);
nlohmann::json riesz_check_to_json(const RieszCheck& check);

/// Human-readable rendering of a report document (text format).
std::string render_report_text(const nlohmann::json& report);

} // namespace qjensen
