#include "runner.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qjensen {

namespace {

using nlohmann::json;

json quat_json(const Quaternion& q) { return json::array({q.x0, q.x1, q.x2, q.x3}); }

json grid_json(const GridSpec& g) { return json::array({g.n_psi, g.n_theta, g.n_phi}); }

JensenOptions jensen_options(const RunOptions& o) {
    JensenOptions jo;
    jo.grid = o.grid;
    jo.fd.h = o.fd_h;
    jo.fd.richardson_levels = o.richardson;
    jo.seed = o.seed;
    return jo;
}

} // namespace

RunOptions parse_run_options(const json& doc) {
    RunOptions o;
    if (doc.is_null()) return o;
    if (!doc.is_object()) throw SpecError("options error: expected an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "rho") o.rho = value.get<double>();
        else if (key == "r") o.r = value.get<double>();
        else if (key == "R") o.R = value.get<double>();
        else if (key == "grid") {
            if (!value.is_array() || value.size() != 3)
                throw SpecError("options error: grid must be [n_psi, n_theta, n_phi]");
            o.grid = {value[0].get<int>(), value[1].get<int>(), value[2].get<int>()};
        } else if (key == "fd_h") o.fd_h = value.get<double>();
        else if (key == "richardson") o.richardson = value.get<int>();
        else if (key == "eps_list") o.eps_list = value.get<std::vector<double>>();
        else if (key == "seed") o.seed = value.get<std::uint64_t>();
        else if (key == "tolerance") o.tolerance = value.get<double>();
        else if (key == "at") o.at = value.get<std::array<double, 4>>();
        else if (key == "phi_center") {
            o.phi_center = value.get<std::array<double, 4>>();
            o.has_phi = true;
        } else if (key == "phi_radius") {
            o.phi_radius = value.get<double>();
            o.has_phi = true;
        } else if (key == "ball_radial") o.ball.n_radial = value.get<int>();
        else if (key == "ball_grid") {
            if (!value.is_array() || value.size() != 3)
                throw SpecError("options error: ball_grid must be [n_psi, n_theta, n_phi]");
            o.ball.sphere = {value[0].get<int>(), value[1].get<int>(), value[2].get<int>()};
        } else throw SpecError("options error: unknown option '" + key + "'");
    }
    return o;
}

json jensen_report_to_json(const JensenReport& rep) {
    json corrections = json::array();
    for (const auto& c : rep.corrections)
        corrections.push_back({{"source", c.source}, {"branch", c.branch}, {"value", c.value}});
    json meta{{"grid", grid_json(rep.metadata.grid)},
              {"fd_h", rep.metadata.fd_h},
              {"richardson_levels", rep.metadata.richardson_levels},
              {"seed", rep.metadata.seed},
              {"laplacian_path", rep.metadata.laplacian_path},
              {"rotations_tried", rep.metadata.rotations_tried},
              {"min_node_clearance", rep.metadata.min_node_clearance},
              {"boundary_extrapolation", rep.metadata.boundary_extrapolation},
              {"cone_reduction", rep.metadata.cone_reduction},
              {"multiplicity_convention", rep.metadata.multiplicity_convention}};
    if (!rep.metadata.extrapolation_radii.empty()) {
        meta["extrapolation_radii"] = rep.metadata.extrapolation_radii;
        meta["extrapolation_means"] = rep.metadata.extrapolation_means;
    }
    if (!rep.metadata.notes.empty()) meta["notes"] = rep.metadata.notes;
    json out{{"rho", rep.rho},
             {"lhs", rep.lhs},
             {"mean_term", rep.mean_term},
             {"laplacian_term", rep.laplacian_term},
             {"corrections", corrections},
             {"corrections_sum", rep.corrections_sum},
             {"residual", rep.residual},
             {"metadata", meta}};
    if (rep.origin_adjusted) {
        out["origin"] = {{"k", rep.origin_k}, {"log_f1_at_zero", rep.log_f1_at_zero}};
    }
    return out;
}

json riesz_check_to_json(const RieszCheck& check) {
    json out{{"pairing", check.pairing_value},
             {"predicted", check.predicted},
             {"residual", check.residual},
             {"gamma_nominal", check.gamma_nominal},
             {"gamma_measured", check.gamma_measured},
             {"resolution",
              {{"radial", check.resolution.n_radial}, {"sphere", grid_json(check.resolution.sphere)}}}};
    if (check.sphere_constant) {
        out["sphere_constant"] = {
            {"measured_per_unit_sigma", check.sphere_constant->measured},
            {"nominal", check.sphere_constant->nominal},
            {"sigma_integral_sum", check.sphere_constant->sigma_integral_sum},
            {"agrees_with_nominal", check.sphere_constant->agrees_with_nominal},
            {"note", "sphere terms adjudicated by quadrature; see gamma_measured"}};
    }
    return out;
}

namespace {

RunOutcome run_eval(const FunctionSpec& spec, const RunOptions& opts) {
    const Quaternion x{opts.at[0], opts.at[1], opts.at[2], opts.at[3]};
    const EvalResult r = spec.eval(x);
    json payload{{"at", quat_json(x)}};
    switch (r.kind) {
        case EvalResult::Kind::Finite:
            payload["status"] = "finite";
            payload["value"] = quat_json(r.value);
            payload["abs"] = r.value.norm();
            break;
        case EvalResult::Kind::Pole:
            payload["status"] = "pole";
            payload["note"] = r.note;
            break;
        case EvalResult::Kind::Ambiguous:
            payload["status"] = "ambiguous";
            payload["note"] = r.note;
            break;
    }
    return {payload, 0};
}

RunOutcome run_jensen(const FunctionSpec& spec, const RunOptions& opts) {
    const JensenOptions jo = jensen_options(opts);
    JensenReport rep;
    switch (spec.kind) {
        case FunctionSpec::Kind::SlicePreservingFactored:
            rep = jensen_auto(*spec.factored, opts.rho, jo);
            break;
        case FunctionSpec::Kind::Pql:
            rep = jensen_auto(*spec.pql, opts.rho, jo);
            break;
        case FunctionSpec::Kind::BlaschkePunctual:
            rep = jensen_auto(spec.blaschke->as_pql(), opts.rho, jo);
            break;
        case FunctionSpec::Kind::BlaschkeSpherical:
            rep = jensen_auto(spec.blaschke->as_factored(), opts.rho, jo);
            break;
        case FunctionSpec::Kind::Mixed: {
            rep = jensen_mixed(spec.parts, opts.rho, jo);
            break;
        }
    }
    json payload = jensen_report_to_json(rep);
    payload["tolerance"] = opts.tolerance;
    const bool ok = std::abs(rep.residual) <= opts.tolerance;
    payload["within_tolerance"] = ok;
    return {payload, ok ? 0 : 2};
}

RunOutcome run_riesz(const FunctionSpec& spec, const RunOptions& opts) {
    BumpFunction phi = [&] {
        if (opts.has_phi && opts.phi_radius > 0.0)
            return BumpFunction(
                {opts.phi_center[0], opts.phi_center[1], opts.phi_center[2], opts.phi_center[3]},
                opts.phi_radius);
        // Default: a bump of half the working radius at the origin.
        return BumpFunction(Quaternion{}, opts.rho > 0 ? 0.5 * opts.rho : 0.5);
    }();
    RieszOptions ro;
    ro.resolution = opts.ball;
    RieszCheck check;
    switch (spec.kind) {
        case FunctionSpec::Kind::SlicePreservingFactored:
            check = riesz_residual(RieszFunction{*spec.factored}, phi, ro);
            break;
        case FunctionSpec::Kind::Pql:
            check = riesz_residual(RieszFunction{*spec.pql}, phi, ro);
            break;
        case FunctionSpec::Kind::BlaschkePunctual:
            check = riesz_residual(RieszFunction{spec.blaschke->as_pql()}, phi, ro);
            break;
        case FunctionSpec::Kind::BlaschkeSpherical:
            check = riesz_residual(RieszFunction{spec.blaschke->as_factored()}, phi, ro);
            break;
        case FunctionSpec::Kind::Mixed:
            check = riesz_residual_mixed(spec.parts, phi, ro);
            break;
    }
    json payload = riesz_check_to_json(check);
    payload["phi"] = {{"center", quat_json(phi.center())},
                      {"radius", phi.radius()},
                      {"amplitude", phi.amplitude()}};
    payload["tolerance"] = opts.tolerance;
    const bool ok = std::abs(check.residual) <= opts.tolerance;
    payload["within_tolerance"] = ok;
    return {payload, ok ? 0 : 2};
}

RunOutcome run_blaschke_verify(const FunctionSpec& spec, const RunOptions& opts) {
    if (!spec.blaschke) throw SpecError("blaschke-verify needs a blaschke_* spec");
    const BlaschkeSpec& B = *spec.blaschke;
    // Boundary modulus over quasi-random boundary points.
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    const int n_samples = 200;
    for (int s = 0; s < n_samples; ++s) {
        Quaternion d{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
        d = d * (B.rho() / d.norm());
        const EvalResult v = B.eval(d);
        worst = std::max(worst, std::abs(v.value.norm() - 1.0));
    }
    const double closed = B.laplacian_log_at_zero();
    FDConfig cfg;
    cfg.h = opts.fd_h;
    cfg.richardson_levels = opts.richardson;
    const double fd = laplacian_fd([&B](const Quaternion& x) { return B.log_abs(x); },
                                   Quaternion{}, cfg);
    const double rel = std::abs(fd - closed) / std::abs(closed);
    json payload{{"kind", B.kind() == BlaschkeKind::Punctual ? "punctual" : "spherical"},
                 {"boundary_samples", n_samples},
                 {"max_boundary_modulus_error", worst},
                 {"laplacian_log_at_zero_closed", closed},
                 {"laplacian_log_at_zero_fd", fd},
                 {"laplacian_relative_error", rel},
                 {"tolerance", opts.tolerance}};
    const bool ok = worst < 1e-10 && rel < 1e-6;
    payload["within_tolerance"] = ok;
    return {payload, ok ? 0 : 2};
}

RunOutcome run_bounds(const FunctionSpec& spec, const RunOptions& opts) {
    if (spec.kind != FunctionSpec::Kind::SlicePreservingFactored)
        throw SpecError("bounds needs a slice_preserving_factored spec");
    if (!(opts.r > 0.0) || !(opts.R > opts.r))
        throw SpecError("bounds needs flags 0 < r < R");
    const JensenOptions jo = jensen_options(opts);
    const ZeroCountBound zb = zero_count_bound(*spec.factored, opts.r, opts.R, jo);
    const ZeroFreeRadius zf = zero_free_radius(*spec.factored, jo);
    json payload{{"r", opts.r},
                 {"R", opts.R},
                 {"zero_count", {{"bound", zb.bound},
                                 {"actual", zb.n_actual},
                                 {"max_modulus_at_R", zb.max_modulus_at_R},
                                 {"count_convention", "ledger (factor) multiplicity"},
                                 {"ineqzero_display_missing_half",
                                  zb.ineqzero_display_missing_half}}},
                 {"zero_free", {{"radius", zf.radius},
                                {"guard", zf.guard},
                                {"vacuous", zf.vacuous},
                                {"ledger_consistent", zf.ledger_consistent}}}};
    const bool ok = zb.n_actual <= zb.bound + 1e-9 && zf.ledger_consistent;
    payload["holds"] = ok;
    return {payload, ok ? 0 : 2};
}

RunOutcome run_sphere_mean(const FunctionSpec& spec, const RunOptions& opts) {
    json payload;
    double closed = 0.0, radius = 0.0;
    RealEvaluator logf;
    ZeroPoleLedger ledger;
    if (spec.blaschke) {
        radius = opts.r > 0.0 ? opts.r : opts.rho;
        closed = blaschke_sphere_mean(*spec.blaschke, radius);
        const BlaschkeSpec B = *spec.blaschke;
        logf = [B](const Quaternion& x) { return B.log_abs(x); };
        ledger = B.ledger();
        payload["kind"] = B.kind() == BlaschkeKind::Punctual ? "punctual" : "spherical";
    } else if (spec.kind == FunctionSpec::Kind::Pql) {
        radius = opts.rho;
        closed = pql_sphere_mean(*spec.pql, radius);
        const PQLFunction f = *spec.pql;
        logf = [f](const Quaternion& x) { return f.log_abs(x); };
        ledger = f.ledger();
        payload["kind"] = "pql";
    } else {
        throw SpecError("sphere-mean needs a blaschke_* or pql spec");
    }
    const double quad =
        mean_on_s3(logf, radius, S3Grid(opts.grid, radius), &ledger, opts.seed);
    payload["radius"] = radius;
    payload["closed_form"] = closed;
    payload["quadrature"] = quad;
    payload["difference"] = closed - quad;
    payload["tolerance"] = opts.tolerance;
    const bool ok = std::abs(closed - quad) <= opts.tolerance;
    payload["within_tolerance"] = ok;
    return {payload, ok ? 0 : 2};
}

} // namespace

RunOutcome run_command(const FunctionSpec& spec, const std::string& command,
                       const RunOptions& opts) {
    RunOutcome out;
    if (command == "eval") out = run_eval(spec, opts);
    else if (command == "jensen") out = run_jensen(spec, opts);
    else if (command == "riesz") out = run_riesz(spec, opts);
    else if (command == "blaschke-verify") out = run_blaschke_verify(spec, opts);
    else if (command == "bounds") out = run_bounds(spec, opts);
    else if (command == "sphere-mean") out = run_sphere_mean(spec, opts);
    else throw SpecError("unknown command '" + command + "'");

    json report{{"command", command},
                {"result", out.report},
                {"spec", spec.echo},
                {"options",
                 {{"rho", opts.rho},
                  {"r", opts.r},
                  {"R", opts.R},
                  {"grid", grid_json(opts.grid)},
                  {"fd_h", opts.fd_h},
                  {"richardson", opts.richardson},
                  {"seed", opts.seed},
                  {"tolerance", opts.tolerance}}}};
    out.report = report;
    return out;
}

std::string render_report_text(const json& report) {
    std::ostringstream os;
    os.precision(12);
    const std::string command = report.value("command", "?");
    os << "command: " << command << "\n";
    const json& r = report.at("result");
    auto line = [&os](const std::string& k, const json& v) {
        os << "  " << k << ": ";
        if (v.is_number()) os << v.get<double>();
        else os << v.dump();
        os << "\n";
    };
    if (command == "jensen") {
        line("rho", r.at("rho"));
        line("lhs", r.at("lhs"));
        if (r.contains("origin")) line("origin", r.at("origin"));
        line("mean_term", r.at("mean_term"));
        line("laplacian_term", r.at("laplacian_term"));
        for (const auto& c : r.at("corrections"))
            os << "  correction [" << c.at("branch").get<std::string>() << "] "
               << c.at("source").get<std::string>() << " = " << c.at("value").get<double>()
               << "\n";
        line("corrections_sum", r.at("corrections_sum"));
        line("residual", r.at("residual"));
        line("within_tolerance", r.at("within_tolerance"));
    } else if (command == "riesz") {
        line("pairing", r.at("pairing"));
        line("predicted", r.at("predicted"));
        line("residual", r.at("residual"));
        line("gamma_nominal", r.at("gamma_nominal"));
        line("gamma_measured", r.at("gamma_measured"));
        if (r.contains("sphere_constant")) line("sphere_constant", r.at("sphere_constant"));
        line("within_tolerance", r.at("within_tolerance"));
    } else {
        for (const auto& [k, v] : r.items()) line(k, v);
    }
    return os.str();
}

} // namespace qjensen
