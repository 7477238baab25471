// Batch front end: parse a function spec file, run one engine command through
// the shared-library C API, print the report, exit 0/1/2.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qjensen/qjensen.h"

namespace {

int fail_input(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return 1;
}

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quaternionic Jensen/Riesz laboratory"};
    app.require_subcommand(1);

    std::string spec_path;
    double rho = 1.0, r = 0.0, R = 0.0, fd_h = 1e-2, tolerance = 1e-4, phi_radius = 0.0;
    int richardson = 2;
    std::uint64_t seed = 0;
    std::string grid = "48,48,96", format = "text", eps_list, at, phi_center;

    const std::vector<std::string> commands = {"eval",   "jensen", "riesz",
                                               "blaschke-verify", "bounds", "sphere-mean"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("spec", spec_path, "function spec file (JSON)")->required();
        sub->add_option("--rho", rho, "ball radius");
        sub->add_option("--r", r, "inner / sphere-mean radius");
        sub->add_option("--R", R, "outer radius for bounds");
        sub->add_option("--grid", grid, "n_psi,n_theta,n_phi");
        sub->add_option("--fd-h", fd_h, "finite-difference base step");
        sub->add_option("--richardson", richardson, "extrapolation levels");
        sub->add_option("--eps-list", eps_list, "mollifier eps values (csv)");
        sub->add_option("--format", format, "text | json");
        sub->add_option("--seed", seed, "rotation/jitter seed");
        sub->add_option("--tolerance", tolerance, "residual gate");
        sub->add_option("--at", at, "evaluation point x0,x1,x2,x3");
        sub->add_option("--phi-center", phi_center, "bump center x0,x1,x2,x3");
        sub->add_option("--phi-radius", phi_radius, "bump support radius");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    std::ifstream in(spec_path);
    if (!in) return fail_input("cannot open spec file: " + spec_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string spec_text = buf.str();

    nlohmann::json opts;
    opts["rho"] = rho;
    if (r > 0.0) opts["r"] = r;
    if (R > 0.0) opts["R"] = R;
    try {
        const auto g = parse_csv_doubles(grid);
        if (g.size() != 3) return fail_input("--grid needs three comma-separated counts");
        opts["grid"] = {static_cast<int>(g[0]), static_cast<int>(g[1]), static_cast<int>(g[2])};
        if (!eps_list.empty()) opts["eps_list"] = parse_csv_doubles(eps_list);
        if (!at.empty()) {
            const auto v = parse_csv_doubles(at);
            if (v.size() != 4) return fail_input("--at needs four components");
            opts["at"] = v;
        }
        if (!phi_center.empty()) {
            const auto v = parse_csv_doubles(phi_center);
            if (v.size() != 4) return fail_input("--phi-center needs four components");
            opts["phi_center"] = v;
        }
    } catch (const std::exception& e) {
        return fail_input(std::string("bad numeric flag: ") + e.what());
    }
    opts["fd_h"] = fd_h;
    opts["richardson"] = richardson;
    opts["seed"] = seed;
    opts["tolerance"] = tolerance;
    if (phi_radius > 0.0) opts["phi_radius"] = phi_radius;

    qj_function* fn = nullptr;
    if (qj_function_parse_json(spec_text.c_str(), &fn) != QJ_OK)
        return fail_input(qj_last_error());

    char* report = nullptr;
    const qj_status status = qj_run(fn, command.c_str(), opts.dump().c_str(), &report);
    int exit_code = 0;
    if (status == QJ_ERR_TOLERANCE) exit_code = 2;
    else if (status != QJ_OK) {
        qj_function_free(fn);
        return fail_input(qj_last_error());
    }

    if (format == "json") {
        std::printf("%s\n", report);
    } else {
        char* text = nullptr;
        if (qj_render_text(report, &text) == QJ_OK) {
            std::printf("%s", text);
            qj_string_free(text);
        } else {
            std::printf("%s\n", report);
        }
    }
    qj_string_free(report);
    qj_function_free(fn);
    return exit_code;
}
