#include "cli.hpp"

#include "jetgeom/report/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>

namespace jetgeom::cli {

namespace {

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        err << "error: cannot write " << path << "\n";
        return false;
    }
    f << text;
    return static_cast<bool>(f);
}

std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

std::string residual(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

int cmd_analyze(const std::string& path, const std::string& out_path, const std::string& latex_path,
                std::ostream& out, std::ostream& err) {
    std::optional<ModelSpec> model;
    std::optional<Geometry> geo;
    try {
        model = load_model_file(path);
        geo = analyze(*model);
    } catch (const ReductionMismatch& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const TrivialityViolation& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const std::string report = geometry_report_json(*model, *geo);
    if (out_path.empty()) out << report;
    else if (!write_file(out_path, report, err)) return 1;
    if (!latex_path.empty() && !write_file(latex_path, geometry_report_latex(*model, *geo), err)) return 1;
    return 0;
}

int cmd_verify(const std::string& path, const VerifyOptions& opts, const std::string& json_path, std::ostream& out,
               std::ostream& err) {
    std::optional<ModelSpec> loaded;
    try {
        loaded = load_model_file(path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    const ModelSpec& model = *loaded;
    VerificationReport rep;
    try {
        rep = verify_model(model, opts);
    } catch (const ModelError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    out << "model " << model.name << " probes=" << rep.probes << " seed=" << rep.seed
        << " zero_tol=" << residual(rep.zero_tol) << " fd_tol=" << residual(rep.fd_tol) << "\n";
    for (const auto& r : rep.checks) {
        out << r.name << " " << sym::to_string(r.tier) << " " << residual(r.max_residual);
        if (!r.passed()) {
            out << " FAIL at " << r.component;
            if (r.witness) {
                out << " witness";
                for (int id = 0; id < model.coords.size(); ++id)
                    out << (id ? "," : " ") << model.coords.name(id) << "=" << r.witness->values[static_cast<std::size_t>(id)];
            }
        }
        out << "\n";
    }
    const auto failures = rep.failures();
    out << (failures.empty() ? "all " + std::to_string(rep.checks.size()) + " checks passed"
                             : std::to_string(failures.size()) + " of " + std::to_string(rep.checks.size()) +
                                   " checks failed")
        << "\n";
    if (!json_path.empty() && !write_file(json_path, verification_report_json(rep), err)) return 1;
    return failures.empty() ? 0 : 1;
}

int cmd_eval(const std::string& path, const std::string& at, std::ostream& out, std::ostream& err) {
    try {
        ModelSpec model = load_model_file(path);
        sym::Point point = sym::make_point(model.coords, sym::parse_point_spec(at));
        Geometry geo = analyze(model);
        std::string text;
        for (const DTensor* t : geo.families())
            t->for_each([&](const std::vector<int>& ix, const RatFunc& v) {
                text += t->key() + " " + (ix.empty() ? std::string("-") : index_label(ix)) + " " +
                        fixed12(sym::evaluate(v, point.values)) + "\n";
            });
        out << text;
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riemann-Lagrange geometry of quadratic multi-time Lagrangians", "jetgeom"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(engine_version()));

    std::string model, out_path, latex_path, json_path, at;
    VerifyOptions opts;

    auto* analyze_cmd = app.add_subcommand("analyze", "Compute every geometric family and print the report");
    analyze_cmd->add_option("model", model, "Model file")->required();
    analyze_cmd->add_option("-o,--out", out_path, "Write the JSON report here instead of stdout");
    analyze_cmd->add_option("--latex", latex_path, "Also write a LaTeX document");

    auto* verify_cmd = app.add_subcommand("verify", "Run the theorem ledger and the finite-difference audit");
    verify_cmd->add_option("model", model, "Model file")->required();
    verify_cmd->add_option("--probes", opts.probes, "Probe points per check")->check(CLI::Range(1, 1000));
    verify_cmd->add_option("--seed", opts.seed, "Probe seed");
    verify_cmd->add_option("--tol", opts.fd_tol, "Relative tolerance of the finite-difference audit")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--json", json_path, "Also write the verification report as JSON");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate every component at a point");
    eval_cmd->add_option("model", model, "Model file")->required();
    eval_cmd->add_option("--at", at, "Point, e.g. t1=0,x1=1.5,x2=0,v1_1=0,v2_1=0")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << engine_version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    if (analyze_cmd->parsed()) return cmd_analyze(model, out_path, latex_path, out, err);
    if (verify_cmd->parsed()) return cmd_verify(model, opts, json_path, out, err);
    return cmd_eval(model, at, out, err);
}

}  // namespace jetgeom::cli
