#include "jetgeom/report/report.hpp"

#include <json.hpp>

#include <array>
#include <sstream>

namespace jetgeom {

using nlohmann::json;

namespace {

std::string print(const sym::Expr& e) { return sym::to_string(sym::normalize(e)); }

json expr_matrix(const std::vector<sym::Expr>& flat, int rows, int cols) {
    json m = json::array();
    for (int r = 0; r < rows; ++r) {
        json row = json::array();
        for (int c = 0; c < cols; ++c) row.push_back(print(flat[static_cast<std::size_t>(r * cols + c)]));
        m.push_back(std::move(row));
    }
    return m;
}

json components(const DTensor& t) {
    json out = json::object();
    t.for_each([&](const std::vector<int>& ix, const RatFunc& v) {
        out[ix.empty() ? std::string("scalar") : index_label(ix)] = sym::to_string(v);
    });
    return out;
}

json model_echo(const ModelSpec& m, const Geometry& geo) {
    const auto& c = m.coords;
    json coords = {{"temporal", json::array()}, {"spatial", json::array()}, {"velocity", json::array()}};
    for (int id = 0; id < c.size(); ++id) {
        const char* kind = id < c.p() ? "temporal" : id < c.p() + c.n() ? "spatial" : "velocity";
        coords[kind].push_back(c.name(id));
    }
    json j = {{"name", m.name},
              {"p", m.p()},
              {"n", m.n()},
              {"coordinates", coords},
              {"h", expr_matrix(m.h, m.p(), m.p())},
              {"einstein_constant", sym::to_string(m.einstein_constant)},
              {"signature", geo.spatial.signature},
              {"kronecker_h_regular", geo.kronecker.equals_vertical}};
    if (const auto* l = std::get_if<LagrangianSource>(&m.metric_source)) {
        j["lagrangian"] = print(l->lagrangian);
    } else {
        const auto& t = std::get<TensorSource>(m.metric_source);
        j["G"] = expr_matrix(t.G, m.p() * m.n(), m.p() * m.n());
        j["U"] = expr_matrix(t.U, m.p(), m.n());
        j["F"] = print(t.F);
    }
    json samples = json::array();
    for (const auto& pt : m.sample_points) {
        json s = json::object();
        for (int id = 0; id < c.p() + c.n(); ++id) s[c.name(id)] = pt[id];
        samples.push_back(std::move(s));
    }
    j["sample_points"] = samples;
    if (m.corruption) {
        std::vector<int> one_based;
        for (int k : m.corruption->index) one_based.push_back(k + 1);
        j["fixture_corruption"] = {
            {"family", m.corruption->family}, {"index", one_based}, {"delta", sym::to_string(m.corruption->delta)}};
    }
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ------------------------------------------------------------ LaTeX

std::string latex_label(std::string_view label) {
    static const std::array<std::string_view, 6> greek = {"alpha", "beta", "gamma", "eta", "mu", "nu"};
    std::string out;
    std::size_t k = 0;
    while (k < label.size()) {
        bool matched = false;
        for (auto g : greek)
            if (label.substr(k, g.size()) == g) {
                out += "\\" + std::string(g) + " ";
                k += g.size();
                matched = true;
                break;
            }
        if (!matched) out += label[k++];
    }
    return out;
}

std::string latex_symbol(const std::string& key) {
    const auto split = key.find_first_of("^_");
    std::string base = key.substr(0, split);
    if (base.starts_with("cal")) base = "\\mathcal{" + base.substr(3) + "}";
    else if (base == "Gamma") base = "\\Gamma";
    if (split == std::string::npos) return base;
    std::string upper, lower;
    auto up = key.find('^'), down = key.find('_');
    if (up != std::string::npos) upper = key.substr(up + 1, down == std::string::npos ? down : down - up - 1);
    if (down != std::string::npos) lower = key.substr(down + 1);
    std::string s = base;
    if (!upper.empty()) s += "^{" + latex_label(upper) + "}";
    if (!lower.empty()) s += "_{" + latex_label(lower) + "}";
    return s;
}

}  // namespace

std::string_view engine_version() { return JETGEOM_VERSION; }

std::string_view index_convention() {
    return "Components are keyed by 1-based index tuples in the order the indices appear in the family key: upper "
           "indices first, then lower, each left to right. Greek labels run over 1..p (temporal), Latin labels over "
           "1..n (spatial); a parenthesized upper and lower label pair marks a vertical (velocity) direction.";
}

std::string geometry_report_json(const ModelSpec& model, const Geometry& geo) {
    json families = json::object();
    for (const DTensor* t : geo.families()) families[t->key()] = components(*t);
    json reductions = json::object();
    for (const auto& r : geo.reductions()) reductions[r.name] = std::string(sym::to_string(r.result.tier));
    json j = {{"engine", {{"name", "jetgeom"}, {"version", engine_version()}}},
              {"index_convention", index_convention()},
              {"model", model_echo(model, geo)},
              {"families", families},
              {"reductions", reductions},
              {"zero_test", {{"probes", sym::ZeroTestOptions{}.probes},
                             {"seed", sym::ZeroTestOptions{}.seed},
                             {"tolerance", sym::ZeroTestOptions{}.tol}}}};
    return dump(j);
}

std::string verification_report_json(const VerificationReport& rep) {
    json checks = json::object();
    for (const auto& r : rep.checks) {
        json c = {{"tier", std::string(sym::to_string(r.tier))},
                  {"max_residual", r.max_residual},
                  {"seed", r.seed},
                  {"tolerance", r.tolerance}};
        if (!r.component.empty()) c["component"] = r.component;
        if (r.witness) c["witness"] = r.witness->values;
        checks[r.name] = c;
    }
    json j = {{"engine", {{"name", "jetgeom"}, {"version", engine_version()}}},
              {"probes", rep.probes},
              {"seed", rep.seed},
              {"zero_tolerance", rep.zero_tol},
              {"fd_tolerance", rep.fd_tol},
              {"passed", rep.passed()},
              {"failures", rep.failures().size()},
              {"checks", checks}};
    return dump(j);
}

std::string geometry_report_latex(const ModelSpec& model, const Geometry& geo) {
    std::string name;
    for (char ch : model.name) {
        if (ch == '_' || ch == '&' || ch == '%' || ch == '#' || ch == '$') name += '\\';
        name += ch;
    }
    std::ostringstream out;
    out << "\\documentclass{article}\n\\usepackage{amsmath}\n\\usepackage[margin=2cm]{geometry}\n"
        << "\\begin{document}\n\\section*{Geometry of model " << name << "}\n"
        << "$p = " << model.p() << "$, $n = " << model.n() << "$.\n";
    for (const DTensor* t : geo.families()) {
        out << "\\subsection*{$" << latex_symbol(t->key()) << "$}\n";
        if (t->is_symbolically_zero()) {
            out << "All components vanish.\n";
            continue;
        }
        out << "\\begin{align*}\n";
        t->for_each([&](const std::vector<int>& ix, const RatFunc& v) {
            if (v.is_zero()) return;
            out << "  (" << (ix.empty() ? std::string("\\cdot") : index_label(ix)) << ") &= "
                << sym::to_latex(sym::to_expr(v)) << " \\\\\n";
        });
        out << "\\end{align*}\n";
    }
    out << "\\end{document}\n";
    return out.str();
}

std::string canonical_json(std::string_view document) { return dump(json::parse(document)); }

}  // namespace jetgeom
