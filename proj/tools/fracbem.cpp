// Command-line harness: configure a run from a JSON file and/or flags,
// execute the pipeline (geometry -> boundary operators -> reduced fractional
// ODE -> spectral time solve -> field reconstruction), and write CSV/JSON
// artifacts. All numeric output uses 17 significant digits and carries no
// timestamps, so identical configs produce bitwise-identical files.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fracbem/metrics.hpp"
#include "fracbem/problems.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace fracbem;

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RunConfig {
    std::string example;
    double alpha = 0.5;
    int n = 40;
    int m = 100;
    int k = 12;
    std::optional<double> horizon;   // defaults to the example's horizon
    std::vector<double> t_eval;      // defaults to {horizon}
    std::optional<double> rbf_c;
    std::string out = "out";
    std::vector<std::string> derivs;  // extra field columns: x y xx xy yy
    bool dump_operators = false;
    // sweep / convergence
    std::string axis = "N";
    std::vector<int> values;
    std::vector<int> m_values;  // per-value interior targets (N sweeps)
    bool scale_m = false;       // M_i = round(M * N_i / N_0) on N sweeps
};

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument(msg);
}

void load_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        config_error("config parse error: " + std::string(e.what()));
    }
    const std::set<std::string> known = {
        "example", "alpha",  "N",    "M",        "K",
        "L",       "t",      "rbf_c", "out",     "derivs",
        "dump_operators",    "axis", "values",   "m_values",
        "scale_m"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            config_error("unknown config key: " + item.key());
    try {
        if (j.contains("example")) cfg.example = j["example"].get<std::string>();
        if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
        if (j.contains("N")) cfg.n = j["N"].get<int>();
        if (j.contains("M")) cfg.m = j["M"].get<int>();
        if (j.contains("K")) cfg.k = j["K"].get<int>();
        if (j.contains("L")) cfg.horizon = j["L"].get<double>();
        if (j.contains("t")) {
            if (j["t"].is_array())
                cfg.t_eval = j["t"].get<std::vector<double>>();
            else
                cfg.t_eval = {j["t"].get<double>()};
        }
        if (j.contains("rbf_c")) cfg.rbf_c = j["rbf_c"].get<double>();
        if (j.contains("out")) cfg.out = j["out"].get<std::string>();
        if (j.contains("derivs"))
            cfg.derivs = j["derivs"].get<std::vector<std::string>>();
        if (j.contains("dump_operators"))
            cfg.dump_operators = j["dump_operators"].get<bool>();
        if (j.contains("axis")) cfg.axis = j["axis"].get<std::string>();
        if (j.contains("values"))
            cfg.values = j["values"].get<std::vector<int>>();
        if (j.contains("m_values"))
            cfg.m_values = j["m_values"].get<std::vector<int>>();
        if (j.contains("scale_m")) cfg.scale_m = j["scale_m"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        config_error("config value error: " + std::string(e.what()));
    }
}

Deriv parse_deriv(const std::string& s) {
    static const std::map<std::string, Deriv> table = {
        {"x", Deriv::x},   {"y", Deriv::y},   {"xx", Deriv::xx},
        {"xy", Deriv::xy}, {"yy", Deriv::yy}};
    const auto it = table.find(s);
    if (it == table.end())
        config_error("unknown derivative selector: " + s +
                     " (expected one of x y xx xy yy)");
    return it->second;
}

// Shared post-parse validation; fills horizon/t_eval defaults.
ExampleProblem prepare(RunConfig& cfg) {
    if (cfg.example.empty()) config_error("an example id is required");
    ExampleProblem ex = make_example(cfg.example, cfg.alpha);
    if (cfg.n < 8) config_error("N >= 8 required");
    if (cfg.m < 4) config_error("M >= 4 required");
    if (!cfg.horizon) cfg.horizon = ex.default_horizon;
    if (*cfg.horizon <= 0.0) config_error("L > 0 required");
    if (cfg.t_eval.empty()) cfg.t_eval = {*cfg.horizon};
    for (double t : cfg.t_eval)
        if (t < 0.0 || t > *cfg.horizon)
            config_error("evaluation time " + fmt17(t) +
                         " outside [0, L] with L = " + fmt17(*cfg.horizon));
    for (const auto& d : cfg.derivs) parse_deriv(d);
    return ex;
}

ordered_json config_json(const RunConfig& cfg, const ExampleProblem& ex,
                         const SolveResult* res) {
    ordered_json j;
    j["example"] = cfg.example;
    j["alpha"] = ex.pde.terms.back().alpha;
    j["N"] = cfg.n;
    j["M_target"] = cfg.m;
    if (res) j["M_actual"] = res->interior.size();
    j["K"] = cfg.k;
    j["L"] = *cfg.horizon;
    j["t"] = cfg.t_eval;
    if (res)
        j["rbf_c"] = res->rbf_c;
    else if (cfg.rbf_c)
        j["rbf_c"] = *cfg.rbf_c;
    j["derivs"] = cfg.derivs;
    return j;
}

ordered_json error_json(const ErrorReport& rep) {
    ordered_json j;
    j["l_inf"] = rep.l_inf;
    j["mre"] = rep.mre;
    j["rms"] = rep.rms;
    j["samples"] = rep.samples;
    j["mre_skipped"] = rep.mre_skipped;
    return j;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m) {
    std::string text;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) text += ',';
            text += fmt17(m(i, j));
        }
        text += '\n';
    }
    write_text(path, text);
}

void write_mesh_csv(const fs::path& path, const BoundaryMesh& mesh) {
    std::string text = "ax,ay,bx,by,node_x,node_y,normal_x,normal_y,length\n";
    for (int i = 0; i < mesh.size(); ++i) {
        text += fmt17(mesh.a(i, 0)) + ',' + fmt17(mesh.a(i, 1)) + ',' +
                fmt17(mesh.b(i, 0)) + ',' + fmt17(mesh.b(i, 1)) + ',' +
                fmt17(mesh.node(i, 0)) + ',' + fmt17(mesh.node(i, 1)) + ',' +
                fmt17(mesh.normal(i, 0)) + ',' + fmt17(mesh.normal(i, 1)) +
                ',' + fmt17(mesh.length[i]) + '\n';
    }
    write_text(path, text);
}

// Quantities tabulated in fields.csv / errors.json: the solution itself plus
// any requested derivatives.
std::vector<std::pair<std::string, Deriv>> quantities(const RunConfig& cfg) {
    std::vector<std::pair<std::string, Deriv>> q = {{"u", Deriv::u}};
    for (const auto& d : cfg.derivs) q.emplace_back("u" + d, parse_deriv(d));
    return q;
}

int cmd_solve(RunConfig cfg) {
    const ExampleProblem ex = prepare(cfg);
    SolveConfig sc;
    sc.N = cfg.n;
    sc.M = cfg.m;
    sc.K = cfg.k;
    sc.L = *cfg.horizon;
    sc.rbf_c = cfg.rbf_c;
    const SolveResult res = solve_example(ex, sc);

    const auto quant = quantities(cfg);
    // one approx (and, if available, exact) column per quantity per time
    std::vector<Eigen::VectorXd> app, exact;
    for (size_t ti = 0; ti < cfg.t_eval.size(); ++ti)
        for (const auto& [name, d] : quant) {
            app.push_back(res.field(cfg.t_eval[ti], d));
            if (ex.has_exact)
                exact.push_back(
                    exact_field(ex, res.interior, cfg.t_eval[ti], d));
        }

    const fs::path out(cfg.out);
    fs::create_directories(out);

    std::string header = "x,y";
    for (size_t ti = 0; ti < cfg.t_eval.size(); ++ti)
        for (const auto& [name, d] : quant) {
            header += ',' + name + "_app_t" + std::to_string(ti);
            if (ex.has_exact) header += ',' + name + "_ex_t" + std::to_string(ti);
        }
    std::string text = header + '\n';
    for (int p = 0; p < res.interior.size(); ++p) {
        text += fmt17(res.interior.points(p, 0)) + ',' +
                fmt17(res.interior.points(p, 1));
        for (size_t col = 0; col < app.size(); ++col) {
            text += ',' + fmt17(app[col][p]);
            if (ex.has_exact) text += ',' + fmt17(exact[col][p]);
        }
        text += '\n';
    }
    write_text(out / "fields.csv", text);
    write_mesh_csv(out / "mesh.csv", res.mesh);

    ordered_json report;
    report["command"] = "solve";
    report["config"] = config_json(cfg, ex, &res);
    report["conditions"] = {{"boundary_system", res.g_condition},
                            {"value_map", res.system.u00_condition}};
    report["near_boundary_points"] = res.near_boundary_points;
    report["deviations"] = ex.deviations;
    if (ex.has_exact) {
        ordered_json errs = ordered_json::array();
        size_t col = 0;
        for (size_t ti = 0; ti < cfg.t_eval.size(); ++ti) {
            ordered_json entry;
            entry["t"] = cfg.t_eval[ti];
            for (const auto& [name, d] : quant)
                entry[name] = error_json(error_norms(exact[col], app[col])),
                ++col;
            errs.push_back(entry);
        }
        report["errors"] = errs;
    } else {
        report["errors"] = nullptr;
        report["note"] = "no exact solution for this configuration";
    }
    write_text(out / "errors.json", report.dump(2) + "\n");

    if (cfg.dump_operators) {
        const fs::path ops = out / "operators";
        fs::create_directories(ops);
        write_matrix_csv(ops / "reaction.csv", res.system.Nmat);
        for (size_t j = 0; j < res.system.S.size(); ++j)
            write_matrix_csv(ops / ("mass_" + std::to_string(j) + ".csv"),
                             res.system.S[j]);
        write_matrix_csv(ops / "forcing_coeffs.csv", res.system.f_coeffs);
        write_matrix_csv(ops / "solution_coeffs.csv", res.solution.Psi);
        for (size_t i = 0; i < res.system.b_init.size(); ++i)
            write_matrix_csv(ops / ("initial_" + std::to_string(i) + ".csv"),
                             res.system.b_init[i]);
    }
    return 0;
}

SolveResult run_one(const ExampleProblem& ex, const RunConfig& cfg, int n,
                    int m, int k) {
    SolveConfig sc;
    sc.N = n;
    sc.M = m;
    sc.K = k;
    sc.L = *cfg.horizon;
    sc.rbf_c = cfg.rbf_c;
    return solve_example(ex, sc);
}

void require_geometric(const std::vector<int>& k) {
    for (size_t i = 0; i + 1 < k.size(); ++i)
        if (k[i + 1] <= k[i])
            config_error("sweep values must be strictly increasing");
    if (k.size() >= 3) {
        const int ratio = k[1] / k[0];
        for (size_t i = 0; i + 1 < k.size(); ++i)
            if (k[i + 1] % k[i] != 0 || k[i + 1] / k[i] != ratio)
                config_error(
                    "K values must form a geometric progression for order "
                    "estimation");
    }
}

int cmd_sweep(RunConfig cfg) {
    const ExampleProblem ex = prepare(cfg);
    if (!ex.has_exact)
        config_error("sweep requires a configuration with an exact solution");
    if (cfg.axis != "N" && cfg.axis != "K")
        config_error("axis must be N or K");
    if (cfg.values.empty()) config_error("sweep needs at least one value");
    for (size_t i = 0; i + 1 < cfg.values.size(); ++i)
        if (cfg.values[i + 1] <= cfg.values[i])
            config_error("sweep values must be strictly increasing");
    if (!cfg.m_values.empty() && cfg.m_values.size() != cfg.values.size())
        config_error("m_values must match values in length");
    if (cfg.axis == "K") {
        if (!cfg.m_values.empty() || cfg.scale_m)
            config_error("per-value interior targets apply to N sweeps only");
        require_geometric(cfg.values);
    }
    const double t = cfg.t_eval.front();
    const bool orders = cfg.values.size() >= 2;

    struct Row {
        int value = 0;
        int m_actual = 0;
        ErrorReport rep;
        double b_diff = 0.0;   // K axis
        double order = 0.0;    // p_zeta or p_tau
        bool has_diff = false;
        bool has_order = false;
    };
    std::vector<Row> rows;
    std::vector<Eigen::VectorXd> b_hist;
    std::vector<double> rms_hist;

    for (size_t i = 0; i < cfg.values.size(); ++i) {
        const int v = cfg.values[i];
        int n = cfg.n, m = cfg.m, k = cfg.k;
        if (cfg.axis == "N") {
            n = v;
            if (!cfg.m_values.empty())
                m = cfg.m_values[i];
            else if (cfg.scale_m)
                m = static_cast<int>(std::lround(
                    static_cast<double>(cfg.m) * v / cfg.values.front()));
        } else {
            k = v;
        }
        const SolveResult res = run_one(ex, cfg, n, m, k);
        Row row;
        row.value = v;
        row.m_actual = res.interior.size();
        row.rep = error_norms(exact_field(ex, res.interior, t, Deriv::u),
                              res.field(t, Deriv::u));
        if (cfg.axis == "K") {
            const Eigen::VectorXd b = res.solution.eval_b(t);
            if (!b_hist.empty()) {
                row.b_diff = (b - b_hist.back()).norm() /
                             std::sqrt(static_cast<double>(b.size()));
                row.has_diff = true;
            }
            b_hist.push_back(b);
            if (orders && i >= 2) {
                const PTauReport pt = p_tau_order(
                    b_hist[i - 2], b_hist[i - 1], b_hist[i],
                    cfg.values[i - 2], cfg.values[i - 1], cfg.values[i]);
                row.order = pt.order;
                row.has_order = true;
            }
        } else if (orders && i >= 1) {
            row.order = p_zeta_order(rms_hist.back(), row.rep.rms,
                                     cfg.values[i - 1], v);
            row.has_order = true;
        }
        rms_hist.push_back(row.rep.rms);
        rows.push_back(row);
    }

    const fs::path out(cfg.out);
    fs::create_directories(out);
    std::string text = cfg.axis == "N" ? "N" : "K";
    text += ",M,l_inf,mre,rms";
    if (cfg.axis == "K" && orders) text += ",b_diff";
    if (orders) text += cfg.axis == "N" ? ",p_zeta" : ",p_tau";
    text += '\n';
    for (const Row& row : rows) {
        text += std::to_string(row.value) + ',' + std::to_string(row.m_actual) +
                ',' + fmt17(row.rep.l_inf) + ',' + fmt17(row.rep.mre) + ',' +
                fmt17(row.rep.rms);
        if (cfg.axis == "K" && orders)
            text += ',' + (row.has_diff ? fmt17(row.b_diff) : std::string());
        if (orders)
            text += ',' + (row.has_order ? fmt17(row.order) : std::string());
        text += '\n';
    }
    write_text(out / "sweep.csv", text);

    ordered_json report;
    report["command"] = "sweep";
    report["axis"] = cfg.axis;
    report["values"] = cfg.values;
    report["t"] = t;
    report["config"] = config_json(cfg, ex, nullptr);
    ordered_json actual_m = ordered_json::array();
    for (const Row& row : rows) actual_m.push_back(row.m_actual);
    report["M_actual"] = actual_m;
    report["scale_m"] = cfg.scale_m;
    report["deviations"] = ex.deviations;
    write_text(out / "metadata.json", report.dump(2) + "\n");
    return 0;
}

int cmd_convergence(RunConfig cfg) {
    const ExampleProblem ex = prepare(cfg);
    if (cfg.values.size() != 3)
        config_error("convergence needs exactly three K values");
    const std::vector<int> k = cfg.values;
    if (!(k[0] < k[1] && k[1] < k[2]))
        config_error("convergence needs three distinct increasing K values");
    if (k[1] % k[0] != 0 || k[2] % k[1] != 0 || k[1] / k[0] != k[2] / k[1])
        config_error("K values must form a geometric progression");
    const double t = cfg.t_eval.front();

    std::vector<Eigen::VectorXd> b;
    std::vector<double> rms;
    std::vector<int> m_actual;
    for (int ki : k) {
        const SolveResult res = run_one(ex, cfg, cfg.n, cfg.m, ki);
        b.push_back(res.solution.eval_b(t));
        m_actual.push_back(res.interior.size());
        if (ex.has_exact)
            rms.push_back(
                error_norms(exact_field(ex, res.interior, t, Deriv::u),
                            res.field(t, Deriv::u))
                    .rms);
    }
    const PTauReport pt = p_tau_order(b[0], b[1], b[2], k[0], k[1], k[2]);

    const fs::path out(cfg.out);
    fs::create_directories(out);
    std::string text = "K";
    if (ex.has_exact) text += ",rms";
    text += ",b_diff,p_tau\n";
    for (int i = 0; i < 3; ++i) {
        text += std::to_string(k[i]);
        if (ex.has_exact) text += ',' + fmt17(rms[i]);
        text += ',';
        if (i == 1) text += fmt17(pt.diff21);
        if (i == 2) text += fmt17(pt.diff32);
        text += ',';
        if (i == 2) text += fmt17(pt.order);
        text += '\n';
    }
    write_text(out / "convergence.csv", text);

    ordered_json report;
    report["command"] = "convergence";
    report["K"] = k;
    report["t"] = t;
    report["config"] = config_json(cfg, ex, nullptr);
    report["M_actual"] = m_actual;
    report["geometry_shared"] = true;
    report["b_diff"] = {pt.diff21, pt.diff32};
    report["p_tau"] = pt.order;
    report["deviations"] = ex.deviations;
    write_text(out / "metadata.json", report.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "fracbem: boundary-element / spectral-time solver for "
        "two-dimensional multi-order time-fractional PDEs"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    // flag values land here first; only flags the user passed override the
    // config file
    std::string f_example, f_axis, f_out;
    double f_alpha = 0.0, f_horizon = 0.0, f_rbf_c = 0.0;
    int f_n = 0, f_m = 0, f_k = 0;
    std::vector<double> f_t;
    std::vector<int> f_values, f_m_values;
    std::vector<std::string> f_derivs;
    bool f_dump = false, f_scale_m = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--example", f_example, "catalog id (ex1a ... ex5)");
        sub->add_option("--alpha", f_alpha, "fractional order");
        sub->add_option("--N", f_n, "boundary elements");
        sub->add_option("--M", f_m, "target interior nodes");
        sub->add_option("--K", f_k, "Chebyshev degree");
        sub->add_option("--L", f_horizon, "time horizon");
        sub->add_option("--t", f_t, "evaluation times");
        sub->add_option("--rbf-c", f_rbf_c, "multiquadric shape parameter");
        sub->add_option("--out", f_out, "output directory");
    };

    CLI::App* solve = app.add_subcommand("solve", "single run with field dumps");
    add_common(solve);
    solve->add_option("--derivs", f_derivs,
                      "derivative fields to tabulate (x y xx xy yy)");
    solve->add_flag("--dump-operators", f_dump,
                    "write the reduced-system operators as CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "error table over N or K");
    add_common(sweep);
    sweep->add_option("--axis", f_axis, "sweep axis: N or K");
    sweep->add_option("--values", f_values, "axis values");
    sweep->add_option("--m-values", f_m_values,
                      "interior-node targets per value (N sweeps)");
    sweep->add_flag("--scale-m", f_scale_m,
                    "scale M proportionally to N (N sweeps)");

    CLI::App* conv =
        app.add_subcommand("convergence", "degree-refinement order report");
    add_common(conv);
    conv->add_option("--values", f_values, "three K values, geometric");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!config_path.empty()) load_config_file(config_path, cfg);
        CLI::App* sub = app.get_subcommands().front();
        auto passed = [&](const std::string& name) {
            return sub->count(name) > 0;
        };
        if (passed("--example")) cfg.example = f_example;
        if (passed("--alpha")) cfg.alpha = f_alpha;
        if (passed("--N")) cfg.n = f_n;
        if (passed("--M")) cfg.m = f_m;
        if (passed("--K")) cfg.k = f_k;
        if (passed("--L")) cfg.horizon = f_horizon;
        if (passed("--t")) cfg.t_eval = f_t;
        if (passed("--rbf-c")) cfg.rbf_c = f_rbf_c;
        if (passed("--out")) cfg.out = f_out;
        if (sub == solve) {
            if (passed("--derivs")) cfg.derivs = f_derivs;
            if (f_dump) cfg.dump_operators = true;
            return cmd_solve(cfg);
        }
        if (sub == sweep) {
            if (passed("--axis")) cfg.axis = f_axis;
            if (passed("--values")) cfg.values = f_values;
            if (passed("--m-values")) cfg.m_values = f_m_values;
            if (f_scale_m) cfg.scale_m = true;
            return cmd_sweep(cfg);
        }
        if (passed("--values")) cfg.values = f_values;
        return cmd_convergence(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
