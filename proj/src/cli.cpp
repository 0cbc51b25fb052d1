#include "qnls/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qnls/criteria.hpp"
#include "qnls/diagnostics.hpp"
#include "qnls/scenarios.hpp"
#include "qnls/svg.hpp"

namespace qnls {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

void write_records_csv(const fs::path& path,
                       const std::vector<DiagnosticsRecord>& recs) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write_csv(f, recs);
}

void write_plots(const fs::path& dir, const std::vector<DiagnosticsRecord>& recs) {
    fs::create_directories(dir);
    std::vector<double> t, e, J, Pres, decay;
    for (const auto& r : recs) {
        t.push_back(r.t);
        e.push_back(r.energy);
        J.push_back(r.J);
        Pres.push_back(r.P_residual);
        decay.push_back(r.grad_h2 + r.abs_pot);
    }
    write_file(dir / "energy.svg", svg_line_plot("energy E(t)", {{"E", t, e}}));
    write_file(dir / "J.svg", svg_line_plot("variance J(t)", {{"J", t, J}}));
    write_file(dir / "P_residual.svg",
               svg_line_plot("pseudo-conformal residual", {{"P_res", t, Pres}}));
    write_file(dir / "decay.svg",
               svg_line_plot("grad_h^2 + |V||u|^2 (log-log)",
                             {{"decay", t, decay}}, true, true));
}

ClassificationReport report_for_run(const RunConfig& cfg,
                                    const RunOutcome& out) {
    const auto& r0 = out.records.front();
    InitialDiagnostics init{r0.energy, r0.J, r0.y, r0.mass2};
    return classify(cfg.problem.dim, cfg.problem.h, cfg.problem.V, {}, init);
}

std::string outcome_text(const RunOutcome& out) {
    std::ostringstream os;
    os << "status: " << to_string(out.status) << "\n";
    os << "t_final: " << out.t_final << "\n";
    os << "steps_accepted: " << out.steps_accepted << "\n";
    os << "records: " << out.records.size() << "\n";
    if (out.blowup_time_estimate)
        os << "blowup_time_estimate: " << *out.blowup_time_estimate << "\n";
    if (!out.detail.empty()) os << "detail: " << out.detail << "\n";
    return os.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool force) {
    RunConfig cfg;
    try {
        cfg = parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    const fs::path dir(out_dir);
    if (fs::exists(dir / "diagnostics.csv") && !force) {
        std::cerr << out_dir << " already holds results; pass --force to overwrite\n";
        return 2;
    }
    fs::create_directories(dir);

    RunOutcome out;
    try {
        out = run(cfg.problem, cfg.stepper);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    }
    write_records_csv(dir / "diagnostics.csv", out.records);
    write_plots(dir / "plots", out.records);

    std::ostringstream rep;
    rep << outcome_text(out) << "\n" << report_for_run(cfg, out).text();
    if (out.blowup_time_estimate) {
        const auto& r0 = out.records.front();
        if (r0.y > 0.0)
            rep << "\nTheorem 1 bound J(0)/(4 y(0)) = "
                << blowup_time_bound(r0.J, r0.y) << "\n";
    }
    write_file(dir / "report.txt", rep.str());
    std::cout << outcome_text(out);

    // a blowup verdict is a successful simulation; only numerical failures
    // report a nonzero status
    if (out.status == RunStatus::completed ||
        out.status == RunStatus::blowup_detected)
        return 0;
    std::cerr << "run ended with " << to_string(out.status) << ": " << out.detail
              << "\n";
    return 3;
}

bool parse_h_option(const std::string& text, NonlinearitySpec& h) {
    std::vector<HTerm> terms;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (part.empty()) continue;
        const auto colon = part.find(':');
        if (colon == std::string::npos) return false;
        try {
            HTerm t{std::stod(part.substr(0, colon)),
                    std::stod(part.substr(colon + 1))};
            terms.push_back(t);
        } catch (const std::exception&) {
            return false;
        }
    }
    try {
        h = NonlinearitySpec(terms);
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

bool parse_pot_option(const std::string& text, PotentialSpec& V) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() < 3 || parts.size() > 4) return false;
    try {
        const int sign = std::stoi(parts[0]);
        if (sign != 1 && sign != -1) return false;
        V.sign = sign;
        V.c = std::stod(parts[1]);
        V.m = std::stod(parts[2]);
        V.v_bounded = parts.size() == 4 ? std::stod(parts[3]) : 0.0;
        V.validate();
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

int cmd_classify(int dim, const std::string& h_text, const std::string& pot_text,
                 std::optional<double> q) {
    NonlinearitySpec h;
    PotentialSpec V;
    if (!parse_h_option(h_text, h)) {
        std::cerr << "invalid --h, expected \"b:alpha[,b:alpha]\"\n";
        return 2;
    }
    if (!parse_pot_option(pot_text, V)) {
        std::cerr << "invalid --pot, expected \"sign:c:m[:bounded]\"\n";
        return 2;
    }
    ClassificationReport rep;
    try {
        rep = classify(dim, h, V, q);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    std::cout << rep.text() << "\n" << rep.key_values();
    return 0;
}

int cmd_verify(const std::string& scenario, const std::string& out_dir) {
    if (!is_scenario(scenario)) {
        std::cerr << "unknown scenario '" << scenario << "'; known:";
        for (const auto& n : scenario_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return 2;
    }
    const ScenarioResult res = run_scenario(scenario);
    const fs::path dir =
        out_dir.empty() ? fs::path("verify-" + scenario) : fs::path(out_dir);
    fs::create_directories(dir);
    write_records_csv(dir / "diagnostics.csv", res.outcome.records);
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << " " << res.name << ": "
                  << c.name << (c.detail.empty() ? "" : " [" + c.detail + "]")
                  << "\n";
    return res.all_pass() ? 0 : 3;
}

void apply_axis(ProblemSpec& p, const std::string& name, double value) {
    if (name == "alpha") {
        const double b = p.h.is_zero() ? 1.0 : p.h.terms().front().b;
        p.h = NonlinearitySpec({{b, value}});
    } else if (name == "m") {
        p.V.m = value;
    } else if (name == "beta") {
        p.u0.chirp = value;
    } else if (name == "amplitude") {
        p.u0.amplitude = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + name + "'");
    }
}

} // namespace

SweepResult run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes,
                      int max_threads) {
    if (axes.empty() || axes.size() > 2)
        throw std::invalid_argument("sweep needs one or two axes");
    for (const auto& a : axes) {
        if (a.count < 1) throw std::invalid_argument("axis count must be >= 1");
        ProblemSpec probe = base.problem;
        apply_axis(probe, a.name, a.min); // validates the name
    }

    std::vector<std::vector<double>> values;
    for (const auto& a : axes) {
        std::vector<double> v;
        for (int i = 0; i < a.count; ++i)
            v.push_back(a.count == 1
                            ? a.min
                            : a.min + (a.max - a.min) * i / (a.count - 1));
        values.push_back(std::move(v));
    }

    std::vector<std::vector<double>> points;
    if (axes.size() == 1) {
        for (double v : values[0]) points.push_back({v});
    } else {
        for (double v0 : values[0])
            for (double v1 : values[1]) points.push_back({v0, v1});
    }

    SweepResult result;
    for (const auto& a : axes) result.param_names.push_back(a.name);
    result.rows.resize(points.size());

    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (max_threads > 0) threads = std::min(threads, max_threads);
    if (const char* env = std::getenv("QNLS_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) threads = std::min(threads, cap);
    }
    threads = std::min<int>(threads, static_cast<int>(points.size()));

    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= points.size()) return;
            RunConfig cfg = base;
            for (std::size_t k = 0; k < axes.size(); ++k)
                apply_axis(cfg.problem, axes[k].name, points[i][k]);
            SweepRow row;
            row.params = points[i];
            const RunOutcome out = run(cfg.problem, cfg.stepper);
            row.status = out.status;
            row.blowup_estimate = out.blowup_time_estimate;
            const auto& r0 = out.records.front();
            if (r0.y > 0.0) row.bound = blowup_time_bound(r0.J, r0.y);
            if (out.status == RunStatus::completed) {
                try {
                    const auto fit = fit_decay(
                        out.records,
                        [](const DiagnosticsRecord& r) {
                            return r.grad_h2 + r.abs_pot;
                        },
                        1.0);
                    row.fitted_l = fit.l;
                } catch (const std::exception&) {
                    // short or nonpositive series: no fit column
                }
            }
            result.rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return result;
}

namespace {

std::string sweep_csv(const SweepResult& res) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& n : res.param_names) os << n << ",";
    os << "status,fitted_l,blowup_estimate,bound\n";
    for (const auto& row : res.rows) {
        for (double p : row.params) os << p << ",";
        os << to_string(row.status) << ",";
        if (row.fitted_l) os << *row.fitted_l;
        else os << "nan";
        os << ",";
        if (row.blowup_estimate) os << *row.blowup_estimate;
        else os << "nan";
        os << ",";
        if (row.bound) os << *row.bound;
        else os << "nan";
        os << "\n";
    }
    return os.str();
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& axis_specs,
              const std::string& out_dir, bool force, int max_threads) {
    RunConfig base;
    try {
        base = parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    std::vector<SweepAxis> axes;
    for (const auto& text : axis_specs) {
        SweepAxis ax;
        std::stringstream ss(text);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, ':')) parts.push_back(part);
        if (parts.size() != 4) {
            std::cerr << "invalid --axis, expected NAME:MIN:MAX:COUNT\n";
            return 2;
        }
        try {
            ax.name = parts[0];
            ax.min = std::stod(parts[1]);
            ax.max = std::stod(parts[2]);
            ax.count = std::stoi(parts[3]);
        } catch (const std::exception&) {
            std::cerr << "invalid --axis numbers in '" << text << "'\n";
            return 2;
        }
        axes.push_back(ax);
    }

    const fs::path dir(out_dir);
    if (fs::exists(dir / "summary.csv") && !force) {
        std::cerr << out_dir << " already holds results; pass --force to overwrite\n";
        return 2;
    }
    fs::create_directories(dir);

    SweepResult res;
    try {
        res = run_sweep(base, axes, max_threads);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << "\n";
        return 3;
    }
    write_file(dir / "summary.csv", sweep_csv(res));

    const bool alpha_m =
        res.param_names.size() == 2 &&
        ((res.param_names[0] == "alpha" && res.param_names[1] == "m") ||
         (res.param_names[0] == "m" && res.param_names[1] == "alpha"));
    if (alpha_m) {
        std::vector<PhaseCell> cells;
        const bool flip = res.param_names[0] == "m";
        for (const auto& row : res.rows) {
            PhaseCell c;
            c.x = flip ? row.params[1] : row.params[0];
            c.y = flip ? row.params[0] : row.params[1];
            c.category = to_string(row.status);
            cells.push_back(c);
        }
        write_file(dir / "phase.svg",
                   svg_phase_diagram("global existence vs blowup", "alpha", "m",
                                     cells));
    }
    std::cout << "sweep finished: " << res.rows.size() << " runs\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"quasilinear Schrodinger laboratory"};
    app.set_help_flag("--help", "print usage");
    app.require_subcommand(1);

    std::string config_path, out_dir, scenario;
    bool force = false;
    int threads = 0;

    auto* sim = app.add_subcommand("simulate", "integrate one configuration");
    sim->add_option("--config", config_path, "config file")->required();
    sim->add_option("--out", out_dir, "output directory")->required();
    sim->add_flag("--force", force, "overwrite existing results");

    int dim = 3;
    std::string h_text, pot_text;
    double q_value = 0.0;
    auto* cls = app.add_subcommand("classify", "analytic criteria only");
    cls->add_option("--dim", dim, "dimension N >= 3")->required();
    auto* h_opt = cls->add_option("--h", h_text, "nonlinearity b:alpha[,b:alpha]");
    cls->add_option("--pot", pot_text, "potential sign:c:m[:bounded]")->required();
    auto* q_opt = cls->add_option("--q", q_value, "integrability exponent");
    (void)h_opt;

    auto* ver = app.add_subcommand("verify", "pinned verification scenario");
    ver->add_option("scenario", scenario, "scenario name")->required();
    ver->add_option("--out", out_dir, "output directory");

    std::vector<std::string> axis_specs;
    auto* swp = app.add_subcommand("sweep", "parameter sweep");
    swp->add_option("--config", config_path, "config file")->required();
    swp->add_option("--axis", axis_specs, "NAME:MIN:MAX:COUNT")->required();
    swp->add_option("--out", out_dir, "output directory")->required();
    swp->add_flag("--force", force, "overwrite existing results");
    swp->add_option("--threads", threads, "parallelism cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return 0;
        }
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_dir, force);
        if (cls->parsed())
            return cmd_classify(dim, h_text, pot_text,
                                q_opt->count() ? std::optional<double>(q_value)
                                               : std::nullopt);
        if (ver->parsed()) return cmd_verify(scenario, out_dir);
        if (swp->parsed())
            return cmd_sweep(config_path, axis_specs, out_dir, force, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

} // namespace qnls
