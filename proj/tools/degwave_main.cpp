// Command-line driver: derive | speeds | profile | shoot | simulate | atlas.
// Exit codes: 0 success, 2 usage error, 3 model validation failure,
// 4 numerical failure (JSON diagnostic on stderr).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "degwave/atlas.hpp"
#include "degwave/charspec.hpp"
#include "degwave/json_writer.hpp"
#include "degwave/model_io.hpp"
#include "degwave/pdesim.hpp"
#include "degwave/profile.hpp"
#include "degwave/shooting.hpp"
#include "degwave/svg.hpp"

using namespace degwave;
namespace jw = degwave::jsonw;

namespace {

constexpr int kSchemaVersion = 1;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParamError("cannot open output file '" + out_path + "'");
    out << text;
}

std::string fmt12(double v) { return jw::format_number(v); }

jw::Value opt_number(std::optional<double> v) {
    return v ? jw::Value::number(*v) : jw::Value();
}

KineticsSpec load_model_checked(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw CLI::ValidationError("model", "model file '" + path + "' does not exist");
    return load_model_file(path);
}

jw::Value derived_to_json(const DerivedConstants& dc) {
    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    o.set("kappa", jw::Value::number(dc.kappa));
    o.set("s_M", jw::Value::number(dc.s_M));
    o.set("M", jw::Value::number(dc.M));
    o.set("zeta2", jw::Value::number(dc.zeta2));
    o.set("theta", jw::Value::number(dc.theta));
    o.set("zeta1", jw::Value::number(dc.zeta1));
    o.set("bp0", jw::Value::number(dc.bp0));
    o.set("dp0", jw::Value::number(dc.dp0));
    o.set("bpk", jw::Value::number(dc.bpk));
    o.set("dpk", jw::Value::number(dc.dpk));
    o.set("monotone_birth", jw::Value::boolean(dc.monotone_birth));
    o.set("unimodal", jw::Value::boolean(dc.unimodal));
    o.set("feedback", jw::Value::boolean(dc.feedback));
    o.set("feedback_alt", jw::Value::boolean(dc.feedback_alt));
    return o;
}

jw::Value tail_to_json(const TailReport& tr) {
    jw::Value o = jw::Value::object();
    o.set("classification", jw::Value::string(tail_class_name(tr.classification)));
    o.set("windows", jw::Value::integer(tr.windows));
    o.set("sign_changes_total", jw::Value::integer(tr.sign_changes_total));
    jw::Value wm = jw::Value::array();
    for (double v : tr.window_max) wm.push_back(jw::Value::number(v));
    o.set("window_max", std::move(wm));
    o.set("envelope_ratio", jw::Value::number(tr.envelope_ratio));
    o.set("tail_min", jw::Value::number(tr.tail_min));
    o.set("tail_max", jw::Value::number(tr.tail_max));
    return o;
}

jw::Value outcome_to_json(const TrajectoryOutcome& out) {
    jw::Value o = jw::Value::object();
    o.set("variant", jw::Value::string(outcome_name(out)));
    if (const auto* d = std::get_if<DecayedToZero>(&out))
        o.set("t_death", jw::Value::number(d->t_death));
    if (const auto* b = std::get_if<Blowup>(&out))
        o.set("t_escape", jw::Value::number(b->t_escape));
    if (const auto* p = std::get_if<Persistent>(&out)) {
        o.set("tail", tail_to_json(p->tail));
        if (p->profile.edge) {
            const EdgeAsymptotics& e = *p->profile.edge;
            jw::Value ej = jw::Value::object();
            ej.set("exponent_theory", jw::Value::number(e.exponent_theory));
            ej.set("coeff_theory", jw::Value::number(e.coeff_theory));
            ej.set("exponent_fit", jw::Value::number(e.exponent_fit));
            ej.set("coeff_fit", jw::Value::number(e.coeff_fit));
            ej.set("fit_residual", jw::Value::number(e.fit_residual));
            o.set("edge", std::move(ej));
        }
    }
    return o;
}

int run_derive(const std::string& model_path, const std::string& out_path) {
    KineticsSpec spec = load_model_checked(model_path);
    DerivedConstants dc = derive_constants(spec);
    emit(derived_to_json(dc).dump(), out_path);
    return 0;
}

int run_speeds(const std::string& model_path, const std::string& out_path,
               const std::string& csv_path, double c_lo, double c_hi, int c_n) {
    KineticsSpec spec = load_model_checked(model_path);
    CharContext ctx = make_char_context(spec);
    SpeedThresholds th = compute_thresholds(ctx);

    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    o.set("c_kappa", jw::Value::number(th.c_kappa));
    o.set("c_star", jw::Value::number(th.c_star));
    o.set("mu_kappa", opt_number(th.mu_kappa));
    o.set("mu_star", opt_number(th.mu_star));
    o.set("omega_kappa", opt_number(th.omega_kappa));
    o.set("cdot", jw::Value::number(th.cdot));
    o.set("mu0", jw::Value::number(th.mu0));
    emit(o.dump(), out_path);

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "c,negative_real_roots\n";
        for (int i = 0; i < c_n; ++i) {
            double c = c_lo + (c_hi - c_lo) * i / std::max(c_n - 1, 1);
            csv << fmt12(c) << "," << count_chik_negative_roots(ctx, c) << "\n";
        }
        emit(csv.str(), csv_path);
    }
    return 0;
}

int run_profile(const std::string& model_path, double c, const std::string& start,
                double amplitude, double horizon, double sample_dt,
                const std::string& out_path, const std::string& csv_path,
                const std::string& svg_path) {
    KineticsSpec spec = load_model_checked(model_path);
    CharContext ctx = make_char_context(spec);
    StartMode mode;
    if (start == "sharp") {
        mode = SharpStart{};
    } else if (start == "smooth") {
        double amp = amplitude > 0.0 ? amplitude : ctx.consts.zeta1 / 20.0;
        mode = SmoothTailStart{amp};
    } else {
        throw CLI::ValidationError("start", "start must be 'sharp' or 'smooth'");
    }
    if (horizon <= 0.0) horizon = 40.0 * std::max(c * spec.delay, 1.0);
    auto [outcome, prof] = integrate_full(ctx, c, mode, horizon);

    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    o.set("c", jw::Value::number(c));
    o.set("start", jw::Value::string(start));
    o.set("horizon", jw::Value::number(horizon));
    o.set("outcome", outcome_to_json(outcome));
    emit(o.dump(), out_path);

    if (!csv_path.empty()) {
        if (sample_dt <= 0.0) sample_dt = horizon / 2000.0;
        std::ostringstream csv;
        csv << "t,phi,psi\n";
        double t_end = prof.t_end();
        for (double t = 0.0; t <= t_end + 1e-12; t += sample_dt)
            csv << fmt12(t) << "," << fmt12(prof.phi(t)) << "," << fmt12(prof.psi(t))
                << "\n";
        emit(csv.str(), csv_path);
    }
    if (!svg_path.empty()) {
        SvgChart chart;
        chart.title = "wave profile, c = " + fmt12(c);
        chart.x_label = "t";
        chart.y_label = "phi";
        SvgCurve curve;
        double t_end = prof.t_end();
        for (int i = 0; i <= 1500; ++i) {
            double t = t_end * i / 1500;
            curve.x.push_back(t);
            curve.y.push_back(prof.phi(t));
        }
        curve.label = "phi(t)";
        chart.curves.push_back(std::move(curve));
        chart.hlines.push_back(ctx.consts.kappa);
        emit(chart.render(), svg_path);
    }
    return 0;
}

int run_shoot(const std::string& model_path, double tol, const std::string& out_path,
              const std::string& csv_path) {
    KineticsSpec spec = load_model_checked(model_path);
    CharContext ctx = make_char_context(spec);
    ShootingResult sr = find_sharp_speed(ctx, tol);

    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    o.set("c0", jw::Value::number(sr.c0));
    o.set("bracket_width", jw::Value::number(sr.bracket_width));
    o.set("iterations", jw::Value::integer(sr.iterations));
    o.set("guard_lo", jw::Value::number(sr.guard_lo));
    o.set("guard_hi", jw::Value::number(sr.guard_hi));
    o.set("outcome_at_c0", outcome_to_json(sr.outcome_at_c0));
    o.set("monotone_predicate", jw::Value::boolean(sr.monotone_predicate));
    o.set("uniqueness_conjectural", jw::Value::boolean(sr.uniqueness_conjectural));
    jw::Value sb = jw::Value::array();
    for (auto [a, b] : sr.sign_change_brackets) {
        jw::Value pair = jw::Value::array();
        pair.push_back(jw::Value::number(a));
        pair.push_back(jw::Value::number(b));
        sb.push_back(std::move(pair));
    }
    o.set("sign_change_brackets", std::move(sb));
    emit(o.dump(), out_path);

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "c,horizon,outcome\n";
        for (const auto& p : sr.probes)
            csv << fmt12(p.c) << "," << fmt12(p.horizon) << "," << p.outcome << "\n";
        emit(csv.str(), csv_path);
    }
    return 0;
}

int run_simulate(const std::string& model_path, double x_lo, double x_hi, int cells,
                 double T, const std::string& init_kind, double height, double width,
                 const std::string& snapshot_list, double x_probe, bool use_probe,
                 const std::string& out_path, const std::string& csv_front,
                 const std::string& csv_snaps) {
    KineticsSpec spec = load_model_checked(model_path);
    CharContext ctx = make_char_context(spec);
    Grid1D grid{x_lo, x_hi, cells};

    SimOptions opts;
    if (use_probe) opts.x_probe = x_probe;
    if (!snapshot_list.empty()) {
        std::stringstream ss(snapshot_list);
        std::string item;
        while (std::getline(ss, item, ','))
            opts.snapshot_times.push_back(std::stod(item));
    }

    SimInit init;
    WaveProfile prof;
    if (init_kind == "bump") {
        init = CompactBump{height, width, 0.0};
    } else if (init_kind == "transplant") {
        ShootingResult sr = find_sharp_speed(ctx, 1e-3);
        if (const auto* p = std::get_if<Persistent>(&sr.outcome_at_c0))
            prof = p->profile;
        else
            throw NumericalError("simulate: no persistent profile at c0 to transplant");
        init = ProfileTransplant{&prof, 0.25 * x_lo + 0.75 * x_hi > 0 ? 0.0 : 0.0};
    } else {
        throw CLI::ValidationError("init", "init must be 'bump' or 'transplant'");
    }

    FrontTrace trace = run_simulation(ctx, grid, init, T, opts);

    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    o.set("measured_speed", jw::Value::number(trace.measured_speed));
    o.set("clipped_mass", jw::Value::number(trace.clipped_mass));
    o.set("truncated", jw::Value::boolean(trace.truncated));
    if (use_probe)
        o.set("oscillation", tail_to_json(detect_oscillation(ctx, trace, x_probe, T)));
    emit(o.dump(), out_path);

    if (!csv_front.empty()) {
        std::ostringstream csv;
        csv << "t,x_left,x_right\n";
        for (std::size_t i = 0; i < trace.times.size(); ++i)
            csv << fmt12(trace.times[i]) << "," << fmt12(trace.x_left[i]) << ","
                << fmt12(trace.x_right[i]) << "\n";
        emit(csv.str(), csv_front);
    }
    if (!csv_snaps.empty()) {
        std::ostringstream csv;
        csv << "t,x,u\n";
        for (const auto& snap : trace.snapshots)
            for (int i = 0; i < grid.n_cells; ++i)
                csv << fmt12(snap.t) << "," << fmt12(grid.x_center(i)) << ","
                    << fmt12(snap.u[i]) << "\n";
        emit(csv.str(), csv_snaps);
    }
    return 0;
}

int run_atlas(const std::string& model_path, const std::string& r_list,
              const std::string& out_path, const std::string& csv_path,
              const std::string& svg_path, double shoot_tol) {
    KineticsSpec spec = load_model_checked(model_path);
    std::vector<double> rs;
    {
        std::stringstream ss(r_list);
        std::string item;
        while (std::getline(ss, item, ',')) rs.push_back(std::stod(item));
    }
    if (rs.empty()) throw CLI::ValidationError("r", "need at least one r value");

    AtlasOptions opts;
    opts.shoot_tol = shoot_tol;
    std::vector<AtlasRow> rows = sweep(spec, rs, opts);
    Intersections is = find_intersections(rows);

    jw::Value o = jw::Value::object();
    o.set("schema_version", jw::Value::integer(kSchemaVersion));
    jw::Value rk = jw::Value::array(), rst = jw::Value::array();
    for (double v : is.r_kappa) rk.push_back(jw::Value::number(v));
    for (double v : is.r_star) rst.push_back(jw::Value::number(v));
    o.set("r_kappa", std::move(rk));
    o.set("r_star", std::move(rst));
    jw::Value arr = jw::Value::array();
    for (const AtlasRow& row : rows) {
        jw::Value rj = jw::Value::object();
        rj.set("r", jw::Value::number(row.r));
        rj.set("cdot", jw::Value::number(row.cdot));
        rj.set("c0", jw::Value::number(row.c0));
        rj.set("c_kappa", jw::Value::number(row.c_kappa));
        rj.set("c_star", jw::Value::number(row.c_star));
        rj.set("c_hat_emp", opt_number(row.c_hat_emp));
        rj.set("wave_type", jw::Value::string(row.wave_type));
        rj.set("error", jw::Value::string(row.error));
        arr.push_back(std::move(rj));
    }
    o.set("rows", std::move(arr));
    emit(o.dump(), out_path);

    if (!csv_path.empty()) {
        std::ostringstream csv;
        csv << "r,cdot,c0,c_kappa,c_star,c_hat_emp,wave_type,error\n";
        auto ext = [](double v) {
            return std::isinf(v) ? std::string("inf") : fmt12(v);
        };
        for (const AtlasRow& row : rows) {
            csv << fmt12(row.r) << "," << fmt12(row.cdot) << "," << fmt12(row.c0) << ","
                << ext(row.c_kappa) << "," << ext(row.c_star) << ","
                << (row.c_hat_emp ? fmt12(*row.c_hat_emp) : std::string("")) << ","
                << row.wave_type << "," << row.error << "\n";
        }
        emit(csv.str(), csv_path);
    }
    if (!svg_path.empty()) {
        SvgChart chart;
        chart.title = "speed thresholds vs delay";
        chart.x_label = "r";
        chart.y_label = "c";
        auto add_curve = [&](const char* name, auto getter, const char* dash,
                             const char* color) {
            SvgCurve cur;
            cur.label = name;
            cur.dash = dash;
            cur.stroke = color;
            for (const AtlasRow& row : rows) {
                double v = getter(row);
                if (std::isfinite(v)) {
                    cur.x.push_back(row.r);
                    cur.y.push_back(v);
                }
            }
            chart.curves.push_back(std::move(cur));
        };
        add_curve("c0", [](const AtlasRow& r) { return r.c0; }, "", "#c03030");
        add_curve("cdot", [](const AtlasRow& r) { return r.cdot; }, "2,3", "#777777");
        add_curve("c_kappa", [](const AtlasRow& r) { return r.c_kappa; }, "6,4", "#1f4e9c");
        add_curve("c_star", [](const AtlasRow& r) { return r.c_star; }, "2,4", "#1f9c4e");
        add_curve("c_hat_emp",
                  [](const AtlasRow& r) {
                      return r.c_hat_emp ? *r.c_hat_emp
                                         : std::numeric_limits<double>::quiet_NaN();
                  },
                  "8,3", "#9c6f1f");
        emit(chart.render(), svg_path);
    }
    return 0;
}

void print_json_diag(const char* kind, const std::exception& e) {
    jw::Value o = jw::Value::object();
    o.set("error", jw::Value::string(kind));
    o.set("message", jw::Value::string(e.what()));
    std::cerr << o.dump();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"traveling-wave toolkit for the delayed degenerate "
                 "reaction-diffusion equation u_t = D(u^m)_xx - d(u) + b(u(t-r))"};
    app.require_subcommand(1);

    std::string model, out, csv, csv2, svg, start = "sharp", init = "bump", snaps, rlist;
    double c = 1.0, amplitude = 0.0, horizon = 0.0, sample_dt = 0.0, tol = 1e-4;
    double x_lo = -20.0, x_hi = 60.0, T = 30.0, height = 1.0, width = 4.0;
    double x_probe = 0.0, c_lo = 0.1, c_hi = 5.0, shoot_tol = 1e-3;
    int cells = 1000, c_n = 50;
    bool use_probe = false;

    auto* d = app.add_subcommand("derive", "derived constants of the model as JSON");
    d->add_option("--model", model, "model definition file")->required();
    d->add_option("--out", out, "output path (default stdout)");

    auto* s = app.add_subcommand("speeds", "characteristic speed thresholds as JSON");
    s->add_option("--model", model)->required();
    s->add_option("--out", out);
    s->add_option("--roots-csv", csv, "CSV of chi_kappa real-root counts over a c grid");
    s->add_option("--c-lo", c_lo, "grid start")->check(CLI::PositiveNumber);
    s->add_option("--c-hi", c_hi, "grid end")->check(CLI::PositiveNumber);
    s->add_option("--c-n", c_n, "grid size")->check(CLI::Range(2, 100000));

    auto* p = app.add_subcommand("profile", "integrate one wave profile");
    p->add_option("--model", model)->required();
    p->add_option("--c", c, "wave speed")->required()->check(CLI::PositiveNumber);
    p->add_option("--start", start, "sharp | smooth");
    p->add_option("--amplitude", amplitude, "smooth-tail amplitude (default zeta1/20)");
    p->add_option("--horizon", horizon, "integration horizon (default 40 max(cr,1))");
    p->add_option("--sample-dt", sample_dt, "CSV sampling step");
    p->add_option("--out", out);
    p->add_option("--csv", csv, "CSV of (t, phi, psi)");
    p->add_option("--svg", svg, "SVG plot of the profile");

    auto* sh = app.add_subcommand("shoot", "bisect for the sharp wave speed c0");
    sh->add_option("--model", model)->required();
    sh->add_option("--tol", tol, "bracket tolerance")->check(CLI::PositiveNumber);
    sh->add_option("--out", out);
    sh->add_option("--probes-csv", csv, "CSV probe log");

    auto* sim = app.add_subcommand("simulate", "direct finite-difference simulation");
    sim->add_option("--model", model)->required();
    sim->add_option("--x-lo", x_lo);
    sim->add_option("--x-hi", x_hi);
    sim->add_option("--cells", cells)->check(CLI::Range(100, 10000000));
    sim->add_option("--T", T, "final time")->check(CLI::PositiveNumber);
    sim->add_option("--init", init, "bump | transplant");
    sim->add_option("--height", height)->check(CLI::PositiveNumber);
    sim->add_option("--width", width)->check(CLI::PositiveNumber);
    sim->add_option("--snapshots", snaps, "comma-separated snapshot times");
    sim->add_option("--x-probe", x_probe, "probe position for oscillation detection");
    sim->add_option("--out", out);
    sim->add_option("--front-csv", csv, "CSV front trace (t, x_left, x_right)");
    sim->add_option("--snapshots-csv", csv2, "CSV snapshots (t, x, u)");

    auto* at = app.add_subcommand("atlas", "sweep r and assemble the speed curves");
    at->add_option("--model", model)->required();
    at->add_option("--r", rlist, "comma-separated delay values")->required();
    at->add_option("--shoot-tol", shoot_tol)->check(CLI::PositiveNumber);
    at->add_option("--out", out);
    at->add_option("--csv", csv, "CSV of atlas rows");
    at->add_option("--svg", svg, "SVG of the (r, c) curves");

    try {
        app.parse(argc, argv);
        if (sim->count("--x-probe")) use_probe = true;
        if (d->parsed()) return run_derive(model, out);
        if (s->parsed()) return run_speeds(model, out, csv, c_lo, c_hi, c_n);
        if (p->parsed())
            return run_profile(model, c, start, amplitude, horizon, sample_dt, out, csv, svg);
        if (sh->parsed()) return run_shoot(model, tol, out, csv);
        if (sim->parsed())
            return run_simulate(model, x_lo, x_hi, cells, T, init, height, width, snaps,
                                x_probe, use_probe, out, csv, csv2);
        if (at->parsed()) return run_atlas(model, rlist, out, csv, svg, shoot_tol);
        std::cerr << app.help();
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    } catch (const ModelError& e) {
        print_json_diag("model", e);
        return 3;
    } catch (const DomainError& e) {
        print_json_diag("domain", e);
        return 3;
    } catch (const ParamError& e) {
        print_json_diag("parameter", e);
        return 2;
    } catch (const NumericalError& e) {
        print_json_diag("numerical", e);
        return 4;
    } catch (const std::exception& e) {
        print_json_diag("internal", e);
        return 4;
    }
}
