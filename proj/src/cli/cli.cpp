#include "cyclebound/cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cyclebound/analysis/analysis.hpp"
#include "cyclebound/errors.hpp"
#include "cyclebound/polyalg/parser.hpp"
#include "cyclebound/simd/kernels.hpp"

namespace cyclebound::cli {

namespace {

using analysis::AnalysisConfig;
using analysis::Json;

struct RunConfig {
    std::string input;
    std::string json_path;
    std::string svg_path;
    std::string csv_path;
    int point_id = -1;
    double eta = 0.0;
    std::string s_list = "1e-3,1e-2";
    std::string seed_list = "1,2,3";
    bool show_config = false;
    AnalysisConfig analysis;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot write '" + path + "'");
    f << text;
}

void emit_json(const std::string& path, const Json& j, std::ostream& out) {
    if (path.empty()) return;
    if (path == "-") out << j.dump(2) << "\n";
    else write_file(path, j.dump(2) + "\n");
}

template <class T>
std::vector<T> split_list(const std::string& s, const char* what) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::istringstream is(item);
        T v{};
        if (!(is >> v) || !is.eof()) throw CLI::ValidationError(what, "cannot read '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Json full_config(const RunConfig& rc) {
    Json j = analysis::config_echo(rc.analysis);
    j["threads"] = rc.analysis.threads;
    j["simd"] = simd::isa_name(simd::active_kernels().isa);
    return j;
}

void print_cp_table(const std::vector<critfind::CriticalPoint>& cps, std::ostream& out) {
    out << std::setw(4) << "id" << std::setw(24) << "x" << std::setw(24) << "y" << std::setw(16) << "det"
        << std::setw(16) << "trace" << std::setw(7) << "index" << "  flags\n";
    out << std::setprecision(15);
    for (const auto& cp : cps) {
        out << std::setw(4) << cp.id << std::setw(24) << cp.location.x << std::setw(24) << cp.location.y
            << std::setprecision(6) << std::setw(16) << cp.jacobian.det() << std::setw(16) << cp.jacobian.trace()
            << std::setprecision(15) << std::setw(7) << cp.index << "  "
            << (cp.nondegenerate ? "nondegenerate" : "degenerate") << (cp.certified ? ",certified" : "")
            << (cp.on_boundary ? ",boundary" : "") << "\n";
    }
}

int cmd_critpoints(const RunConfig& rc, std::ostream& out) {
    const auto v = polyalg::load_vector_field(rc.input);
    const auto cps = critfind::find_critical_points(v, rc.analysis.solve);
    print_cp_table(cps, out);
    emit_json(rc.json_path, analysis::critical_points_json(cps), out);
    return ok;
}

int cmd_fiber(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const auto v = polyalg::load_vector_field(rc.input);
    const auto cps = critfind::find_critical_points(v, rc.analysis.solve);
    if (rc.point_id < 0 || rc.point_id >= static_cast<int>(cps.size())) {
        err << "error: point id " << rc.point_id << " out of range (" << cps.size() << " critical points)\n";
        return bad_argument;
    }
    const auto& cp = cps[static_cast<std::size_t>(rc.point_id)];
    const auto radii = milnor::select_radii(v, cp, cps, rc.analysis.milnor);
    if (!(rc.eta > 0.0) || rc.eta > radii.eta_max) {
        err << "error: eta must lie in (0, eta_max] with eta_max = " << std::setprecision(10) << radii.eta_max << "\n";
        return bad_argument;
    }
    const auto f = milnor::extract_fiber(v, cp, radii.delta, rc.eta, rc.analysis.milnor);
    const auto b = milnor::betti(f);
    out << "point " << cp.id << " delta " << radii.delta << " eta " << rc.eta << " grid " << f.grid_resolution
        << ": b0 = " << b.b0 << ", closed = " << b.closed_count << "\n";
    if (!rc.svg_path.empty()) {
        std::ostringstream os;
        milnor::write_fiber_svg(os, f);
        write_file(rc.svg_path, os.str());
    }
    emit_json(rc.json_path, analysis::to_json(f), out);
    return ok;
}

int cmd_cycles(const RunConfig& rc, std::ostream& out) {
    const auto v = polyalg::load_vector_field(rc.input);
    const auto cps = critfind::find_critical_points(v, rc.analysis.solve);
    auto ccfg = rc.analysis.cycles;
    ccfg.threads = rc.analysis.threads;
    const auto cycles = cycles::detect_limit_cycles(v, cps, ccfg);
    const auto m = cycles::enclosure_matrix(cycles, cps);
    out << std::setprecision(12);
    Json arr = Json::array();
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& lc = cycles[c];
        out << "cycle " << c << ": period " << lc.period << ", " << cycles::stability_name(lc.stability)
            << ", return derivative " << lc.return_derivative << ", mean radius " << lc.mean_radius << ", encloses [";
        for (std::size_t i = 0; i < lc.enclosed_cp_ids.size(); ++i) out << (i ? "," : "") << lc.enclosed_cp_ids[i];
        out << "]\n";
        Json j = analysis::to_json(lc);
        j["enclosure_row"] = m[c];
        arr.push_back(std::move(j));
    }
    if (cycles.empty()) out << "no limit cycles detected\n";
    emit_json(rc.json_path, arr, out);
    if (!rc.csv_path.empty()) {
        std::ostringstream os;
        os << std::setprecision(17) << "cycle,t,x,y\n";
        for (std::size_t c = 0; c < cycles.size(); ++c) {
            const auto& pts = cycles[c].points;
            const double n = static_cast<double>(pts.size() - 1);
            for (std::size_t k = 0; k < pts.size(); ++k)
                os << c << "," << cycles[c].period * static_cast<double>(k) / n << "," << pts[k].x << "," << pts[k].y << "\n";
        }
        write_file(rc.csv_path, os.str());
    }
    return ok;
}

int cmd_analyze(const RunConfig& rc, std::ostream& out) {
    const auto v = polyalg::load_vector_field(rc.input);
    auto report = analysis::compare(v, rc.analysis);
    report.config_echo["threads"] = rc.analysis.threads;
    if (!rc.svg_path.empty()) {
        std::ostringstream os;
        analysis::write_phase_portrait(os, v, report, rc.analysis);
        write_file(rc.svg_path, os.str());
        report.figures.push_back(rc.svg_path);
    }
    report.timestamp = utc_timestamp();

    out << report.system_name << ": k = " << report.critical_points.size() << ", B = " << report.bound
        << ", detected = " << report.detected.size() << ", verdict = " << analysis::verdict_name(report.verdict)
        << "\n";
    for (const auto& r : report.reasons) out << "  reason: " << r << "\n";
    emit_json(rc.json_path, analysis::to_json(report), out);
    switch (report.verdict) {
    case analysis::Verdict::inequality_holds: return ok;
    case analysis::Verdict::inequality_violated: return inequality_violated;
    case analysis::Verdict::inconclusive: return inconclusive;
    }
    return inconclusive;
}

int cmd_morsify(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    const auto s_values = split_list<double>(rc.s_list, "--s");
    const auto seeds = split_list<std::uint64_t>(rc.seed_list, "--seeds");
    if (s_values.empty() || seeds.empty()) {
        err << "error: --s and --seeds need at least one value\n";
        return usage;
    }
    for (const double s : s_values)
        if (!(s >= 0.0)) {
            err << "error: morsification parameters must be nonnegative\n";
            return bad_argument;
        }
    const auto v = polyalg::load_vector_field(rc.input);
    const auto rows = analysis::morsification_invariance(v, s_values, seeds, rc.analysis);
    out << std::setw(10) << "s" << std::setw(8) << "seed" << std::setw(5) << "k" << std::setw(5) << "B"
        << std::setw(10) << "detected" << std::setw(12) << "submersion" << "  flags\n";
    for (const auto& r : rows) {
        out << std::setw(10) << r.s << std::setw(8) << r.seed << std::setw(5) << r.k << std::setw(5) << r.bound
            << std::setw(10) << r.detected << std::setw(12) << (r.submersion_ok_all ? "ok" : "fails") << "  "
            << (r.k_changed ? "k-changed " : "") << (r.bound_changed ? "B-changed " : "")
            << (r.detected_changed ? "detected-changed " : "") << r.error << "\n";
    }
    emit_json(rc.json_path, analysis::to_json(rows), out);
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    auto& a = rc.analysis;
    CLI::App app{"Homological limit-cycle bound for planar polynomial systems", "cyclebound"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    app.add_flag("--show-config", rc.show_config, "Print every numeric default and exit");
    app.add_option("--threads", a.threads, "Worker cap (0 = all cores)")->capture_default_str();
    app.add_option("--seed", a.seed, "Seed recorded in the report")->capture_default_str();

    app.add_option("--residual-tol", a.solve.residual_tol)->capture_default_str();
    app.add_option("--degeneracy-tol", a.solve.degeneracy_tol)->capture_default_str();
    app.add_option("--max-depth", a.solve.max_depth)->capture_default_str();
    app.add_option("--resolution-tol", a.solve.resolution_tol)->capture_default_str();
    app.add_option("--max-live-boxes", a.solve.max_live_boxes)->capture_default_str();

    app.add_option("--grid", a.milnor.grid)->capture_default_str()->check(CLI::Range(64, 1 << 14));
    app.add_option("--max-grid", a.milnor.max_grid)->capture_default_str();
    app.add_option("--sweep-len", a.milnor.sweep_len)->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--stable-tail", a.milnor.stable_tail)->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--delta-cap", a.milnor.delta_cap)->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--submersion-tol", a.milnor.submersion_tol)->capture_default_str();

    app.add_option("--rays", a.cycles.rays)->capture_default_str();
    app.add_option("--radii", a.cycles.radii)->capture_default_str();
    app.add_option("--grid-seeds", a.cycles.grid_seeds)->capture_default_str();
    app.add_option("--t-horizon", a.cycles.t_horizon)->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--rtol", a.cycles.seed_tol.rtol, "Seed integration rtol")->capture_default_str();
    app.add_option("--atol", a.cycles.seed_tol.atol, "Seed integration atol")->capture_default_str();
    app.add_option("--refine-rtol", a.cycles.refine_tol.rtol)->capture_default_str();
    app.add_option("--refine-atol", a.cycles.refine_tol.atol)->capture_default_str();
    app.add_option("--dedup-tol", a.cycles.dedup_tol)->capture_default_str();
    app.add_option("--isolation-tol", a.cycles.isolation_tol)->capture_default_str();
    app.add_option("--ratio-tol", a.cycles.ratio_tol)->capture_default_str();

    auto* critpoints = app.add_subcommand("critpoints", "Critical points of the system");
    auto* fiber = app.add_subcommand("fiber", "Milnor fiber at one critical point");
    auto* cyc = app.add_subcommand("cycles", "Detect limit cycles");
    auto* analyze = app.add_subcommand("analyze", "Bound versus detected cycles");
    auto* morsify = app.add_subcommand("morsify", "Morsification invariance table");
    for (auto* sc : {critpoints, fiber, cyc, analyze, morsify}) {
        sc->add_option("input", rc.input, ".vf file")->required();
        sc->add_option("--json", rc.json_path, "JSON output path ('-' for stdout)");
    }
    fiber->add_option("--point", rc.point_id, "Critical point id")->required();
    fiber->add_option("--eta", rc.eta, "Fiber level")->required();
    fiber->add_option("--svg", rc.svg_path);
    cyc->add_option("--csv", rc.csv_path, "Cycle polylines as cycle,t,x,y");
    analyze->add_option("--svg", rc.svg_path, "Phase portrait");
    morsify->add_option("--s", rc.s_list, "Comma-separated s values")->capture_default_str();
    morsify->add_option("--seeds", rc.seed_list, "Comma-separated seeds")->capture_default_str();

    std::vector<std::string> storage{"cyclebound"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return usage;
    }

    if (rc.show_config) {
        out << full_config(rc).dump(2) << "\n";
        return ok;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return usage;
    }

    try {
        if (critpoints->parsed()) return cmd_critpoints(rc, out);
        if (fiber->parsed()) return cmd_fiber(rc, out, err);
        if (cyc->parsed()) return cmd_cycles(rc, out);
        if (analyze->parsed()) return cmd_analyze(rc, out);
        if (morsify->parsed()) return cmd_morsify(rc, out, err);
    } catch (const ParseError& e) {
        err << rc.input << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
        return usage;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return inconclusive;
    }
    return usage;
}

} // namespace cyclebound::cli
