// Batch driver: dispersion | ripple | solve | simulate | sweep.
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "npt/io.hpp"
#include "npt/lattice.hpp"
#include "npt/nanopteron.hpp"
#include "npt/params.hpp"
#include "npt/ripple.hpp"

using namespace npt;
using io::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    double w = 2.0;
    double eps = 0.1;
    double grid_L = 40.0;
    int grid_N = 4096;
    bool auto_escalate = true;
    NanopteronConfig solver;
    std::vector<double> amplitudes = {0.0, 1e-3, 1e-2};
    int k_points = 1001;
    std::vector<double> speed_offsets = {1e-3, 1e-2, 5e-2, 0.1, 0.2, 0.5};  // c - c_w
    int lattice_half = 0;  // 0 -> 30 / eps
    SimConfig sim;
    bool leading_order = false;
    std::vector<double> sweep_eps = {0.2, 0.1, 0.05, 0.025};
    int workers = 1;

    json to_json() const
    {
        return {
            {"w", w},
            {"eps", eps},
            {"grid", {{"L", grid_L}, {"N", grid_N}, {"auto_escalate", auto_escalate}}},
            {"solver",
             {{"tol", solver.tol},
              {"max_iter", solver.max_iter},
              {"omega", solver.omega},
              {"ripple_modes", solver.ripple_modes},
              {"ripple_tol", solver.ripple_tol},
              {"ripple_max_iter", solver.ripple_max_iter},
              {"amplitude_rel_tol", solver.amplitude_rel_tol}}},
            {"ripple", {{"amplitudes", amplitudes}}},
            {"dispersion", {{"k_points", k_points}, {"speed_offsets", speed_offsets}}},
            {"solve", {{"lattice_half", lattice_half}}},
            {"simulate",
             {{"dt", sim.dt},
              {"T", sim.T},
              {"J", sim.J},
              {"sample_every", sim.sample_every},
              {"leading_order", leading_order}}},
            {"sweep", {{"eps", sweep_eps}}},
            {"workers", workers},
        };
    }

    void merge(const json& j)
    {
        reject_unknown(j, to_json(), "");
        auto get = [&](const char* sec, const char* key, auto& dst) {
            const json* node = sec ? (j.contains(sec) ? &j.at(sec) : nullptr) : &j;
            if (node && node->contains(key)) node->at(key).get_to(dst);
        };
        get(nullptr, "w", w);
        get(nullptr, "eps", eps);
        get(nullptr, "workers", workers);
        get("grid", "L", grid_L);
        get("grid", "N", grid_N);
        get("grid", "auto_escalate", auto_escalate);
        get("solver", "tol", solver.tol);
        get("solver", "max_iter", solver.max_iter);
        get("solver", "omega", solver.omega);
        get("solver", "ripple_modes", solver.ripple_modes);
        get("solver", "ripple_tol", solver.ripple_tol);
        get("solver", "ripple_max_iter", solver.ripple_max_iter);
        get("solver", "amplitude_rel_tol", solver.amplitude_rel_tol);
        get("ripple", "amplitudes", amplitudes);
        get("dispersion", "k_points", k_points);
        get("dispersion", "speed_offsets", speed_offsets);
        get("solve", "lattice_half", lattice_half);
        get("simulate", "dt", sim.dt);
        get("simulate", "T", sim.T);
        get("simulate", "J", sim.J);
        get("simulate", "sample_every", sim.sample_every);
        get("simulate", "leading_order", leading_order);
        get("sweep", "eps", sweep_eps);
    }

    static void reject_unknown(const json& j, const json& ref, const std::string& where)
    {
        if (!j.is_object()) throw std::invalid_argument("config" + where + " must be an object");
        for (const auto& [k, v] : j.items()) {
            if (!ref.contains(k)) throw std::invalid_argument("unknown config key " + where + "/" + k);
            if (ref.at(k).is_object()) reject_unknown(v, ref.at(k), where + "/" + k);
        }
    }

    void validate() const
    {
        auto need = [](bool ok, const std::string& msg) {
            if (!ok) throw std::invalid_argument(msg);
        };
        need(w > 1.0, "w must exceed 1");
        need(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
        need(grid_L > 0.0, "grid L must be positive");
        need(grid_N >= 64 && grid_N % 2 == 0, "grid N must be even and >= 64");
        need(solver.tol > 0.0, "tol must be positive");
        need(solver.max_iter >= 1, "max_iter must be >= 1");
        need(solver.omega > 0.0 && solver.omega <= 1.0, "omega must lie in (0, 1]");
        need(solver.ripple_modes >= 2, "ripple_modes must be >= 2");
        need(solver.ripple_tol > 0.0 && solver.ripple_max_iter >= 1, "ripple tolerances invalid");
        need(solver.amplitude_rel_tol > 0.0, "amplitude_rel_tol must be positive");
        for (double a : amplitudes) need(std::isfinite(a), "ripple amplitudes must be finite");
        need(k_points >= 2, "k_points must be >= 2");
        for (double d : speed_offsets) need(d > 0.0, "speed offsets must be positive");
        need(lattice_half >= 0, "lattice_half must be >= 0");
        need(sim.T > 0.0 && sim.sample_every >= 1, "simulate T and sample_every must be positive");
        need(step_is_stable(sim.dt, w), "simulate dt outside the RK4 stability bound");
        need(sim.J >= 64 && sim.J % 2 == 0, "simulate J must be even and >= 64");
        need(!sweep_eps.empty(), "sweep eps list is empty");
        for (double e : sweep_eps) need(e > 0.0 && e < 1.0, "sweep eps must lie in (0, 1)");
        need(workers >= 1, "workers must be >= 1");
    }
};

struct Checks {
    json j = json::object();
    bool ok = true;

    void below(const std::string& name, double value, double limit)
    {
        const bool pass = value < limit;
        j[name] = {{"value", value}, {"limit", limit}, {"pass", pass}};
        ok = ok && pass;
    }
    void flag(const std::string& name, bool pass)
    {
        j[name] = {{"pass", pass}};
        ok = ok && pass;
    }
};

std::string shortest(double v)
{
    char b[32];
    const auto r = std::to_chars(b, b + sizeof b, v);
    return std::string(b, r.ptr);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    }
    const double d = n * sxx - sx * sx;
    return d != 0.0 ? (n * sxy - sx * sy) / d : std::numeric_limits<double>::quiet_NaN();
}

void stamp(const fs::path& dir, const std::string& command, const RunConfig& cfg)
{
    fs::create_directories(dir);
    io::write_json(dir / "config.json", {{"version", io::version()}, {"command", command}, {"config", cfg.to_json()}});
}

// Resolves N against the carrier wavenumber so the ripple is represented.
RunConfig resolved_for(RunConfig cfg, double eps)
{
    cfg.eps = eps;
    if (cfg.auto_escalate)
        cfg.grid_N = Grid::resolve_points(cfg.grid_L, cfg.grid_N, find_Keps(DimerParams::make(cfg.w, eps)).K);
    return cfg;
}

// ---------------------------------------------------------------------------

bool cmd_dispersion(const RunConfig& cfg, const fs::path& out)
{
    stamp(out, "dispersion", cfg);
    const double w = cfg.w, cw = std::sqrt(sound_speed_sq(w));
    Checks ck;
    double acoustic_max = 0.0;
    {
        io::CsvWriter csv(out / "dispersion.csv",
                          {"k", "lambda_minus", "lambda_plus", "phase_speed_acoustic", "phase_speed_optical"});
        for (int i = 0; i < cfg.k_points; ++i) {
            const double k = std::numbers::pi * i / (cfg.k_points - 1);
            const auto [lm, lp] = lambda_pm(k, w);
            const double ca = std::sqrt(lambda_minus_over_k2(k, w));
            const double co = i == 0 ? std::numeric_limits<double>::infinity() : std::sqrt(lp) / k;
            acoustic_max = std::max(acoustic_max, ca);
            csv.row({k, lm, lp, ca, co});
        }
    }
    ck.below("lambda_plus_at_zero", std::abs(lambda_plus(0.0, w) - (2.0 + 2.0 * w)), 1e-12);
    ck.below("acoustic_phase_speed_max_vs_cw", std::abs(acoustic_max - cw), 1e-6);
    double worst_res = 0.0, worst_cross = 0.0;
    bool bracket = true;
    {
        io::CsvWriter csv(out / "kc.csv", {"c", "k_c", "residual", "slope", "optical_phase_speed"});
        for (double d : cfg.speed_offsets) {
            const double c = cw + d;
            const KcRoot r = find_kc(c, w);
            const double co = std::sqrt(lambda_plus(r.k, w)) / r.k;
            worst_res = std::max(worst_res, r.residual);
            worst_cross = std::max(worst_cross, std::abs(co - c) / c);
            bracket = bracket && r.k >= std::sqrt(2 * w) / c && r.k <= std::sqrt(2 + 2 * w) / c;
            csv.row({c, r.k, r.residual, r.slope, co});
        }
    }
    ck.below("kc_residual_max", worst_res, 1e-11);
    ck.below("optical_crossing_rel", worst_cross, 1e-10);
    ck.flag("kc_in_bracket", bracket);
    io::write_json(out / "report.json", {{"c_w", cw}, {"checks", ck.j}, {"passed", ck.ok}});
    std::cout << "dispersion: c_w " << io::fmt(cw) << ", " << cfg.speed_offsets.size() << " k_c roots, "
              << (ck.ok ? "all checks passed" : "checks FAILED") << "\n";
    return ck.ok;
}

bool cmd_ripple(const RunConfig& cfg, const fs::path& out)
{
    stamp(out, "ripple", cfg);
    const RippleProblem rp(DimerParams::make(cfg.w, cfg.eps), cfg.solver.ripple_modes);
    Checks ck;
    json sols = json::array();
    io::CsvWriter csv(out / "ripple_coeffs.csv", {"a", "m", "psi1_re", "psi1_im", "psi2_re", "psi2_im"});
    for (double a : cfg.amplitudes) {
        const auto s = rp.solve(a, cfg.solver.ripple_tol, cfg.solver.ripple_max_iter);
        json js = io::to_json(s);
        js["a"] = a;
        sols.push_back(js);
        for (int m = -s.M; m <= s.M; ++m)
            csv.row({a, static_cast<double>(m), s.psi1.at(m).real(), s.psi1.at(m).imag(), s.psi2.at(m).real(),
                     s.psi2.at(m).imag()});
        const std::string tag = "a=" + shortest(a);
        ck.below("residual " + tag, s.residual, 1e-9);
        ck.flag("orthogonality " + tag, s.psi2.at(1) == cplx(0.0) && s.psi2.at(-1) == cplx(0.0));
        std::cout << "ripple " << tag << ": " << s.iterations << " iterations, residual " << io::fmt(s.residual)
                  << "\n";
    }
    io::write_json(out / "report.json",
                   {{"K_eps", rp.K_eps()}, {"solutions", sols}, {"checks", ck.j}, {"passed", ck.ok}});
    return ck.ok;
}

struct SolveOutcome {
    RunConfig cfg;
    std::unique_ptr<NanopteronSolver> solver;
    NanopteronResult result;
    Checks checks;
};

SolveOutcome run_solve(const RunConfig& base, double eps, const fs::path& out, const std::string& command)
{
    SolveOutcome o;
    o.cfg = resolved_for(base, eps);
    stamp(out, command, o.cfg);
    o.solver = std::make_unique<NanopteronSolver>(DimerParams::make(o.cfg.w, eps),
                                                  Grid(o.cfg.grid_L, o.cfg.grid_N), o.cfg.solver);
    o.result = iterate_nanopteron(*o.solver);
    const auto& r = o.result.report;
    const auto& t = r.theta_residual;
    o.checks.flag("converged", r.converged);
    o.checks.below("composite_residual", std::max({t.theta1_rel, t.theta2_rel, t.periodic}), 1e-7);
    // Once |a| falls under the roundoff level of iota only the absolute defect is meaningful.
    o.checks.flag("amplitude_equation", r.amplitude_consistency < 1e-9 || r.amplitude_defect <= r.iota_floor);
    o.checks.below("p_eps_residual", r.p_residual, 1e-7);
    json rep = io::to_json(r);
    rep["checks"] = o.checks.j;
    rep["passed"] = o.checks.ok;
    io::write_json(out / "report.json", rep);
    io::write_profile_csv(out / "profile.csv", *o.solver, o.result.state);
    const int half = o.cfg.lattice_half > 0 ? o.cfg.lattice_half : static_cast<int>(std::ceil(30.0 / eps));
    io::write_lattice_csv(out / "lattice.csv", descale(*o.solver, o.result.state, o.result.ripple), half);
    return o;
}

double composite(const SolveReport& r)
{
    return std::max({r.theta_residual.theta1_rel, r.theta_residual.theta2_rel, r.theta_residual.periodic});
}

bool cmd_solve(const RunConfig& cfg, const fs::path& out)
{
    const auto o = run_solve(cfg, cfg.eps, out, "solve");
    const auto& r = o.result.report;
    std::cout << "solve eps=" << shortest(cfg.eps) << " N=" << o.cfg.grid_N << ": " << r.iterations
              << " iterations, residual " << io::fmt(composite(r)) << ", a " << io::fmt(r.a_value) << ", "
              << (o.checks.ok ? "all checks passed" : "checks FAILED") << "\n";
    return o.checks.ok;
}

bool cmd_simulate(const RunConfig& cfg, const fs::path& out)
{
    auto o = run_solve(cfg, cfg.eps, out, "simulate");
    const auto prof =
        cfg.leading_order ? descale_leading(*o.solver) : descale(*o.solver, o.result.state, o.result.ripple);
    const SimResult sim = simulate(prof, cfg.sim);
    io::write_sim_csv(out / "sim.csv", sim);
    Checks& ck = o.checks;
    ck.below("speed_rel_error", sim.speed_rel_error, 5e-3);
    ck.below("energy_drift", sim.energy_drift, 1e-6);
    json rep = io::to_json(sim);
    rep["c_eps"] = prof.c_eps;
    rep["P_eps"] = prof.P_eps;
    rep["leading_order"] = cfg.leading_order;
    rep["checks"] = ck.j;
    rep["passed"] = ck.ok;
    io::write_json(out / "sim_report.json", rep);
    std::cout << "simulate eps=" << shortest(cfg.eps) << " T=" << shortest(cfg.sim.T) << ": speed "
              << io::fmt(sim.speed) << " (rel " << io::fmt(sim.speed_rel_error) << "), shape error max "
              << io::fmt(sim.shape_error_max) << ", energy drift " << io::fmt(sim.energy_drift) << ", "
              << (ck.ok ? "all checks passed" : "checks FAILED") << "\n";
    return ck.ok;
}

bool cmd_sweep(const RunConfig& cfg, const fs::path& out)
{
    stamp(out, "sweep", cfg);
    const std::size_t n = cfg.sweep_eps.size();
    struct Row {
        bool ok = false;
        std::string error;
        double eta = 0, abs_a = 0, kappa = 0, residual = 0;
        int N = 0;
    };
    std::vector<Row> rows(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            const double e = cfg.sweep_eps[i];
            const fs::path dir = out / ("eps_" + shortest(e));
            Row& row = rows[i];
            try {
                const auto o = run_solve(cfg, e, dir, "sweep");
                const auto& r = o.result.report;
                row = {o.checks.ok, "", r.eta_norms[0], std::abs(r.a_value), r.kappa_eps, composite(r), o.cfg.grid_N};
            } catch (const std::exception& ex) {
                fs::create_directories(dir);
                io::write_json(dir / "error.json", {{"error", ex.what()}, {"eps", e}});
                row.error = ex.what();
            }
        }
    };
    std::vector<std::thread> pool;
    const int nw = static_cast<int>(std::min<std::size_t>(cfg.workers, n));
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    bool ok = true;
    std::vector<double> le, ln, la, lae;
    {
        io::CsvWriter csv(out / "sweep.csv", {"eps", "eta_norm", "abs_a", "kappa", "residual", "N", "passed"});
        for (std::size_t i = 0; i < n; ++i) {
            const Row& r = rows[i];
            const double e = cfg.sweep_eps[i];
            ok = ok && r.ok;
            if (!r.error.empty()) {
                std::cout << "sweep eps=" << shortest(e) << ": error: " << r.error << "\n";
                continue;
            }
            csv.row({e, r.eta, r.abs_a, r.kappa, r.residual, static_cast<double>(r.N), r.ok ? 1.0 : 0.0});
            std::cout << "sweep eps=" << shortest(e) << " N=" << r.N << ": |eta| " << io::fmt(r.eta) << ", |a| "
                      << io::fmt(r.abs_a) << ", kappa " << io::fmt(r.kappa) << ", residual " << io::fmt(r.residual)
                      << (r.ok ? "" : ", checks FAILED") << "\n";
            le.push_back(std::log(e));
            ln.push_back(std::log(r.eta));
            if (r.abs_a > 0) {
                la.push_back(std::log(e));
                lae.push_back(std::log(r.abs_a));
            }
        }
    }
    json fits = {{"eta_slope", le.size() >= 2 ? fit_slope(le, ln) : NAN},
                 {"abs_a_slope", la.size() >= 2 ? fit_slope(la, lae) : NAN}};
    json dec = json::object();
    for (int p = 1; p <= 3; ++p) {
        bool d = true;
        for (std::size_t i = 1; i < la.size(); ++i)
            d = d && lae[i] - p * la[i] < lae[i - 1] - p * la[i - 1];
        dec["r=" + std::to_string(p)] = d;
    }
    fits["abs_a_over_eps_r_decreasing"] = dec;
    io::write_json(out / "fits.json", {{"fits", fits}, {"passed", ok}});
    std::cout << "sweep fits: eta slope " << io::fmt(fits["eta_slope"].get<double>()) << ", |a| slope "
              << io::fmt(fits["abs_a_slope"].get<double>()) << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Nanopteron traveling waves of the diatomic FPUT lattice"};
    app.set_version_flag("--version", std::string(io::version()));
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir;
    std::optional<double> eps, w, grid_l, tol;
    std::optional<int> grid_n, max_iter, workers;
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--eps", eps, "long-wave parameter");
    app.add_option("--w", w, "mass ratio");
    app.add_option("--grid-n", grid_n, "grid points");
    app.add_option("--grid-l", grid_l, "grid half-length");
    app.add_option("--tol", tol, "iteration tolerance");
    app.add_option("--max-iter", max_iter, "iteration cap");
    app.add_option("--workers", workers, "concurrent sweep members");

    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"dispersion", "dispersion curves, phase speeds and k_c"},
        {"ripple", "periodic ripple solutions over an amplitude list"},
        {"solve", "nanopteron fixed-point iteration"},
        {"simulate", "solve, descale and integrate the lattice"},
        {"sweep", "solve over an eps list and fit scaling exponents"},
    };
    for (const auto& [name, help] : cmds) app.add_subcommand(name, help);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    fs::path out;
    if (!out_dir.empty()) {
        out = out_dir;
    } else {
        const char* env = std::getenv("NANOPTERON_OUT");
        out = fs::path(env && *env ? env : "runs") / command;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            cfg.merge(json::parse(in));
        }
        if (eps) cfg.eps = *eps;
        if (w) cfg.w = *w;
        if (grid_n) cfg.grid_N = *grid_n;
        if (grid_l) cfg.grid_L = *grid_l;
        if (tol) cfg.solver.tol = *tol;
        if (max_iter) cfg.solver.max_iter = *max_iter;
        if (workers) cfg.workers = *workers;
        cfg.validate();

        bool ok = false;
        if (command == "dispersion") ok = cmd_dispersion(cfg, out);
        if (command == "ripple") ok = cmd_ripple(cfg, out);
        if (command == "solve") ok = cmd_solve(cfg, out);
        if (command == "simulate") ok = cmd_simulate(cfg, out);
        if (command == "sweep") ok = cmd_sweep(cfg, out);
        return ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::error_code ec;
        fs::create_directories(out, ec);
        try {
            io::write_json(out / "error.json", {{"command", command}, {"error", e.what()}, {"version", io::version()}});
        } catch (...) {
        }
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
