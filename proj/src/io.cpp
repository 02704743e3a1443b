#include "npt/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace npt::io {

const char* version() { return "nanopteron 1.0.0"; }

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), cols_(header.size())
{
    if (!out_) throw std::runtime_error("cannot open " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
    if (values.size() != cols_) throw std::invalid_argument("CSV row width mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt(values[i]);
    out_ << '\n';
}

void write_json(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << j.dump(2) << '\n';
}

json to_json(const CompositeResidual& c)
{
    return {{"theta1", c.theta1},         {"theta2", c.theta2},
            {"theta1_rel", c.theta1_rel}, {"theta2_rel", c.theta2_rel},
            {"periodic", c.periodic}};
}

json to_json(const SolveReport& r)
{
    return {{"iterations", r.iterations},
            {"converged", r.converged},
            {"final_update_norm", r.final_update_norm},
            {"update_history", r.update_history},
            {"theta_residual", to_json(r.theta_residual)},
            {"a_value", r.a_value},
            {"eta_norms", r.eta_norms},
            {"weight_q", r.weight_q},
            {"eta_sup", r.eta_sup},
            {"kappa_eps", r.kappa_eps},
            {"kappa_star", r.kappa_star},
            {"K_eps", r.K_eps},
            {"K_eps_a", r.K_eps_a},
            {"boundary_eta1", r.boundary_eta1},
            {"boundary_eta2", r.boundary_eta2},
            {"parity_defect_1", r.parity_defect_1},
            {"parity_defect_2", r.parity_defect_2},
            {"amplitude_consistency", r.amplitude_consistency},
            {"amplitude_defect", r.amplitude_defect},
            {"iota_floor", r.iota_floor},
            {"decay_rate_fit", r.decay_rate_fit},
            {"ripple_iterations", r.ripple_iterations},
            {"ripple_residual", r.ripple_residual},
            {"p_residual", r.p_residual}};
}

json to_json(const RippleSolution& r)
{
    auto coeffs = [](const PeriodicFieldCoeffs& c) {
        json a = json::array();
        for (int m = -c.M; m <= c.M; ++m) a.push_back({m, c.at(m).real(), c.at(m).imag()});
        return a;
    };
    return {{"a", r.a},
            {"K_eps", r.K_eps},
            {"t_shift", r.t_shift},
            {"K_eps_a", r.K_eps_a},
            {"modes", r.M},
            {"iterations", r.iterations},
            {"residual", r.residual},
            {"update_history", r.update_history},
            {"psi1", coeffs(r.psi1)},
            {"psi2", coeffs(r.psi2)}};
}

json to_json(const SimResult& r)
{
    return {{"speed", r.speed},
            {"speed_rel_error", r.speed_rel_error},
            {"shape_error_t0", r.shape_error_t0},
            {"shape_error_max", r.shape_error_max},
            {"shape_error_final", r.shape_error_final},
            {"energy_drift", r.energy_drift},
            {"sum_v_drift", r.sum_v_drift},
            {"approximate", r.approximate},
            {"samples", r.samples.size()}};
}

void write_profile_csv(const std::filesystem::path& path, const NanopteronSolver& solver,
                       const NanopteronState& s)
{
    CsvWriter w(path, {"X", "theta1", "theta2", "eta1", "eta2"});
    const Grid& g = solver.grid();
    for (int j = 0; j < g.N; ++j) {
        const double e1 = s.eta1.values[j], e2 = s.eta2.values[j];
        w.row({g.X[j], solver.sigma()[j] + e1, e2, e1, e2});
    }
}

void write_lattice_csv(const std::filesystem::path& path, const LatticeWaveProfile& prof, int half)
{
    CsvWriter w(path, {"j", "p", "velocity"});
    for (int j = -half; j <= half; ++j) {
        const int c = (j % 2 != 0) ? 0 : 1;
        w.row({static_cast<double>(j), prof.eval(c, j), -prof.c_eps * prof.eval(c, j, 1)});
    }
}

void write_sim_csv(const std::filesystem::path& path, const SimResult& r)
{
    CsvWriter w(path, {"t", "shape_error", "fitted_shift", "energy"});
    for (const auto& s : r.samples) w.row({s.t, s.shape_error, s.shift, s.energy});
}

}  // namespace npt::io
