#pragma once

#include <string>
#include <vector>

#include "npt/nanopteron.hpp"
#include "npt/params.hpp"

namespace npt {

struct SimConfig {
    double dt = 0.02;
    double T = 500.0;
    int J = 2048;
    int sample_every = 50;  // steps between samples
};

// Periodic diatomic chain in relative displacements. Site j odd carries mass 1, j even 1/w.
struct ChainState {
    std::vector<double> r;
    std::vector<double> v;
    double t = 0.0;
    double w = 2.0;
    bool approximate = false;
};

class Chain {
public:
    Chain(double w, int J);
    void rhs(const std::vector<double>& r, std::vector<double>& acc) const;
    std::vector<double> rhs(const ChainState& s) const;
    // One classical fourth-order Runge-Kutta step. Throws on non-finite values.
    void step(ChainState& s, double dt) const;

    double energy(const ChainState& s) const;
    // sum of v_j; conserved by the dynamics
    static double sum_v(const ChainState& s);
    int size() const { return J_; }
    double w() const { return w_; }

private:
    double w_;
    int J_;
    std::vector<double> wp_, wm_;
    mutable std::vector<double> scratch_, k1r_, k1v_, k2r_, k2v_, k3r_, k3v_, k4v_, tmp_r_, tmp_v_;
};

// Largest stable-ish step: dt sqrt(2 + 2w) < 0.5.
bool step_is_stable(double dt, double w);

// r_j = p_{parity(j)}(j - j_center), v_j = -c p'_{parity(j)}(j - j_center), mean of v removed.
ChainState init_traveling(const LatticeWaveProfile& prof, int J, int j_center);

struct ShapeFit {
    double error = 0.0;  // sup_j |r_j - p(j - j_center - s)| at the polished shift
    double shift = 0.0;  // s, in [-J/2, J/2)
    // integer cross-correlation peak plus a parabola through three lags, before polishing
    double parabola_shift = 0.0;
    double parabola_error = 0.0;
};

class ShapeTracker {
public:
    ShapeTracker(const LatticeWaveProfile& prof, int J, int j_center);
    ShapeFit fit(const std::vector<double>& r) const;
    // sup error at a prescribed shift
    double error_at(const std::vector<double>& r, double s) const;

private:
    const LatticeWaveProfile* prof_;
    int J_;
    int jc_;
    Spectrum T1_, T2_;  // conjugated transforms of the two templates
};

struct SimSample {
    double t = 0.0;
    double shape_error = 0.0;
    double shift = 0.0;  // unwrapped
    double energy = 0.0;
    double parabola_error = 0.0;
};

struct SimResult {
    std::vector<SimSample> samples;
    double speed = 0.0;            // least-squares slope of shift(t)
    double speed_rel_error = 0.0;  // |speed - c_eps| / c_eps
    double shape_error_t0 = 0.0;
    double shape_error_max = 0.0;
    double shape_error_final = 0.0;
    double parabola_error_t0 = 0.0;
    double parabola_error_max = 0.0;
    double energy_drift = 0.0;     // max |E(t) - E(0)| / |E(0)|
    double sum_v_drift = 0.0;
    bool approximate = false;
};

SimResult simulate(const LatticeWaveProfile& prof, const SimConfig& cfg);

}  // namespace npt
