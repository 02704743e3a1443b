#include "npt/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "npt/kernels.hpp"

namespace npt {

Chain::Chain(double w, int J) : w_(w), J_(J)
{
    if (J < 4 || J % 2 != 0) throw std::invalid_argument("chain length must be even and >= 4");
    wp_.resize(J);
    wm_.resize(J);
    for (int j = 0; j < J; ++j) {
        wp_[j] = j % 2 == 1 ? w : 1.0;
        wm_[j] = j % 2 == 1 ? 1.0 : w;
    }
    for (auto* v : {&scratch_, &k1r_, &k1v_, &k2r_, &k2v_, &k3r_, &k3v_, &k4v_, &tmp_r_, &tmp_v_})
        v->resize(J);
}

void Chain::rhs(const std::vector<double>& r, std::vector<double>& acc) const
{
    acc.resize(J_);
    kernels::active().force(r.data(), wp_.data(), wm_.data(), w_, acc.data(), scratch_.data(),
                            static_cast<std::size_t>(J_));
}

std::vector<double> Chain::rhs(const ChainState& s) const
{
    std::vector<double> acc;
    rhs(s.r, acc);
    return acc;
}

void Chain::step(ChainState& s, double dt) const
{
    const auto& K = kernels::active();
    const std::size_t n = static_cast<std::size_t>(J_);
    const double h2 = 0.5 * dt;
    // stage 1: k1r = v, k1v = f(r)
    rhs(s.r, k1v_);
    K.axpy(s.r.data(), s.v.data(), h2, tmp_r_.data(), n);
    K.axpy(s.v.data(), k1v_.data(), h2, tmp_v_.data(), n);
    // stage 2: k2r = tmp_v, k2v = f(tmp_r)
    k2r_ = tmp_v_;
    rhs(tmp_r_, k2v_);
    K.axpy(s.r.data(), k2r_.data(), h2, tmp_r_.data(), n);
    K.axpy(s.v.data(), k2v_.data(), h2, tmp_v_.data(), n);
    k3r_ = tmp_v_;
    rhs(tmp_r_, k3v_);
    K.axpy(s.r.data(), k3r_.data(), dt, tmp_r_.data(), n);
    K.axpy(s.v.data(), k3v_.data(), dt, tmp_v_.data(), n);
    // stage 4: k4r = tmp_v
    rhs(tmp_r_, k4v_);
    const double a = dt / 6.0, b = dt / 3.0;
    K.axpy(s.r.data(), s.v.data(), a, s.r.data(), n);
    K.axpy(s.r.data(), k2r_.data(), b, s.r.data(), n);
    K.axpy(s.r.data(), k3r_.data(), b, s.r.data(), n);
    K.axpy(s.r.data(), tmp_v_.data(), a, s.r.data(), n);
    K.axpy(s.v.data(), k1v_.data(), a, s.v.data(), n);
    K.axpy(s.v.data(), k2v_.data(), b, s.v.data(), n);
    K.axpy(s.v.data(), k3v_.data(), b, s.v.data(), n);
    K.axpy(s.v.data(), k4v_.data(), a, s.v.data(), n);
    s.t += dt;
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(s.r[j]) || !std::isfinite(s.v[j])) {
            std::ostringstream os;
            os << "chain blew up at t = " << s.t;
            throw std::runtime_error(os.str());
        }
    }
}

double Chain::energy(const ChainState& s) const
{
    // x-velocities from v_j = xdot_{j+1} - xdot_j, gauge fixed by zero total momentum.
    double acc = 0.0, mom = 0.0, mass = 0.0;
    std::vector<double> xd(J_);
    for (int j = 0; j < J_; ++j) {
        xd[j] = acc;
        const double m = j % 2 == 1 ? 1.0 : 1.0 / w_;
        mom += m * acc;
        mass += m;
        acc += s.v[j];
    }
    const double u = -mom / mass;
    double e = 0.0;
    for (int j = 0; j < J_; ++j) {
        const double m = j % 2 == 1 ? 1.0 : 1.0 / w_;
        const double x = xd[j] + u;
        const double r = s.r[j];
        e += 0.5 * m * x * x + 0.5 * r * r + r * r * r / 3.0;
    }
    return e;
}

double Chain::sum_v(const ChainState& s)
{
    double t = 0.0;
    for (double v : s.v) t += v;
    return t;
}

bool step_is_stable(double dt, double w) { return dt > 0.0 && dt * std::sqrt(2.0 + 2.0 * w) < 0.5; }

namespace {

double wrap(double x, int J)
{
    const double h = 0.5 * J;
    x = std::fmod(x + h, static_cast<double>(J));
    if (x < 0) x += J;
    return x - h;
}

}  // namespace

ChainState init_traveling(const LatticeWaveProfile& prof, int J, int j_center)
{
    if (J < 4 || J % 2 != 0) throw std::invalid_argument("chain length must be even and >= 4");
    const double peak = std::max(std::abs(prof.eval_localized(0, 0.0)),
                                 std::abs(prof.eval_localized(1, 0.0)));
    const double edge = 0.5 * J - 1.0;
    double tail = 0.0;
    for (int c = 0; c < 2; ++c)
        for (double x : {-edge, edge}) tail = std::max(tail, std::abs(prof.eval_localized(c, x)));
    if (tail > 1e-8 * peak) {
        std::ostringstream os;
        os << "chain too short: localized tail " << tail / peak << " of the peak at |x| = " << edge;
        throw std::invalid_argument(os.str());
    }
    ChainState s;
    s.w = prof.w;
    s.approximate = prof.approximate;
    s.r.resize(J);
    s.v.resize(J);
    for (int j = 0; j < J; ++j) {
        const int c = j % 2 == 1 ? 0 : 1;
        const double x = wrap(j - j_center, J);
        s.r[j] = prof.eval(c, x);
        s.v[j] = -prof.c_eps * prof.eval(c, x, 1);
    }
    const double mean = Chain::sum_v(s) / J;
    for (double& v : s.v) v -= mean;
    return s;
}

ShapeTracker::ShapeTracker(const LatticeWaveProfile& prof, int J, int j_center)
    : prof_(&prof), J_(J), jc_(j_center)
{
    const Grid g(1.0, J);  // only the transform length matters
    std::vector<double> t1(J), t2(J);
    for (int n = 0; n < J; ++n) {
        const double x = wrap(n - j_center, J);
        t1[n] = prof.eval(0, x);
        t2[n] = prof.eval(1, x);
    }
    T1_ = transform(g, t1);
    T2_ = transform(g, t2);
    for (auto& v : T1_) v = std::conj(v);
    for (auto& v : T2_) v = std::conj(v);
}

double ShapeTracker::error_at(const std::vector<double>& r, double s) const
{
    double e = 0.0;
    for (int j = 0; j < J_; ++j) {
        const int c = j % 2 == 1 ? 0 : 1;
        e = std::max(e, std::abs(r[j] - prof_->eval(c, wrap(j - jc_ - s, J_))));
    }
    return e;
}

ShapeFit ShapeTracker::fit(const std::vector<double>& r) const
{
    const Grid g(1.0, J_);
    std::vector<double> ro(J_, 0.0), re(J_, 0.0);
    for (int j = 0; j < J_; ++j) (j % 2 == 1 ? ro : re)[j] = r[j];
    Spectrum A = transform(g, ro), B = transform(g, re);
    for (int k = 0; k < J_; ++k) A[k] = A[k] * T1_[k] + B[k] * T2_[k];
    const auto C = inverse_real(g, A);
    const int m = static_cast<int>(std::max_element(C.begin(), C.end()) - C.begin());
    const double cm = C[(m - 1 + J_) % J_], c0 = C[m], cp = C[(m + 1) % J_];
    const double den = cm - 2.0 * c0 + cp;
    const double d = den != 0.0 ? 0.5 * (cm - cp) / den : 0.0;
    ShapeFit f;
    f.parabola_shift = wrap(m + d, J_);
    f.parabola_error = error_at(r, f.parabola_shift);
    // Gauss-Newton polish of the least-squares shift, started from the parabola vertex.
    double s = f.parabola_shift;
    for (int it = 0; it < 4; ++it) {
        double num = 0.0, den2 = 0.0;
        for (int j = 0; j < J_; ++j) {
            const int c = j % 2 == 1 ? 0 : 1;
            const double x = wrap(j - jc_ - s, J_);
            const double e = r[j] - prof_->eval(c, x);
            const double dp = prof_->eval(c, x, 1);
            num += e * dp;
            den2 += dp * dp;
        }
        if (den2 == 0.0) break;
        const double delta = -num / den2;
        s = wrap(s + delta, J_);
        if (std::abs(delta) < 1e-14) break;
    }
    f.shift = s;
    f.error = error_at(r, s);
    return f;
}

SimResult simulate(const LatticeWaveProfile& prof, const SimConfig& cfg)
{
    if (!step_is_stable(cfg.dt, prof.w))
        throw std::invalid_argument("time step violates dt sqrt(2+2w) < 0.5");
    if (cfg.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    const int J = cfg.J;
    const int jc = J / 2;
    ChainState s = init_traveling(prof, J, jc);
    const Chain chain(prof.w, J);
    const ShapeTracker tracker(prof, J, jc);
    SimResult res;
    res.approximate = prof.approximate;
    const double e0 = chain.energy(s);
    const double v0 = Chain::sum_v(s);
    double unwrap_offset = 0.0, last = 0.0;
    auto sample = [&]() {
        const ShapeFit f = tracker.fit(s.r);
        double sh = f.shift + unwrap_offset;
        while (sh - last > 0.5 * J) {
            sh -= J;
            unwrap_offset -= J;
        }
        while (sh - last < -0.5 * J) {
            sh += J;
            unwrap_offset += J;
        }
        last = sh;
        const double e = chain.energy(s);
        res.samples.push_back({s.t, f.error, sh, e, f.parabola_error});
        res.energy_drift = std::max(res.energy_drift, std::abs(e - e0) / std::abs(e0));
        res.sum_v_drift = std::max(res.sum_v_drift, std::abs(Chain::sum_v(s) - v0));
    };
    sample();
    const long steps = std::lround(cfg.T / cfg.dt);
    for (long n = 1; n <= steps; ++n) {
        chain.step(s, cfg.dt);
        if (n % cfg.sample_every == 0 || n == steps) sample();
    }
    double st = 0, ss = 0, stt = 0, sts = 0;
    const double m = static_cast<double>(res.samples.size());
    for (const auto& x : res.samples) {
        st += x.t;
        ss += x.shift;
        stt += x.t * x.t;
        sts += x.t * x.shift;
        res.shape_error_max = std::max(res.shape_error_max, x.shape_error);
        res.parabola_error_max = std::max(res.parabola_error_max, x.parabola_error);
    }
    res.speed = (m * sts - st * ss) / (m * stt - st * st);
    res.speed_rel_error = std::abs(res.speed - prof.c_eps) / prof.c_eps;
    res.shape_error_t0 = res.samples.front().shape_error;
    res.shape_error_final = res.samples.back().shape_error;
    res.parabola_error_t0 = res.samples.front().parabola_error;
    return res;
}

}  // namespace npt
