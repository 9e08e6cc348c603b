// Hamiltonian flows: a leapfrog integrator for the separable flat systems and
// an implicit-midpoint integrator for the twisted/reduced structures, plus
// drift reports and period estimation.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohlin/core.hpp"
#include "bohlin/observable.hpp"
#include "bohlin/poisson.hpp"
#include "bohlin/reduction.hpp"
#include "bohlin/transforms.hpp"

namespace bohlin {

/// Kinetic/potential split in canonicalized real coordinates (Q, P):
/// for the flat complex systems Q = (Re z, Im z), P = (-2 Re pi, 2 Im pi),
/// which turns {pi,z}=1 into textbook pairs with H = T(P) + V(Q).
struct SeparableForm {
    std::function<void(const double Q[2], const double P[2], double dTdP[2])> dT_dP;
    std::function<void(const double Q[2], double dVdQ[2])> dV_dQ;
};

struct HamiltonianSystem {
    std::string name;
    BracketStructure structure;
    Observable h;
    std::vector<Observable> conserved;
    SeparableForm separable;  // only set for flat separable systems
    bool has_separable = false;
};

enum class Method { SplitSymplectic, ImplicitMidpoint };

struct IntegratorConfig {
    Method method = Method::ImplicitMidpoint;
    double dt = 1e-3;
    double t_end = 1.0;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    int record_every = 1;
};

// ---------------------------------------------------------------------------
// System factories
// ---------------------------------------------------------------------------

namespace detail {

inline Observable obs(std::string name, std::function<double(const PhaseState&)> f,
                      std::function<std::vector<double>(const PhaseState&)> g = nullptr) {
    Observable o;
    o.name = std::move(name);
    o.eval = std::move(f);
    o.grad = std::move(g);
    return o;
}

}  // namespace detail

/// H = omega(pi pibar + z zbar); conserved: J = i(pi z - c.c.) and the real
/// su(2) pair K1, K2 built from I± = omega(pi^2 - zbar^2) and its conjugate.
inline HamiltonianSystem oscillator2d(const Params& par) {
    HamiltonianSystem sys;
    sys.name = "oscillator2d";
    sys.structure = {BracketKind::CanonicalComplex, par, Signature::Sphere};
    const double om = par.omega;
    sys.h = detail::obs(
        "H_osc",
        [om](const PhaseState& st) {
            return om * (std::norm(st.c_at(1)) + std::norm(st.c_at(0)));
        },
        [om](const PhaseState& st) {
            return std::vector<double>{2 * om * st.coords[0], 2 * om * st.coords[1],
                                       2 * om * st.coords[2], 2 * om * st.coords[3]};
        });
    sys.conserved.push_back(detail::obs("J", [](const PhaseState& st) {
        return -2.0 * std::imag(st.c_at(1) * st.c_at(0));  // i(pi z - c.c.)
    }));
    sys.conserved.push_back(detail::obs("K1", [om](const PhaseState& st) {
        const cplx ip = om * (st.c_at(1) * st.c_at(1) + std::conj(st.c_at(0) * st.c_at(0)));
        return ip.real();  // (I+ + I-)/2
    }));
    sys.conserved.push_back(detail::obs("K2", [om](const PhaseState& st) {
        const cplx ip = om * (st.c_at(1) * st.c_at(1) + std::conj(st.c_at(0) * st.c_at(0)));
        return ip.imag();  // (I+ - I-)/2i
    }));
    sys.separable.dT_dP = [om](const double*, const double P[2], double d[2]) {
        d[0] = 0.5 * om * P[0];
        d[1] = 0.5 * om * P[1];
    };
    sys.separable.dV_dQ = [om](const double Q[2], double d[2]) {
        d[0] = 2.0 * om * Q[0];
        d[1] = 2.0 * om * Q[1];
    };
    sys.has_separable = true;
    return sys;
}

/// H = 2 p pbar/mu + hbar^2 sigma^2/(2 mu |w|^2) - alpha/|w| on (w, p); the
/// sigma term is the vortex centrifugal shift (sigma = 0 is plain Coulomb).
/// Conserved: L = 2 Im(w p) and the Runge-Lenz pair (sigma = 0 only).
inline HamiltonianSystem vortex2d(const Params& par, std::string name = "vortex2d") {
    HamiltonianSystem sys;
    sys.name = std::move(name);
    sys.structure = {BracketKind::CanonicalComplex, par, Signature::Sphere};
    const double mu = par.mu, al = par.alpha;
    const double cs = par.hbar * par.hbar * par.sigma * par.sigma / (2.0 * par.mu);
    sys.h = detail::obs(
        "H_C",
        [mu, al, cs](const PhaseState& st) {
            const double r2 = std::norm(st.c_at(0));
            const double r = std::sqrt(r2);
            if (r == 0.0) throw std::domain_error("H_C: collision with the center");
            return 2.0 * std::norm(st.c_at(1)) / mu + cs / r2 - al / r;
        },
        [mu, al, cs](const PhaseState& st) {
            const double r2 = std::norm(st.c_at(0));
            const double r = std::sqrt(r2);
            if (r == 0.0) throw std::domain_error("H_C: collision with the center");
            const double radial = -2.0 * cs / (r2 * r2) + al / (r2 * r);
            return std::vector<double>{radial * st.coords[0], radial * st.coords[1],
                                       4.0 * st.coords[2] / mu, 4.0 * st.coords[3] / mu};
        });
    sys.conserved.push_back(detail::obs("L", [](const PhaseState& st) {
        return 2.0 * std::imag(st.c_at(0) * st.c_at(1));
    }));
    if (par.sigma == 0.0) {
        auto rl = [mu, al](const PhaseState& st, bool x_comp) {
            const double x = st.coords[0], y = st.coords[1];
            const double px = -2.0 * st.coords[2], py = 2.0 * st.coords[3];
            const double L = x * py - y * px;
            const double r = std::hypot(x, y);
            if (r == 0.0) throw std::domain_error("Runge-Lenz: collision with the center");
            return x_comp ? py * L - mu * al * x / r : -px * L - mu * al * y / r;
        };
        sys.conserved.push_back(
            detail::obs("A_x", [rl](const PhaseState& st) { return rl(st, true); }));
        sys.conserved.push_back(
            detail::obs("A_y", [rl](const PhaseState& st) { return rl(st, false); }));
    }
    sys.separable.dT_dP = [mu](const double*, const double P[2], double d[2]) {
        d[0] = P[0] / mu;
        d[1] = P[1] / mu;
    };
    sys.separable.dV_dQ = [al, cs](const double Q[2], double d[2]) {
        const double r2 = Q[0] * Q[0] + Q[1] * Q[1];
        const double r = std::sqrt(r2);
        if (r == 0.0) throw std::domain_error("vortex2d: collision with the center");
        const double radial = -2.0 * cs / (r2 * r2) + al / (r2 * r);
        d[0] = radial * Q[0];
        d[1] = radial * Q[1];
    };
    sys.has_separable = true;
    return sys;
}

inline HamiltonianSystem coulomb2d(const Params& par) {
    Params p = par;
    p.sigma = 0.0;
    return vortex2d(p, "coulomb2d");
}

/// Charge-dyon: H = p^2/2mu - s^2/(2 mu q^2) + alpha/|q| on the twisted
/// 3-space; conserved rotation generators J^a = eps^{abc} p_b q_c + s q^a/|q|.
inline HamiltonianSystem dyon3d(const Params& par) {
    HamiltonianSystem sys;
    sys.name = "dyon3d";
    sys.structure = {BracketKind::R3Twisted, par, Signature::Sphere};
    const double mu = par.mu, al = par.alpha, s = par.s;
    sys.h = detail::obs(
        "H_dyon",
        [mu, al, s](const PhaseState& st) {
            const auto& x = st.coords;
            const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            const double r = std::sqrt(r2);
            if (r == 0.0) throw std::domain_error("H_dyon: origin excluded");
            const double p2 = x[3] * x[3] + x[4] * x[4] + x[5] * x[5];
            return 0.5 * p2 / mu - 0.5 * s * s / (mu * r2) + al / r;
        },
        [mu, al, s](const PhaseState& st) {
            const auto& x = st.coords;
            const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            const double r = std::sqrt(r2);
            if (r == 0.0) throw std::domain_error("H_dyon: origin excluded");
            const double radial = s * s / (mu * r2 * r2) - al / (r2 * r);
            std::vector<double> g(6);
            for (int a = 0; a < 3; ++a) {
                g[a] = radial * x[a];
                g[3 + a] = x[3 + a] / mu;
            }
            return g;
        });
    for (int a = 0; a < 3; ++a) {
        sys.conserved.push_back(detail::obs("J" + std::to_string(a + 1), [a, s](const PhaseState& st) {
            const auto& x = st.coords;
            const double r = std::hypot(x[0], x[1], x[2]);
            const int b = (a + 1) % 3, c = (a + 2) % 3;
            return x[3 + b] * x[c] - x[3 + c] * x[b] + s * x[a] / r;
        }));
    }
    return sys;
}

/// Free particle on the (pseudo)sphere in the monopole field: H = g^{-1} w wbar
/// on the twisted reduced chart. The bracket twist carries 2s (the audited
/// normalization); the generator observables use the physical spin s.
inline HamiltonianSystem surface_monopole(const Params& par, Signature sig) {
    HamiltonianSystem sys;
    sys.name = sig == Signature::Sphere ? "sphere_monopole" : "pseudosphere_monopole";
    Params twist = par;
    twist.s = 2.0 * par.s;  // {w,wbar} = i (2s/m) g
    sys.structure = {BracketKind::ReducedChart, twist, sig};
    const double m = par.m;
    const double eps = signature_eps(sig);
    sys.h = detail::obs(
        "H_free",
        [m, eps](const PhaseState& st) {
            const double opp = 1.0 + eps * std::norm(st.c_at(0));
            return opp * opp / m * std::norm(st.c_at(1));
        },
        [m, eps](const PhaseState& st) {
            const double pp = std::norm(st.c_at(0));
            const double ww = std::norm(st.c_at(1));
            const double opp = 1.0 + eps * pp;
            std::vector<double> g(4);
            g[0] = 4.0 * eps * opp * ww / m * st.coords[0];
            g[1] = 4.0 * eps * opp * ww / m * st.coords[1];
            g[2] = 2.0 * opp * opp / m * st.coords[2];
            g[3] = 2.0 * opp * opp / m * st.coords[3];
            return g;
        });
    Params pcopy = par;
    for (int a = 0; a < 3; ++a) {
        sys.conserved.push_back(detail::obs("J" + std::to_string(a + 1), [a, pcopy](const PhaseState& st) {
            return reduced_generators(st, pcopy).J_vec[a];
        }));
    }
    return sys;
}

inline HamiltonianSystem sphere_monopole(const Params& par) {
    return surface_monopole(par, Signature::Sphere);
}
inline HamiltonianSystem pseudosphere_monopole(const Params& par) {
    return surface_monopole(par, Signature::Pseudosphere);
}

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

/// xdot = J(x) grad H(x) (so that fdot = {f, H} with our bracket orientation).
inline std::vector<double> hamiltonian_vector_field(const HamiltonianSystem& sys,
                                                    const PhaseState& st) {
    const auto gh = gradient_of(sys.h, st);
    std::vector<double> J;
    sys.structure.poisson_tensor(st.coords, J);
    const std::size_t n = st.coords.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += J[i * n + j] * gh[j];
    return out;
}

namespace detail {

// dense Gaussian elimination with partial pivoting, dims <= 8
inline void solve_linear(std::vector<double>& A, std::vector<double>& b, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(A[i * n + k]) > std::fabs(A[piv * n + k])) piv = i;
        if (std::fabs(A[piv * n + k]) < 1e-300)
            throw std::runtime_error("implicit midpoint: singular Newton system");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A[k * n + j], A[piv * n + j]);
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = A[i * n + k] / A[k * n + k];
            for (std::size_t j = k; j < n; ++j) A[i * n + j] -= f * A[k * n + j];
            b[i] -= f * b[k];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= A[i * n + j] * b[j];
        b[i] = acc / A[i * n + i];
    }
}

inline PhaseState midpoint_step(const HamiltonianSystem& sys, const PhaseState& st, double dt,
                                double tol, int max_iter) {
    const std::size_t n = st.coords.size();
    PhaseState next = st;  // predictor: explicit Euler
    {
        const auto f = hamiltonian_vector_field(sys, st);
        for (std::size_t i = 0; i < n; ++i) next.coords[i] = st.coords[i] + dt * f[i];
    }
    PhaseState mid = st;
    auto residual = [&](const PhaseState& cand, std::vector<double>& r) {
        for (std::size_t i = 0; i < n; ++i) mid.coords[i] = 0.5 * (st.coords[i] + cand.coords[i]);
        const auto f = hamiltonian_vector_field(sys, mid);
        for (std::size_t i = 0; i < n; ++i) r[i] = cand.coords[i] - st.coords[i] - dt * f[i];
    };
    std::vector<double> r(n), r2(n), Jac(n * n);
    for (int it = 0; it < max_iter; ++it) {
        residual(next, r);
        double rn = 0.0;
        for (double v : r) rn = std::max(rn, std::fabs(v));
        if (rn < tol) return next;
        // finite-difference Jacobian of the residual
        PhaseState probe = next;
        for (std::size_t j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::fabs(next.coords[j]));
            probe.coords[j] = next.coords[j] + h;
            residual(probe, r2);
            probe.coords[j] = next.coords[j];
            for (std::size_t i = 0; i < n; ++i) Jac[i * n + j] = (r2[i] - r[i]) / h;
        }
        std::vector<double> rhs = r;
        solve_linear(Jac, rhs, n);
        for (std::size_t i = 0; i < n; ++i) next.coords[i] -= rhs[i];
    }
    throw std::runtime_error("implicit midpoint: Newton did not converge");
}

inline void leapfrog_steps(const HamiltonianSystem& sys, PhaseState& st, double dt, int n_steps,
                           const std::function<void(int, const PhaseState&)>& record) {
    // canonical pairs: Q = (Re z, Im z), P = (-2 Re pi, 2 Im pi)
    double Q[2] = {st.coords[0], st.coords[1]};
    double P[2] = {-2.0 * st.coords[2], 2.0 * st.coords[3]};
    double f[2];
    auto sync = [&]() {
        st.coords[0] = Q[0];
        st.coords[1] = Q[1];
        st.coords[2] = -0.5 * P[0];
        st.coords[3] = 0.5 * P[1];
    };
    sys.separable.dV_dQ(Q, f);
    for (int k = 0; k < n_steps; ++k) {
        P[0] -= 0.5 * dt * f[0];
        P[1] -= 0.5 * dt * f[1];
        double v[2];
        sys.separable.dT_dP(Q, P, v);
        Q[0] += dt * v[0];
        Q[1] += dt * v[1];
        sys.separable.dV_dQ(Q, f);
        P[0] -= 0.5 * dt * f[0];
        P[1] -= 0.5 * dt * f[1];
        sync();
        record(k + 1, st);
    }
}

}  // namespace detail

/// Sphere chart hysteresis: switch charts only once |p| leaves [0.9, 1.1].
inline bool maybe_switch_chart(PhaseState& st, const Params&) {
    if (st.space != Space::SphereChart0 && st.space != Space::SphereChart1) return false;
    const double ap = std::abs(st.c_at(0));
    if (ap <= 1.1) return false;
    const cplx p = st.c_at(0), w = st.c_at(1);
    st.set_c(0, 1.0 / p);
    st.set_c(1, -p * p * w);
    st.chart = 1 - st.chart;
    st.space = st.chart == 0 ? Space::SphereChart0 : Space::SphereChart1;
    return true;
}

/// Integrates without recording; dt may be negative (time reversal).
inline PhaseState integrate_steps(const HamiltonianSystem& sys, PhaseState st, double dt,
                                  int n_steps, const IntegratorConfig& cfg = {}) {
    if (sys.has_separable && cfg.method == Method::SplitSymplectic) {
        detail::leapfrog_steps(sys, st, dt, n_steps, [](int, const PhaseState&) {});
        return st;
    }
    for (int k = 0; k < n_steps; ++k) {
        st = detail::midpoint_step(sys, st, dt, cfg.newton_tol, cfg.newton_max_iter);
        maybe_switch_chart(st, sys.structure.params);
    }
    return st;
}

/// Integrates and records every cfg.record_every-th step (plus the start).
inline Trajectory flow(const HamiltonianSystem& sys, const PhaseState& start,
                       const IntegratorConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("flow: dt must be positive");
    if (!(cfg.t_end > 0.0)) throw std::invalid_argument("flow: t_end must be positive");
    const int n_steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    Trajectory out;
    out.system = sys.name;
    out.params = sys.structure.params;
    out.push_back(0.0, start);
    auto record = [&](int k, const PhaseState& st) {
        if (k % cfg.record_every == 0) out.push_back(k * cfg.dt, st);
    };
    if (sys.has_separable && cfg.method == Method::SplitSymplectic) {
        PhaseState st = start;
        detail::leapfrog_steps(sys, st, cfg.dt, n_steps, record);
        return out;
    }
    PhaseState st = start;
    for (int k = 1; k <= n_steps; ++k) {
        st = detail::midpoint_step(sys, st, cfg.dt, cfg.newton_tol, cfg.newton_max_iter);
        maybe_switch_chart(st, sys.structure.params);
        record(k, st);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct DriftEntry {
    std::string name;
    double initial = 0.0;
    double max_abs = 0.0;
    double max_rel = 0.0;
};

struct DriftReport {
    std::vector<DriftEntry> entries;

    double worst_rel() const {
        double v = 0.0;
        for (const auto& e : entries) v = std::max(v, e.max_rel);
        return v;
    }
    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& e : entries)
            j.push_back({{"name", e.name},
                         {"initial", e.initial},
                         {"max_abs_drift", e.max_abs},
                         {"max_rel_drift", e.max_rel}});
        return j;
    }
};

inline DriftReport drift_report(const Trajectory& traj, const std::vector<Observable>& obs) {
    if (traj.empty()) throw std::invalid_argument("drift_report: empty trajectory");
    DriftReport rep;
    for (const auto& o : obs) {
        DriftEntry e;
        e.name = o.name;
        e.initial = o(traj.states.front());
        for (const auto& st : traj.states)
            e.max_abs = std::max(e.max_abs, std::fabs(o(st) - e.initial));
        e.max_rel = e.max_abs / std::max(1.0, std::fabs(e.initial));
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

/// First-return time to the Poincare section through the start point,
/// normal to the initial velocity, refined by linear interpolation.
inline double period_estimate(const Trajectory& traj) {
    if (traj.size() < 8) throw std::invalid_argument("period_estimate: too few samples");
    const auto& x0 = traj.states.front().coords;
    const std::size_t n = x0.size();
    std::vector<double> nvec(n);
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        nvec[i] = traj.states[1].coords[i] - x0[i];
        nn += nvec[i] * nvec[i];
    }
    nn = std::sqrt(nn);
    if (nn == 0.0) throw std::invalid_argument("period_estimate: stationary start");
    for (auto& v : nvec) v /= nn;
    auto section = [&](const PhaseState& st) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += (st.coords[i] - x0[i]) * nvec[i];
        return acc;
    };
    bool left = false;
    double prev = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double cur = section(traj.states[i]);
        if (!left) {
            if (cur < -1e-9) left = true;  // wait until the orbit has crossed below
        } else if (prev < 0.0 && cur >= 0.0) {
            const double t0 = traj.times[i - 1], t1 = traj.times[i];
            return t0 + (0.0 - prev) / (cur - prev) * (t1 - t0);
        }
        prev = cur;
    }
    throw std::runtime_error("period_estimate: no return within the horizon");
}

}  // namespace bohlin
