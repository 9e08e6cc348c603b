// Bohlin / Z_N canonical maps, trajectory containers with CSV round-trip,
// the Zhukovski ellipse, winding numbers and the potential-power duality.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bohlin/core.hpp"

namespace bohlin {

struct Trajectory {
    std::string system;
    Params params;
    std::vector<double> times;
    std::vector<PhaseState> states;

    std::size_t size() const { return times.size(); }
    bool empty() const { return times.empty(); }
    void push_back(double t, PhaseState st) {
        if (!times.empty() && t <= times.back())
            throw std::invalid_argument("Trajectory: times must be strictly increasing");
        times.push_back(t);
        states.push_back(std::move(st));
    }
};

enum class MapKind { Bohlin, ZN };
enum class MapDirection { Forward, Inverse };

/// w = z^N, p = pi/(N z^{N-1}) and its branch-tracked inverse. Bohlin is N=2.
struct CanonicalMap {
    MapKind kind = MapKind::Bohlin;
    int N = 2;
    MapDirection direction = MapDirection::Forward;
    int branch = 0;  // inverse only: selects the N-th root at the first sample

    CanonicalMap() = default;
    CanonicalMap(MapKind k, int n, MapDirection dir = MapDirection::Forward, int br = 0)
        : kind(k), N(k == MapKind::Bohlin ? 2 : n), direction(dir), branch(br) {
        if (N < 1) throw std::invalid_argument("CanonicalMap: N must be >= 1");
        if (branch < 0 || branch >= N)
            throw std::invalid_argument("CanonicalMap: branch must lie in 0..N-1");
    }
};

namespace detail {

inline cplx pow_int(cplx z, int n) {
    cplx acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= z;
    return acc;
}

}  // namespace detail

/// Pointwise image. The inverse uses the principal argument offset by the
/// branch index; trajectory-level continuity is handled by map_trajectory.
inline PhaseState apply_map(const CanonicalMap& map, const PhaseState& st) {
    if (st.space != Space::FlatC)
        throw std::invalid_argument("apply_map: expected a flat complex state");
    const cplx a = st.c_at(0);
    const cplx b = st.c_at(1);
    if (std::abs(a) == 0.0)
        throw std::domain_error("apply_map: singular at the origin");
    const int N = map.N;
    if (map.direction == MapDirection::Forward) {
        const cplx zn1 = detail::pow_int(a, N - 1);
        return make_flatc(zn1 * a, b / (static_cast<double>(N) * zn1));
    }
    const double th = (std::arg(a) + 2.0 * kPi * map.branch) / N;
    const cplx z = std::pow(std::abs(a), 1.0 / N) * cplx{std::cos(th), std::sin(th)};
    const cplx zn1 = detail::pow_int(z, N - 1);
    return make_flatc(z, b * static_cast<double>(N) * zn1);
}

/// Canonical rescale (w,p) -> (lambda w, p/lambda) with lambda = 1/(2 mu omega),
/// completing the oscillator->Coulomb dictionary: the image of an E_osc orbit
/// has H_C = 2 p pbar / mu - E_osc/|w| constant at -2 mu omega^2.
inline PhaseState rescale_kepler(const PhaseState& st, const Params& par) {
    if (st.space != Space::FlatC)
        throw std::invalid_argument("rescale_kepler: expected a flat complex state");
    const double lambda = 1.0 / (2.0 * par.mu * par.omega);
    PhaseState out = st;
    out.set_c(0, st.c_at(0) * lambda);
    out.set_c(1, st.c_at(1) / lambda);
    return out;
}

/// Maps a trajectory pointwise with branch continuity for the inverse root.
/// With reparametrize, the output time is the fictitious time in which the
/// image solves the target Hamilton equations: for the forward Bohlin map
/// dtau/dt = |z|^2/(2 mu omega) (and the reciprocal factor for the inverse).
/// The paper asserts only trajectory equivalence; the time law is ours.
inline Trajectory map_trajectory(const CanonicalMap& map, const Trajectory& traj,
                                 bool reparametrize, const Params& par = {}) {
    if (reparametrize && map.kind != MapKind::Bohlin)
        throw std::invalid_argument("map_trajectory: reparametrization defined for the Bohlin map only");
    Trajectory out;
    out.system = traj.system + (map.direction == MapDirection::Forward ? ":mapped" : ":unmapped");
    out.params = traj.params;
    double tau = traj.times.empty() ? 0.0 : traj.times.front();
    double prev_rate = 0.0, prev_t = 0.0, prev_arg = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const PhaseState& st = traj.states[i];
        PhaseState img(Space::FlatC, {0, 0, 0, 0});
        if (map.direction == MapDirection::Forward) {
            img = apply_map(map, st);
        } else {
            // follow the continuous branch: unwrap the argument of w
            const cplx wv = st.c_at(0);
            double argw = std::arg(wv);
            if (i > 0) {
                while (argw - prev_arg > kPi) argw -= 2.0 * kPi;
                while (argw - prev_arg < -kPi) argw += 2.0 * kPi;
            }
            prev_arg = argw;
            const double th = (argw + 2.0 * kPi * map.branch) / map.N;
            const cplx z = std::pow(std::abs(wv), 1.0 / map.N) * cplx{std::cos(th), std::sin(th)};
            const cplx zn1 = detail::pow_int(z, map.N - 1);
            img = make_flatc(z, st.c_at(1) * static_cast<double>(map.N) * zn1);
        }
        const double t = traj.times[i];
        if (!reparametrize) {
            out.push_back(t, std::move(img));
            continue;
        }
        const double zsq = (map.direction == MapDirection::Forward)
                               ? std::norm(st.c_at(0))
                               : std::norm(img.c_at(0));
        double rate = zsq / (2.0 * par.mu * par.omega);
        if (map.direction == MapDirection::Inverse) rate = 1.0 / rate;
        if (i > 0) tau += 0.5 * (rate + prev_rate) * (t - prev_t);
        prev_rate = rate;
        prev_t = t;
        out.push_back(tau, std::move(img));
    }
    return out;
}

/// z = u + 1/u sampled over |u| = rho; its Bohlin image is the conic
/// w = u^2 + 1/u^2 + 2 with the attraction center w=0 at a focus.
inline Trajectory zhukovski_ellipse(double rho, int n_samples) {
    if (!(rho > 0.0) || rho == 1.0)
        throw std::invalid_argument("zhukovski_ellipse: |u| must be positive and != 1");
    if (n_samples < 3) throw std::invalid_argument("zhukovski_ellipse: need at least 3 samples");
    Trajectory out;
    out.system = "zhukovski";
    for (int k = 0; k <= n_samples; ++k) {  // closed: repeats the first point
        const double phi = 2.0 * kPi * k / n_samples;
        const cplx u = rho * cplx{std::cos(phi), std::sin(phi)};
        out.push_back(phi == 0.0 ? 0.0 : phi, make_flatc(u + 1.0 / u, 0.0));
    }
    return out;
}

/// Total argument change / 2pi of (samples - center), rounded. The input
/// must be closed (first == last within 1e-6) and avoid the center.
inline int winding_number(const Trajectory& traj, cplx center) {
    if (traj.size() < 3) throw std::invalid_argument("winding_number: too few samples");
    const cplx first = traj.states.front().c_at(0);
    const cplx last = traj.states.back().c_at(0);
    if (std::abs(first - last) > 1e-6)
        throw std::invalid_argument("winding_number: trajectory is not closed");
    double total = 0.0;
    cplx prev = first - center;
    if (std::abs(prev) == 0.0) throw std::domain_error("winding_number: sample at center");
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const cplx cur = traj.states[i].c_at(0) - center;
        if (std::abs(cur) == 0.0) throw std::domain_error("winding_number: sample at center");
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

struct PowerDual {
    double b;  // dual potential power: (a+2)(b+2) = 4
    double N;  // map order: N = 1 + a/2
};

inline PowerDual power_duality(double a) {
    if (!(a > -2.0)) throw std::domain_error("power_duality: requires a > -2");
    return {4.0 / (a + 2.0) - 2.0, 1.0 + a / 2.0};
}

// ---------------------------------------------------------------------------
// CSV round-trip: header t,re,im,pre,pim; 17 significant digits; LF endings.
// ---------------------------------------------------------------------------

inline void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "t,re,im,pre,pim\n";
    char buf[512];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& c = traj.states[i].coords;
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times[i],
                      c[0], c[1], c.size() > 2 ? c[2] : 0.0, c.size() > 3 ? c[3] : 0.0);
        os << buf;
    }
}

inline void write_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // binary: keep LF on every platform
    if (!os) throw std::runtime_error("write_csv: cannot open " + path);
    write_csv(traj, os);
}

inline Trajectory read_csv(std::istream& is, Space space = Space::FlatC) {
    Trajectory out;
    std::string line;
    if (!std::getline(is, line) || line.rfind("t,re,im", 0) != 0)
        throw std::runtime_error("read_csv: missing t,re,im,pre,pim header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> vals;
        std::string cell;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 5) throw std::runtime_error("read_csv: malformed row: " + line);
        out.push_back(vals[0], PhaseState(space, {vals[1], vals[2], vals[3], vals[4]}));
    }
    return out;
}

inline Trajectory read_csv_file(const std::string& path, Space space = Space::FlatC) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_csv: cannot open " + path);
    return read_csv(is, space);
}

}  // namespace bohlin
