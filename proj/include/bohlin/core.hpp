// Core value types shared by every module: physical parameters, phase-space
// points, chart conventions and validation.
//
// Unit conventions: hbar = mu = 1 by default and e = c = 1 throughout; all
// fields are overridable through Params.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bohlin {

using cplx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// Physical parameter record consumed by every module.
struct Params {
    double mu = 1.0;     ///< mass
    double omega = 1.0;  ///< oscillator frequency
    double alpha = 1.0;  ///< Coulomb coupling
    double hbar = 1.0;
    double s = 0.0;      ///< monopole charge / spin value
    double m = 1.0;      ///< moment-map value of the generator P
    double sigma = 0.0;  ///< vortex parameter, in [0,1)
};

enum class Space {
    FlatC,         // (z, pi) complex pair
    FlatC2,        // (pi0, pi1, om0, om1) complex
    R3Monopole,    // (q, p) real 3-vectors
    SphereChart0,
    SphereChart1,
    Pseudosphere,
};

inline std::size_t space_dim(Space s) {
    switch (s) {
        case Space::FlatC: return 4;
        case Space::FlatC2: return 8;
        case Space::R3Monopole: return 6;
        case Space::SphereChart0:
        case Space::SphereChart1:
        case Space::Pseudosphere: return 4;
    }
    return 0;
}

/// A point of one of the phase spaces, stored as a flat real coordinate tuple.
///
/// Coordinate orderings:
///   FlatC:        [Re z, Im z, Re pi, Im pi]
///   FlatC2:       [Re om0, Im om0, Re om1, Im om1, Re pi0, Im pi0, Re pi1, Im pi1]
///   R3Monopole:   [q1, q2, q3, p1, p2, p3]
///   charts:       [Re p, Im p, Re w, Im w]
struct PhaseState {
    Space space = Space::FlatC;
    std::vector<double> coords;
    int chart = 0;  // sphere only: 0 or 1

    PhaseState() = default;
    PhaseState(Space sp, std::vector<double> c, int ch = 0)
        : space(sp), coords(std::move(c)), chart(ch) {
        if (coords.size() != space_dim(sp))
            throw std::invalid_argument("PhaseState: coordinate count does not match space");
    }

    cplx c_at(std::size_t pair) const { return {coords[2 * pair], coords[2 * pair + 1]}; }
    void set_c(std::size_t pair, cplx v) {
        coords[2 * pair] = v.real();
        coords[2 * pair + 1] = v.imag();
    }
};

inline PhaseState make_flatc(cplx z, cplx pi) {
    return PhaseState(Space::FlatC, {z.real(), z.imag(), pi.real(), pi.imag()});
}

inline PhaseState make_chart(Space sp, cplx p, cplx w, int chart = 0) {
    return PhaseState(sp, {p.real(), p.imag(), w.real(), w.imag()}, chart);
}

enum class Signature { Sphere, Pseudosphere };

/// Round / hyperbolic Kaehler metric in stereographic coordinates:
/// g = m / (1 + p p^+)^2 with p^+ = +conj(p) (sphere) or -conj(p) (pseudosphere).
inline double metric_g(cplx p, Signature sig, double m) {
    const double pp = std::norm(p);
    const double opp = (sig == Signature::Sphere) ? 1.0 + pp : 1.0 - pp;
    if (opp == 0.0)
        throw std::domain_error("metric_g: evaluation on the pseudosphere boundary 1 - |p|^2 = 0");
    return m / (opp * opp);
}

struct Violation {
    std::string what;
    double margin = 0.0;  // signed distance to the admissible region where meaningful
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool pass() const { return violations.empty(); }
};

/// Checks the state and parameter invariants; report-valued, never throws.
inline ValidationReport validate(const PhaseState& st, const Params& par) {
    ValidationReport rep;
    auto add = [&rep](std::string w, double m = 0.0) {
        rep.violations.push_back({std::move(w), m});
    };
    if (!(par.mu > 0)) add("mu must be positive", par.mu);
    if (!(par.omega > 0)) add("omega must be positive", par.omega);
    if (!(par.hbar > 0)) add("hbar must be positive", par.hbar);
    if (par.sigma < 0.0 || par.sigma >= 1.0) add("sigma must lie in [0,1)", par.sigma);

    switch (st.space) {
        case Space::R3Monopole: {
            const double r = std::hypot(st.coords[0], st.coords[1], st.coords[2]);
            if (r <= 0.0) add("origin excluded: twist term is singular at |q| = 0", r);
            break;
        }
        case Space::Pseudosphere: {
            if (par.m == 0.0) add("m must be nonzero for a reduced system");
            const double ap = std::abs(st.c_at(0));
            if (par.m < 0 && ap >= 1.0)
                add("outside Poincare disk: |p| < 1 required at m < 0", ap - 1.0);
            if (par.m > 0 && ap <= 1.0)
                add("|p| > 1 required at m > 0", 1.0 - ap);
            break;
        }
        case Space::SphereChart0:
        case Space::SphereChart1:
            if (par.m == 0.0) add("m must be nonzero for a reduced system");
            break;
        case Space::FlatC: {
            if (std::abs(st.c_at(0)) == 0.0)
                add("origin excluded for canonical-map input: z = 0");
            break;
        }
        case Space::FlatC2:
            break;
    }
    return rep;
}

}  // namespace bohlin
