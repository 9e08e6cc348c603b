// Poisson brackets for the canonical and twisted structures of the library,
// plus numerical audits of algebra relations over sampled phase-space points.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bohlin/core.hpp"
#include "bohlin/observable.hpp"

namespace bohlin {

enum class BracketKind {
    CanonicalComplex,  // T*C:  {pi, z} = 1, {bar pi, bar z} = 1
    CanonicalC2,       // T*C^2: {pi^a, om_a} = 1 and conjugates
    R3Twisted,         // canonical + {p_a, p_b} = s eps_abc q^c / |q|^3
    ReducedChart,      // {p,w} = 1, {bar p, bar w} = 1, {w, bar w} = i (s/m) g(p)
};

/// The Poisson tensor of a system. For ReducedChart, `signature` selects the
/// sphere or pseudosphere metric entering the twist.
struct BracketStructure {
    BracketKind kind = BracketKind::CanonicalComplex;
    Params params;
    Signature signature = Signature::Sphere;  // ReducedChart only

    std::size_t dim() const {
        switch (kind) {
            case BracketKind::CanonicalComplex: return 4;
            case BracketKind::CanonicalC2: return 8;
            case BracketKind::R3Twisted: return 6;
            case BracketKind::ReducedChart: return 4;
        }
        return 0;
    }

    Space space() const {
        switch (kind) {
            case BracketKind::CanonicalComplex: return Space::FlatC;
            case BracketKind::CanonicalC2: return Space::FlatC2;
            case BracketKind::R3Twisted: return Space::R3Monopole;
            case BracketKind::ReducedChart:
                return signature == Signature::Sphere ? Space::SphereChart0
                                                      : Space::Pseudosphere;
        }
        return Space::FlatC;
    }

    /// Writes the antisymmetric tensor J with {x_i, x_j} = J[i*dim+j] at x.
    void poisson_tensor(const std::vector<double>& x, std::vector<double>& J) const {
        const std::size_t n = dim();
        J.assign(n * n, 0.0);
        auto set = [&](std::size_t i, std::size_t j, double v) {
            J[i * n + j] = v;
            J[j * n + i] = -v;
        };
        switch (kind) {
            case BracketKind::CanonicalComplex:
                // coords [zr, zi, pr, pi]; {pi,z}=1, {bar pi,bar z}=1
                set(2, 0, 0.5);
                set(3, 1, -0.5);
                break;
            case BracketKind::CanonicalC2:
                // coords [om0r, om0i, om1r, om1i, pi0r, pi0i, pi1r, pi1i]
                set(4, 0, 0.5);
                set(5, 1, -0.5);
                set(6, 2, 0.5);
                set(7, 3, -0.5);
                break;
            case BracketKind::R3Twisted: {
                for (std::size_t a = 0; a < 3; ++a) set(a, 3 + a, 1.0);
                const double r = std::hypot(x[0], x[1], x[2]);
                if (r == 0.0)
                    throw std::domain_error("R3Twisted bracket: origin excluded");
                const double c = params.s / (r * r * r);
                // {p_a, p_b} = s eps_abc q^c / |q|^3
                set(3 + 0, 3 + 1, c * x[2]);
                set(3 + 1, 3 + 2, c * x[0]);
                set(3 + 2, 3 + 0, c * x[1]);
                break;
            }
            case BracketKind::ReducedChart: {
                // coords [pr, pi, wr, wi]; {p,w}=1 -> {pr,wr}=1/2, {pi,wi}=-1/2
                set(0, 2, 0.5);
                set(1, 3, -0.5);
                // {w, bar w} = i (s/m) g  ->  {wr, wi} = -(s/m) g / 2
                const double g = metric_g(cplx{x[0], x[1]}, signature, params.m);
                set(2, 3, -0.5 * (params.s / params.m) * g);
                break;
            }
        }
    }
};

/// {f, g} at a point: grad(f)^T J grad(g).
inline double bracket(const BracketStructure& st, const Observable& f, const Observable& g,
                      const PhaseState& at, const FdOptions& fd = {}) {
    const auto gf = gradient_of(f, at, fd);
    const auto gg = gradient_of(g, at, fd);
    std::vector<double> J;
    st.poisson_tensor(at.coords, J);
    const std::size_t n = st.dim();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (gf[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += J[i * n + j] * gg[j];
        acc += gf[i] * row;
    }
    return acc;
}

/// Complex bracket by bilinearity over the real/imag parts.
inline cplx bracket_c(const BracketStructure& st, const ComplexObservable& f,
                      const ComplexObservable& g, const PhaseState& at,
                      const FdOptions& fd = {}) {
    const double rr = bracket(st, f.re, g.re, at, fd);
    const double ii = bracket(st, f.im, g.im, at, fd);
    const double ri = bracket(st, f.re, g.im, at, fd);
    const double ir = bracket(st, f.im, g.re, at, fd);
    return {rr - ii, ri + ir};
}

// ---------------------------------------------------------------------------
// Algebra audits
// ---------------------------------------------------------------------------

/// One relation {lhs_a, lhs_b} = sum_k coeff_k * gen_k.
struct Relation {
    std::string name;
    std::string lhs_a, lhs_b;
    std::vector<std::pair<cplx, std::string>> rhs;  // (coefficient, generator name)
};

struct AlgebraSpec {
    std::string name;
    std::vector<ComplexObservable> generators;
    std::vector<Relation> relations;

    const ComplexObservable& gen(const std::string& n) const {
        for (const auto& g : generators)
            if (g.name == n) return g;
        throw std::invalid_argument("AlgebraSpec: unknown generator " + n);
    }
};

struct RelationResult {
    std::string name;
    double max_abs = 0.0;
    double max_rel = 0.0;
    std::vector<double> worst_point;
};

struct AuditReport {
    std::string what;
    std::uint64_t seed = 0;
    int n_points = 0;
    std::vector<RelationResult> relations;

    double max_abs() const {
        double v = 0.0;
        for (const auto& r : relations) v = std::max(v, r.max_abs);
        return v;
    }
    bool all_below(double tol) const { return max_abs() <= tol; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["what"] = what;
        j["seed"] = seed;
        j["n_points"] = n_points;
        j["relations"] = nlohmann::json::array();
        for (const auto& r : relations) {
            j["relations"].push_back({{"name", r.name},
                                      {"max_abs_residual", r.max_abs},
                                      {"max_rel_residual", r.max_rel},
                                      {"worst_point", r.worst_point}});
        }
        return j;
    }
};

/// Deterministic per-index RNG so parallel sampling would not change reports.
inline std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(seed + 0x9E3779B97F4A7C15ull * (index + 1));
}

/// Uniform sample in a ball of radius 2 in chart coordinates; rejects points
/// outside the structure's validity domain (bounded retries).
inline PhaseState sample_point(const BracketStructure& st, std::uint64_t seed,
                               std::uint64_t index) {
    auto rng = rng_for(seed, index);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = st.dim();
    // the ball rejection accepts only ~1.6% of draws at dim 8, so be generous
    for (int attempt = 0; attempt < 65536; ++attempt) {
        std::vector<double> x(n);
        double r2 = 0.0;
        for (auto& xi : x) {
            xi = u(rng);
            r2 += xi * xi;
        }
        if (r2 > 1.0) continue;  // uniform in the unit ball, then scale
        for (auto& xi : x) xi *= 2.0;
        PhaseState cand(st.space(), std::move(x), 0);
        if (st.kind == BracketKind::R3Twisted) {
            // keep the twist factor bounded
            if (std::hypot(cand.coords[0], cand.coords[1], cand.coords[2]) < 0.25) continue;
        }
        if (st.kind == BracketKind::ReducedChart && st.signature == Signature::Pseudosphere) {
            const double ap = std::abs(cand.c_at(0));
            const bool inside = st.params.m < 0 ? ap < 0.9 : ap > 1.1;
            if (!inside) continue;
        }
        return cand;
    }
    throw std::runtime_error("sample_point: could not draw a valid point");
}

/// For each relation reports the worst |{f,g} - rhs| over n_points samples.
inline AuditReport audit_algebra(const BracketStructure& st, const AlgebraSpec& spec,
                                 int n_points, std::uint64_t seed,
                                 const FdOptions& fd = {1e-5, true}) {
    if (n_points < 1) throw std::invalid_argument("audit_algebra: n_points must be >= 1");
    AuditReport rep;
    rep.what = "algebra:" + spec.name;
    rep.seed = seed;
    rep.n_points = n_points;
    for (const auto& rel : spec.relations) {
        RelationResult rr;
        rr.name = rel.name;
        for (int k = 0; k < n_points; ++k) {
            const PhaseState pt = sample_point(st, seed, static_cast<std::uint64_t>(k));
            const cplx lhs = bracket_c(st, spec.gen(rel.lhs_a), spec.gen(rel.lhs_b), pt, fd);
            cplx rhs = 0.0;
            double scale = 0.0;
            for (const auto& [c, gname] : rel.rhs) {
                const cplx gv = spec.gen(gname)(pt);
                rhs += c * gv;
                scale = std::max(scale, std::abs(c * gv));
            }
            const double resid = std::abs(lhs - rhs);
            const double rel_resid = resid / std::max(1.0, std::max(scale, std::abs(lhs)));
            if (resid > rr.max_abs) {
                rr.max_abs = resid;
                rr.worst_point = pt.coords;
            }
            rr.max_rel = std::max(rr.max_rel, rel_resid);
        }
        rep.relations.push_back(std::move(rr));
    }
    return rep;
}

/// Max |{h, f}| over sampled points (conservation audit).
inline AuditReport check_conserved(const BracketStructure& st, const ComplexObservable& h,
                                   const ComplexObservable& f, int n_points, std::uint64_t seed,
                                   const FdOptions& fd = {1e-5, true}) {
    AlgebraSpec spec;
    spec.name = "conservation:{" + h.name + "," + f.name + "}";
    spec.generators = {h, f};
    Relation rel;
    rel.name = "{" + h.name + "," + f.name + "} = 0";
    rel.lhs_a = h.name;
    rel.lhs_b = f.name;
    AlgebraSpec s2 = spec;
    s2.relations.push_back(rel);
    return audit_algebra(st, s2, n_points, seed, fd);
}

}  // namespace bohlin
