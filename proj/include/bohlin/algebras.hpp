// Built-in algebra specifications (su(2) oscillator integrals, reduced
// e(3)/iso(1,2) generators) and declarative JSON loading of relation sets.
#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bohlin/core.hpp"
#include "bohlin/poisson.hpp"
#include "bohlin/reduction.hpp"

namespace bohlin {

/// Chart bracket structure carrying the audited twist {w,wbar} = i(2s/m)g for
/// physical spin par.s (the structure's own twist parameter is doubled).
inline BracketStructure reduced_chart_structure(const Params& par, Signature sig) {
    Params twist = par;
    twist.s = 2.0 * par.s;
    return {BracketKind::ReducedChart, twist, sig};
}

/// su(2) of the oscillator in the real basis K1 = (I+ + I-)/2,
/// K2 = (I+ - I-)/2i, Jt = 2 Im(pi z), with I± = omega(pi^2 - zbar^2):
///   {K1,K2} = 2 omega^2 Jt, {K1,Jt} = 2 K2, {K2,Jt} = -2 K1.
/// All gradients analytic, so audits resolve to rounding noise.
inline AlgebraSpec su2_spec(const Params& par) {
    const double om = par.omega;
    AlgebraSpec spec;
    spec.name = "su2";
    // K1 + i K2 = omega (pi^2 + zbar^2): conserved along the oscillator flow
    // and closing with J = -2 Im(pi z) into the cyclic su(2) set below
    Observable k1{"K1",
                  [om](const PhaseState& st) {
                      const auto& x = st.coords;
                      return om * (x[2] * x[2] - x[3] * x[3] + x[0] * x[0] - x[1] * x[1]);
                  },
                  [om](const PhaseState& st) {
                      const auto& x = st.coords;
                      return std::vector<double>{2 * om * x[0], -2 * om * x[1], 2 * om * x[2],
                                                 -2 * om * x[3]};
                  }};
    Observable k2{"K2",
                  [om](const PhaseState& st) {
                      const auto& x = st.coords;
                      return 2.0 * om * (x[2] * x[3] - x[0] * x[1]);
                  },
                  [om](const PhaseState& st) {
                      const auto& x = st.coords;
                      return std::vector<double>{-2 * om * x[1], -2 * om * x[0], 2 * om * x[3],
                                                 2 * om * x[2]};
                  }};
    Observable jg{"J",
                  [](const PhaseState& st) {
                      const auto& x = st.coords;
                      return -2.0 * (x[2] * x[1] + x[3] * x[0]);
                  },
                  [](const PhaseState& st) {
                      const auto& x = st.coords;
                      return std::vector<double>{-2 * x[3], -2 * x[2], -2 * x[1], -2 * x[0]};
                  }};
    spec.generators = {ComplexObservable::wrap_real(k1), ComplexObservable::wrap_real(k2),
                       ComplexObservable::wrap_real(jg)};
    spec.relations = {
        {"{K1,K2} = 2 omega^2 J", "K1", "K2", {{2.0 * om * om, "J"}}},
        {"{K2,J} = 2 K1", "K2", "J", {{2.0, "K1"}}},
        {"{J,K1} = 2 K2", "J", "K1", {{2.0, "K2"}}},
    };
    return spec;
}

/// e(3) (sphere) / iso(1,2) (pseudosphere) over the reduced generators:
/// {P^a,P^b}=0, {P^a,J^b}=eps^{abc} eta_c P^c, {J^a,J^b}=eps^{abc} eta_c J^c
/// with eta = diag(1,1,1) resp. diag(1,-1,-1). Finite-difference gradients.
inline AlgebraSpec reduced_algebra_spec(const Params& par, Signature sig) {
    AlgebraSpec spec;
    spec.name = sig == Signature::Sphere ? "e3" : "iso12";
    for (int a = 0; a < 3; ++a) {
        Observable pa{"P" + std::to_string(a + 1),
                      [a, par, sig](const PhaseState& st) {
                          return reduced_generators(st.c_at(0), st.c_at(1), par, sig).P_vec[a];
                      },
                      nullptr};
        Observable ja{"J" + std::to_string(a + 1),
                      [a, par, sig](const PhaseState& st) {
                          return reduced_generators(st.c_at(0), st.c_at(1), par, sig).J_vec[a];
                      },
                      nullptr};
        spec.generators.push_back(ComplexObservable::wrap_real(pa));
        spec.generators.push_back(ComplexObservable::wrap_real(ja));
    }
    const auto eta = detail::metric_diag(sig);
    auto eps3 = [](int a, int b, int c) {
        return ((b - a + 3) % 3 == 1 && (c - b + 3) % 3 == 1) ? 1.0
               : ((a - b + 3) % 3 == 1 && (b - c + 3) % 3 == 1) ? -1.0
                                                                : 0.0;
    };
    auto P = [](int a) { return "P" + std::to_string(a + 1); };
    auto J = [](int a) { return "J" + std::to_string(a + 1); };
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            spec.relations.push_back({"{" + P(a) + "," + P(b) + "} = 0", P(a), P(b), {}});
            const int c = 3 - a - b;
            spec.relations.push_back({"{" + P(a) + "," + J(b) + "} = eps eta " + P(c), P(a), J(b),
                                      {{eps3(a, b, c) * eta[c], P(c)}}});
            spec.relations.push_back({"{" + J(a) + "," + P(b) + "} = eps eta " + P(c), J(a), P(b),
                                      {{eps3(a, b, c) * eta[c], P(c)}}});
            spec.relations.push_back({"{" + J(a) + "," + J(b) + "} = eps eta " + J(c), J(a), J(b),
                                      {{eps3(a, b, c) * eta[c], J(c)}}});
        }
    return spec;
}

inline AlgebraSpec builtin_algebra(const std::string& name, const Params& par) {
    if (name == "su2") return su2_spec(par);
    if (name == "e3") return reduced_algebra_spec(par, Signature::Sphere);
    if (name == "iso12") return reduced_algebra_spec(par, Signature::Pseudosphere);
    throw std::invalid_argument("builtin_algebra: unknown algebra " + name);
}

inline BracketStructure builtin_algebra_structure(const std::string& name, const Params& par) {
    if (name == "su2") return {BracketKind::CanonicalComplex, par, Signature::Sphere};
    if (name == "e3") return reduced_chart_structure(par, Signature::Sphere);
    if (name == "iso12") return reduced_chart_structure(par, Signature::Pseudosphere);
    throw std::invalid_argument("builtin_algebra_structure: unknown algebra " + name);
}

/// Declarative relation file over the built-in generators:
/// {"base": "su2", "relations": [{"name": ..., "lhs": ["K1","K2"],
///   "rhs": [{"coeff": [re, im], "gen": "J"}]}]}
/// An absent "relations" keeps the built-in relation set.
inline AlgebraSpec load_algebra_json(const nlohmann::json& j, const Params& par) {
    if (!j.contains("base")) throw std::invalid_argument("algebra json: missing \"base\"");
    AlgebraSpec spec = builtin_algebra(j.at("base").get<std::string>(), par);
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();
    if (!j.contains("relations")) return spec;
    spec.relations.clear();
    for (const auto& rj : j.at("relations")) {
        Relation rel;
        rel.name = rj.value("name", "");
        rel.lhs_a = rj.at("lhs").at(0).get<std::string>();
        rel.lhs_b = rj.at("lhs").at(1).get<std::string>();
        spec.gen(rel.lhs_a);  // validate references
        spec.gen(rel.lhs_b);
        for (const auto& tj : rj.value("rhs", nlohmann::json::array())) {
            const auto& c = tj.at("coeff");
            cplx coeff = c.is_array() ? cplx{c.at(0).get<double>(), c.at(1).get<double>()}
                                      : cplx{c.get<double>(), 0.0};
            const std::string g = tj.at("gen").get<std::string>();
            spec.gen(g);
            rel.rhs.emplace_back(coeff, g);
        }
        if (rel.name.empty()) rel.name = "{" + rel.lhs_a + "," + rel.lhs_b + "}";
        spec.relations.push_back(std::move(rel));
    }
    return spec;
}

inline AlgebraSpec load_algebra_file(const std::string& path, const Params& par) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_algebra_file: cannot open " + path);
    nlohmann::json j;
    is >> j;
    return load_algebra_json(j, par);
}

}  // namespace bohlin
