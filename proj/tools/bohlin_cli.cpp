// Command-line front end: orbit integration, canonical maps, winding
// analysis, bracket/algebra audits, reduction audits and spectra.
//
// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.
// Errors are reported as JSON on stderr.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bohlin/algebras.hpp"
#include "bohlin/core.hpp"
#include "bohlin/dynamics.hpp"
#include "bohlin/poisson.hpp"
#include "bohlin/reduction.hpp"
#include "bohlin/spectra.hpp"
#include "bohlin/svg.hpp"
#include "bohlin/transforms.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

bohlin::cplx parse_cplx(const std::string& s) {
    double re = 0, im = 0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) != 2)
        throw std::invalid_argument("expected a complex value as re,im: " + s);
    return {re, im};
}

std::array<double, 3> parse_vec3(const std::string& s) {
    std::array<double, 3> v{};
    if (std::sscanf(s.c_str(), "%lf,%lf,%lf", &v[0], &v[1], &v[2]) != 3)
        throw std::invalid_argument("expected a 3-vector as x,y,z: " + s);
    return v;
}

double parse_rational(const std::string& s) {
    double num = 0, den = 0;
    if (std::sscanf(s.c_str(), "%lf/%lf", &num, &den) == 2) {
        if (den == 0.0) throw std::invalid_argument("rational with zero denominator: " + s);
        return num / den;
    }
    if (std::sscanf(s.c_str(), "%lf", &num) == 1) return num;
    throw std::invalid_argument("expected a rational or decimal: " + s);
}

/// JSON config merged under the flags: a key applies only when the
/// corresponding option was not given on the command line.
struct ConfigMerge {
    json j;

    void load(const std::string& path) {
        if (path.empty()) return;
        std::ifstream is(path);
        if (!is) throw std::invalid_argument("cannot open config " + path);
        is >> j;
    }
    template <class T>
    void apply(const CLI::Option* opt, const char* key, T& var) const {
        if (opt->count() == 0 && j.contains(key)) var = j.at(key).get<T>();
    }
};

void write_text(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output " + path);
    os << body;
}

json params_json(const bohlin::Params& p) {
    return {{"mu", p.mu},   {"omega", p.omega}, {"alpha", p.alpha}, {"hbar", p.hbar},
            {"s", p.s},     {"m", p.m},         {"sigma", p.sigma}};
}

struct ParamFlags {
    bohlin::Params par;
    CLI::Option *o_mu, *o_omega, *o_alpha, *o_hbar, *o_s, *o_m, *o_sigma;

    void attach(CLI::App* cmd) {
        o_mu = cmd->add_option("--mu", par.mu, "mass");
        o_omega = cmd->add_option("--omega", par.omega, "oscillator frequency");
        o_alpha = cmd->add_option("--alpha", par.alpha, "Coulomb coupling");
        o_hbar = cmd->add_option("--hbar", par.hbar, "reduced Planck constant");
        o_s = cmd->add_option("--s", par.s, "monopole charge / spin");
        o_m = cmd->add_option("--m", par.m, "moment value of P");
        o_sigma = cmd->add_option("--sigma-par", par.sigma, "vortex parameter in [0,1)");
    }
    void merge(const ConfigMerge& cfg) {
        cfg.apply(o_mu, "mu", par.mu);
        cfg.apply(o_omega, "omega", par.omega);
        cfg.apply(o_alpha, "alpha", par.alpha);
        cfg.apply(o_hbar, "hbar", par.hbar);
        cfg.apply(o_s, "s", par.s);
        cfg.apply(o_m, "m", par.m);
        cfg.apply(o_sigma, "sigma", par.sigma);
    }
};

bohlin::HamiltonianSystem make_system(const std::string& name, const bohlin::Params& par) {
    if (name == "oscillator2d") return bohlin::oscillator2d(par);
    if (name == "coulomb2d") return bohlin::coulomb2d(par);
    if (name == "vortex2d") return bohlin::vortex2d(par);
    if (name == "dyon3d") return bohlin::dyon3d(par);
    if (name == "sphere_monopole") return bohlin::sphere_monopole(par);
    if (name == "pseudosphere_monopole") return bohlin::pseudosphere_monopole(par);
    throw std::invalid_argument("unknown system " + name);
}

void require_valid(const bohlin::PhaseState& st, const bohlin::Params& par) {
    const auto rep = bohlin::validate(st, par);
    if (rep.pass()) return;
    std::string what = "invalid state/parameters:";
    for (const auto& v : rep.violations) what += " " + v.what + ";";
    throw std::invalid_argument(what);
}

// ---------------------------------------------------------------------------

int run_orbit(const std::string& system, const bohlin::Params& par, const std::string& z0,
              const std::string& pi0, const std::string& q0, const std::string& p0,
              const std::string& method, double dt, double t_end, int record_every,
              const std::string& format, const std::string& output) {
    auto sys = make_system(system, par);
    bohlin::PhaseState start;
    if (sys.structure.kind == bohlin::BracketKind::R3Twisted) {
        const auto q = parse_vec3(q0), p = parse_vec3(p0);
        start = bohlin::PhaseState(bohlin::Space::R3Monopole,
                                   {q[0], q[1], q[2], p[0], p[1], p[2]});
    } else {
        start = bohlin::PhaseState(sys.structure.space(), std::vector<double>(4, 0.0));
        start.set_c(0, parse_cplx(z0));
        start.set_c(1, parse_cplx(pi0));
    }
    require_valid(start, par);
    bohlin::IntegratorConfig cfg;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.record_every = record_every;
    if (method == "leapfrog")
        cfg.method = bohlin::Method::SplitSymplectic;
    else if (method == "midpoint")
        cfg.method = bohlin::Method::ImplicitMidpoint;
    else if (method == "auto")
        cfg.method = sys.has_separable ? bohlin::Method::SplitSymplectic
                                       : bohlin::Method::ImplicitMidpoint;
    else
        throw std::invalid_argument("unknown method " + method);

    const auto traj = bohlin::flow(sys, start, cfg);
    if (format == "csv") {
        std::ostringstream os;
        bohlin::write_csv(traj, os);
        write_text(output, os.str());
    } else if (format == "svg") {
        write_text(output, bohlin::emit_svg(traj));
    } else if (format == "json") {
        std::vector<bohlin::Observable> obs = sys.conserved;
        obs.insert(obs.begin(), sys.h);
        json out;
        out["config"] = {{"verb", "orbit"},   {"system", system},         {"dt", dt},
                         {"t_end", t_end},    {"method", method},         {"record_every", record_every},
                         {"params", params_json(par)}};
        out["n_samples"] = traj.size();
        out["drift"] = bohlin::drift_report(traj, obs).to_json();
        write_text(output, out.dump(2) + "\n");
    } else {
        throw std::invalid_argument("unknown format " + format);
    }
    return 0;
}

int run_transform(const std::string& map_name, bool inverse, int branch, bool reparametrize,
                  bool rescale, const bohlin::Params& par, const std::string& input,
                  const std::string& output) {
    bohlin::CanonicalMap map;
    if (map_name == "bohlin") {
        map = bohlin::CanonicalMap(bohlin::MapKind::Bohlin, 2,
                                   inverse ? bohlin::MapDirection::Inverse
                                           : bohlin::MapDirection::Forward,
                                   branch);
    } else if (map_name.size() > 1 && map_name[0] == 'z') {
        map = bohlin::CanonicalMap(bohlin::MapKind::ZN, std::stoi(map_name.substr(1)),
                                   inverse ? bohlin::MapDirection::Inverse
                                           : bohlin::MapDirection::Forward,
                                   branch);
    } else {
        throw std::invalid_argument("unknown map " + map_name + " (use bohlin or zN)");
    }
    auto traj = bohlin::read_csv_file(input);
    auto image = bohlin::map_trajectory(map, traj, reparametrize, par);
    if (rescale)
        for (auto& st : image.states) st = bohlin::rescale_kepler(st, par);
    std::ostringstream os;
    bohlin::write_csv(image, os);
    write_text(output, os.str());
    return 0;
}

int run_winding(const std::string& input, const std::string& center_s, const std::string& output) {
    const auto traj = bohlin::read_csv_file(input);
    const auto center = parse_cplx(center_s);
    const int n = bohlin::winding_number(traj, center);
    json out;
    out["config"] = {{"verb", "winding"},
                     {"input", input},
                     {"center", {center.real(), center.imag()}}};
    out["winding"] = n;
    write_text(output, out.dump(2) + "\n");
    return 0;
}

int run_bracket_check(const std::string& algebra, const std::string& algebra_file, int points,
                      std::uint64_t seed, const bohlin::Params& par, const std::string& output) {
    bohlin::AlgebraSpec spec = algebra_file.empty()
                                   ? bohlin::builtin_algebra(algebra, par)
                                   : bohlin::load_algebra_file(algebra_file, par);
    const auto structure = bohlin::builtin_algebra_structure(algebra, par);
    const auto rep = bohlin::audit_algebra(structure, spec, points, seed);
    json out;
    out["config"] = {{"verb", "bracket-check"}, {"algebra", algebra}, {"points", points},
                     {"seed", seed},            {"params", params_json(par)}};
    out["report"] = rep.to_json();
    out["max_abs_residual"] = rep.max_abs();
    write_text(output, out.dump(2) + "\n");
    return 0;
}

int run_reduce(const std::string& space, double m, double s, int samples, std::uint64_t seed,
               const std::string& gauge_name, const std::string& output) {
    const auto sig = [&] {
        if (space == "euclidean") return bohlin::Signature::Sphere;
        if (space == "split") return bohlin::Signature::Pseudosphere;
        throw std::invalid_argument("unknown space " + space + " (use euclidean|split)");
    }();
    if (m == 0.0) throw std::invalid_argument("m must be nonzero");
    if (sig == bohlin::Signature::Pseudosphere && m > 0.0)
        throw std::invalid_argument("split reduction audit expects m < 0 (Poincare disk chart)");
    bohlin::Params par;
    par.m = m;
    par.s = s;
    const auto gauge = [&] {
        if (gauge_name == "plus") return bohlin::GaugeChoice::GammaPlus;
        if (gauge_name == "minus") return bohlin::GaugeChoice::GammaMinus;
        if (gauge_name == "mean") return bohlin::GaugeChoice::GammaMean;
        throw std::invalid_argument("unknown gauge " + gauge_name + " (use plus|minus|mean)");
    }();

    const auto structure = bohlin::reduced_chart_structure(par, sig);
    const auto spec = bohlin::reduced_algebra_spec(par, sig);
    const auto algebra = bohlin::audit_algebra(structure, spec, samples, seed);

    const auto eta = (sig == bohlin::Signature::Sphere) ? std::array<double, 3>{1, 1, 1}
                                                        : std::array<double, 3>{1, -1, -1};
    const double eps_sig = bohlin::signature_eps(sig);
    double cas_p = 0.0, cas_pj = 0.0, top = 0.0;
    for (int k = 0; k < samples; ++k) {
        const auto pt = bohlin::sample_point(structure, seed, static_cast<std::uint64_t>(k));
        const auto gv = bohlin::reduced_generators(pt.c_at(0), pt.c_at(1), par, sig);
        double pp = 0.0, pj = 0.0, jj = 0.0;
        for (int a = 0; a < 3; ++a) {
            pp += eta[a] * gv.P_vec[a] * gv.P_vec[a];
            pj += eta[a] * gv.P_vec[a] * gv.J_vec[a];
            jj += eta[a] * gv.J_vec[a] * gv.J_vec[a];
        }
        const double g = bohlin::metric_g(pt.c_at(0), sig, m);
        const double h = std::norm(pt.c_at(1)) / g;
        cas_p = std::max(cas_p, std::fabs(pp - m * m) / (m * m));
        cas_pj = std::max(cas_pj, std::fabs(pj - m * s) / std::max(1.0, std::fabs(m * s)));
        top = std::max(top, std::fabs(m * h - eps_sig * (jj - s * s)) / std::max(1.0, std::fabs(m * h)));
    }

    json gauge_checks;
    const double radius = sig == bohlin::Signature::Sphere ? 1.0 : 0.5;
    const double loop = bohlin::loop_integral_gauge_diff(radius, par, 4096, sig);
    gauge_checks["gauge"] = gauge_name;
    gauge_checks["sample_potential"] = {
        {"p", {0.5, 0.0}},
        {"A", {bohlin::gauge_potential(gauge, 0.5, par, sig).real(),
               bohlin::gauge_potential(gauge, 0.5, par, sig).imag()}}};
    gauge_checks["loop_integral"] = {{"radius", radius},
                                     {"value", loop},
                                     {"expected", -4.0 * bohlin::kPi * m},
                                     {"residual", std::fabs(loop + 4.0 * bohlin::kPi * m)}};
    if (sig == bohlin::Signature::Sphere) {
        const double flux = bohlin::sphere_flux(par);
        gauge_checks["sphere_flux"] = {{"value", flux},
                                       {"expected", -4.0 * bohlin::kPi * s},
                                       {"residual", std::fabs(flux + 4.0 * bohlin::kPi * s)}};
    }
    const auto adm = bohlin::spin_quantization_check(s, sig);

    json out;
    out["config"] = {{"verb", "reduce"}, {"space", space}, {"m", m},       {"s", s},
                     {"samples", samples}, {"seed", seed},  {"gauge", gauge_name}};
    out["algebra"] = algebra.to_json();
    out["casimirs"] = {{"PP_minus_m2_rel", cas_p},
                       {"PJ_minus_ms_rel", cas_pj},
                       {"top_identity_rel", top}};
    out["gauge_checks"] = gauge_checks;
    out["admissibility"] = {{"admissible", adm.admissible},
                            {"exchange_phase", adm.exchange_phase},
                            {"reason", adm.reason}};
    write_text(output, out.dump(2) + "\n");
    return 0;
}

int run_spectrum(const std::string& sigma_s, int nr_max, double m_max, bool oracle,
                 bool as_printed, const std::string& format, double r_max, int grid_points,
                 const bohlin::Params& par, const std::string& output) {
    const double sigma = parse_rational(sigma_s);
    auto lines = bohlin::vortex_levels(sigma, nr_max, m_max, par, as_printed);
    std::map<double, std::vector<double>> oracle_by_nu;
    if (oracle) {
        bohlin::RadialGrid grid;
        grid.n_points = grid_points;
        grid.r_max = std::max(r_max, 20.0 * par.hbar * par.hbar * (nr_max + 2) * (nr_max + 2) /
                                         (par.mu * par.alpha));
        for (const auto& l : lines) {
            const double nu = std::fabs(l.m_sigma);
            if (!oracle_by_nu.count(nu))
                oracle_by_nu[nu] = bohlin::radial_oracle(sigma, nu, nr_max + 1, grid, par);
        }
    }
    auto oracle_of = [&](const bohlin::SpectralLine& l) {
        const auto it = oracle_by_nu.find(std::fabs(l.m_sigma));
        return it == oracle_by_nu.end() ? std::nan("") : it->second.at(l.Nr);
    };
    if (format == "csv") {
        std::ostringstream os;
        os << "Nr,m_sigma,E_formula,E_oracle,rel_err\n";
        char buf[256];
        for (const auto& l : lines) {
            const double eo = oracle_of(l);
            if (std::isnan(eo))
                std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,,\n", l.Nr, l.m_sigma, l.energy);
            else
                std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", l.Nr, l.m_sigma,
                              l.energy, eo, std::fabs((l.energy - eo) / eo));
            os << buf;
        }
        write_text(output, os.str());
    } else if (format == "json") {
        json out;
        out["config"] = {{"verb", "spectrum"}, {"sigma", sigma},     {"nr_max", nr_max},
                         {"m_max", m_max},     {"oracle", oracle},   {"as_printed", as_printed},
                         {"params", params_json(par)}};
        out["lines"] = json::array();
        for (const auto& l : lines) {
            json lj = {{"Nr", l.Nr},
                       {"m_sigma", l.m_sigma},
                       {"E_formula", l.energy},
                       {"degeneracy_tag", l.degeneracy_tag}};
            const double eo = oracle_of(l);
            if (!std::isnan(eo)) {
                lj["E_oracle"] = eo;
                lj["rel_err"] = std::fabs((l.energy - eo) / eo);
            }
            out["lines"].push_back(lj);
        }
        write_text(output, out.dump(2) + "\n");
    } else {
        throw std::invalid_argument("unknown format " + format);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oscillator-Coulomb duality, monopole reduction and vortex spectra toolkit"};
    app.require_subcommand(0, 1);
    bool about = false;
    app.add_flag("--about", about, "print version and capability map");

    // ---- orbit
    auto* orbit = app.add_subcommand("orbit", "integrate a Hamiltonian flow");
    std::string o_system = "oscillator2d", o_z0 = "1,0", o_pi0 = "0,0", o_q0 = "1,0,0",
                o_p0 = "0,1,0", o_method = "auto", o_format = "csv", o_output, o_config;
    double o_dt = 1e-3, o_tend = 6.2832;
    int o_record = 1;
    ParamFlags o_par;
    auto* oo_system = orbit->add_option("--system", o_system,
                                        "oscillator2d|coulomb2d|vortex2d|dyon3d|sphere_monopole|"
                                        "pseudosphere_monopole");
    auto* oo_z0 = orbit->add_option("--z0", o_z0, "initial z (or chart p) as re,im");
    auto* oo_pi0 = orbit->add_option("--pi0", o_pi0, "initial pi (or chart w) as re,im");
    auto* oo_q0 = orbit->add_option("--q0", o_q0, "initial position x,y,z (dyon3d)");
    auto* oo_p0 = orbit->add_option("--p0", o_p0, "initial momentum x,y,z (dyon3d)");
    auto* oo_dt = orbit->add_option("--dt", o_dt, "time step");
    auto* oo_tend = orbit->add_option("--t-end", o_tend, "integration horizon");
    auto* oo_method = orbit->add_option("--method", o_method, "auto|leapfrog|midpoint");
    auto* oo_record = orbit->add_option("--record-every", o_record, "sample stride");
    auto* oo_format = orbit->add_option("--format", o_format, "csv|svg|json");
    orbit->add_option("--output", o_output, "output path (default stdout)");
    orbit->add_option("--config", o_config, "JSON config merged under the flags");
    o_par.attach(orbit);

    // ---- transform
    auto* transform = app.add_subcommand("transform", "apply a canonical map to a trajectory");
    std::string t_map = "bohlin", t_input, t_output, t_config;
    bool t_inverse = false, t_reparam = false, t_rescale = false;
    int t_branch = 0;
    ParamFlags t_par;
    auto* to_map = transform->add_option("--map", t_map, "bohlin or zN (e.g. z3)");
    transform->add_option("--input", t_input, "input trajectory CSV")->required();
    transform->add_option("--output", t_output, "output path (default stdout)");
    auto* to_inverse = transform->add_flag("--inverse", t_inverse, "apply the inverse map");
    auto* to_branch = transform->add_option("--branch", t_branch, "inverse root branch");
    auto* to_reparam =
        transform->add_flag("--reparametrize", t_reparam, "fictitious-time reparametrization");
    auto* to_rescale = transform->add_flag("--rescale", t_rescale, "apply the Kepler rescale");
    transform->add_option("--config", t_config, "JSON config merged under the flags");
    t_par.attach(transform);

    // ---- winding
    auto* winding = app.add_subcommand("winding", "winding number of a closed trajectory");
    std::string w_input, w_center = "0,0", w_output, w_config;
    winding->add_option("--input", w_input, "input trajectory CSV")->required();
    auto* wo_center = winding->add_option("--center", w_center, "center as re,im");
    winding->add_option("--output", w_output, "output path (default stdout)");
    winding->add_option("--config", w_config, "JSON config merged under the flags");

    // ---- bracket-check
    auto* bracket = app.add_subcommand("bracket-check", "audit an algebra's relations");
    std::string b_algebra = "su2", b_file, b_output, b_config;
    int b_points = 100;
    std::uint64_t b_seed = 7;
    ParamFlags b_par;
    auto* bo_algebra = bracket->add_option("--algebra", b_algebra, "su2|e3|iso12");
    bracket->add_option("--algebra-file", b_file, "declarative relation JSON");
    auto* bo_points = bracket->add_option("--points", b_points, "sample count");
    auto* bo_seed = bracket->add_option("--seed", b_seed, "RNG seed");
    bracket->add_option("--output", b_output, "output path (default stdout)");
    bracket->add_option("--config", b_config, "JSON config merged under the flags");
    b_par.attach(bracket);

    // ---- reduce
    auto* reduce = app.add_subcommand("reduce", "reduction audit bundle");
    std::string r_space = "euclidean", r_gauge = "plus", r_output, r_config;
    double r_m = 1.0, r_s = 0.5;
    int r_samples = 100;
    std::uint64_t r_seed = 7;
    auto* ro_space = reduce->add_option("--space", r_space, "euclidean|split");
    auto* ro_m = reduce->add_option("--m", r_m, "moment value of P (nonzero)");
    auto* ro_s = reduce->add_option("--s", r_s, "spin value");
    auto* ro_samples = reduce->add_option("--samples", r_samples, "sample count");
    auto* ro_seed = reduce->add_option("--seed", r_seed, "RNG seed");
    auto* ro_gauge = reduce->add_option("--gauge", r_gauge, "plus|minus|mean");
    reduce->add_option("--output", r_output, "output path (default stdout)");
    reduce->add_option("--config", r_config, "JSON config merged under the flags");

    // ---- spectrum
    auto* spectrum = app.add_subcommand("spectrum", "vortex-Coulomb bound levels");
    std::string s_sigma = "0", s_format = "csv", s_output, s_config;
    int s_nrmax = 3, s_grid = 4000;
    double s_mmax = 3.0, s_rmax = 0.0;
    bool s_oracle = false, s_printed = false;
    ParamFlags s_par;
    auto* so_sigma = spectrum->add_option("--sigma", s_sigma, "vortex parameter (rational, e.g. 1/2)");
    auto* so_nrmax = spectrum->add_option("--nr-max", s_nrmax, "max radial quantum number");
    auto* so_mmax = spectrum->add_option("--m-max", s_mmax, "max |m_sigma|");
    auto* so_oracle = spectrum->add_flag("--oracle", s_oracle, "cross-check with the radial solver");
    auto* so_printed =
        spectrum->add_flag("--as-printed", s_printed, "use the source display prefactor C=1");
    auto* so_format = spectrum->add_option("--format", s_format, "csv|json");
    spectrum->add_flag("--csv", [&](std::int64_t) { s_format = "csv"; }, "CSV output");
    spectrum->add_flag("--json", [&](std::int64_t) { s_format = "json"; }, "JSON output");
    spectrum->add_option("--r-max", s_rmax, "oracle grid extent");
    spectrum->add_option("--grid-points", s_grid, "oracle grid points (Richardson doubles this)");
    spectrum->add_option("--output", s_output, "output path (default stdout)");
    spectrum->add_option("--config", s_config, "JSON config merged under the flags");
    s_par.attach(spectrum);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    }

    if (about) {
        std::cout << "bohlin " << kVersion << "\n"
                  << "verbs: orbit transform winding bracket-check reduce spectrum\n"
                  << "scope: oscillator-Coulomb canonical maps and Z_N duality, winding\n"
                  << "  analysis, Poisson-algebra audits (su2, e3, iso12), Hamiltonian\n"
                  << "  reduction to sphere/pseudosphere monopole charts with gauge and\n"
                  << "  spin-admissibility checks, and the magnetic-vortex Coulomb spectrum\n"
                  << "  with an independent radial eigensolver oracle.\n";
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << json{{"kind", "validation"}, {"error", "no verb given"}}.dump() << "\n";
        return 2;
    }

    try {
        if (orbit->parsed()) {
            ConfigMerge cfg;
            cfg.load(o_config);
            cfg.apply(oo_system, "system", o_system);
            cfg.apply(oo_z0, "z0", o_z0);
            cfg.apply(oo_pi0, "pi0", o_pi0);
            cfg.apply(oo_q0, "q0", o_q0);
            cfg.apply(oo_p0, "p0", o_p0);
            cfg.apply(oo_dt, "dt", o_dt);
            cfg.apply(oo_tend, "t_end", o_tend);
            cfg.apply(oo_method, "method", o_method);
            cfg.apply(oo_record, "record_every", o_record);
            cfg.apply(oo_format, "format", o_format);
            o_par.merge(cfg);
            return run_orbit(o_system, o_par.par, o_z0, o_pi0, o_q0, o_p0, o_method, o_dt, o_tend,
                             o_record, o_format, o_output);
        }
        if (transform->parsed()) {
            ConfigMerge cfg;
            cfg.load(t_config);
            cfg.apply(to_map, "map", t_map);
            cfg.apply(to_inverse, "inverse", t_inverse);
            cfg.apply(to_branch, "branch", t_branch);
            cfg.apply(to_reparam, "reparametrize", t_reparam);
            cfg.apply(to_rescale, "rescale", t_rescale);
            t_par.merge(cfg);
            return run_transform(t_map, t_inverse, t_branch, t_reparam, t_rescale, t_par.par,
                                 t_input, t_output);
        }
        if (winding->parsed()) {
            ConfigMerge cfg;
            cfg.load(w_config);
            cfg.apply(wo_center, "center", w_center);
            return run_winding(w_input, w_center, w_output);
        }
        if (bracket->parsed()) {
            ConfigMerge cfg;
            cfg.load(b_config);
            cfg.apply(bo_algebra, "algebra", b_algebra);
            cfg.apply(bo_points, "points", b_points);
            cfg.apply(bo_seed, "seed", b_seed);
            b_par.merge(cfg);
            return run_bracket_check(b_algebra, b_file, b_points, b_seed, b_par.par, b_output);
        }
        if (reduce->parsed()) {
            ConfigMerge cfg;
            cfg.load(r_config);
            cfg.apply(ro_space, "space", r_space);
            cfg.apply(ro_m, "m", r_m);
            cfg.apply(ro_s, "s", r_s);
            cfg.apply(ro_samples, "samples", r_samples);
            cfg.apply(ro_seed, "seed", r_seed);
            cfg.apply(ro_gauge, "gauge", r_gauge);
            return run_reduce(r_space, r_m, r_s, r_samples, r_seed, r_gauge, r_output);
        }
        if (spectrum->parsed()) {
            ConfigMerge cfg;
            cfg.load(s_config);
            cfg.apply(so_sigma, "sigma", s_sigma);
            cfg.apply(so_nrmax, "nr_max", s_nrmax);
            cfg.apply(so_mmax, "m_max", s_mmax);
            cfg.apply(so_oracle, "oracle", s_oracle);
            cfg.apply(so_printed, "as_printed", s_printed);
            cfg.apply(so_format, "format", s_format);
            s_par.merge(cfg);
            return run_spectrum(s_sigma, s_nrmax, s_mmax, s_oracle, s_printed, s_format, s_rmax,
                                s_grid, s_par.par, s_output);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << json{{"kind", "validation"}, {"error", e.what()}}.dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json{{"kind", "numerical"}, {"error", e.what()}}.dump() << "\n";
        return 3;
    }
    return 2;
}
