#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bohlin/algebras.hpp"
#include "bohlin/poisson.hpp"
#include "bohlin/reduction.hpp"

using namespace bohlin;

namespace {

FlatC2State random_state(std::uint64_t seed, Signature sig) {
    auto rng = rng_for(seed, 0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto draw = [&] { return cplx{u(rng), u(rng)}; };
    for (int attempt = 0; attempt < 256; ++attempt) {
        FlatC2State st{draw(), draw(), draw(), draw(), sig};
        if (sig == Signature::Pseudosphere) {
            // stay off the null cone |pi0| = |pi1| and keep m < 0 (disk chart)
            if (std::abs(st.pi1) < std::abs(st.pi0) + 0.1) continue;
        } else if (std::abs(st.pi0) < 0.2 && std::abs(st.pi1) < 0.2) {
            continue;
        }
        return st;
    }
    throw std::runtime_error("random_state: rejection failed");
}

Observable on_c2(std::string name, std::function<double(const FlatC2State&)> f, Signature sig) {
    return {std::move(name),
            [f, sig](const PhaseState& st) { return f(FlatC2State::from_phase(st, sig)); },
            nullptr};
}

}  // namespace

TEST_CASE("moment map anchors") {
    FlatC2State st{1.0, 0.0, 0.0, 0.0, Signature::Sphere};
    auto mv = moment_map(st);
    CHECK(mv.P == doctest::Approx(1.0));
    CHECK(mv.J == doctest::Approx(0.0));
    // split null vector
    FlatC2State null_pi{1.0, 1.0, 0.0, 0.0, Signature::Pseudosphere};
    CHECK(moment_map(null_pi).P == doctest::Approx(0.0));
    CHECK_THROWS_AS(charge_monopole_coords(null_pi), std::domain_error);
}

TEST_CASE("{P, J} = 0 on the flat space") {
    for (Signature sig : {Signature::Sphere, Signature::Pseudosphere}) {
        BracketStructure st{BracketKind::CanonicalC2, {}, sig};
        auto P = on_c2("P", [](const FlatC2State& s) { return moment_map(s).P; }, sig);
        auto J = on_c2("J", [](const FlatC2State& s) { return moment_map(s).J; }, sig);
        FdOptions fd;
        fd.richardson = true;
        for (int k = 0; k < 20; ++k) {
            const auto at = sample_point(st, 17, static_cast<std::uint64_t>(k));
            CHECK(std::fabs(bracket(st, P, J, at, fd)) < 1e-8);
        }
    }
}

TEST_CASE("projection anchors") {
    FlatC2State st{1.0, 0.0, 0.0, 0.0, Signature::Sphere};
    const auto pt = project(st);
    CHECK(std::abs(pt.p) == doctest::Approx(0.0));
    CHECK(std::abs(pt.w) == doctest::Approx(0.0));
    CHECK(pt.chart == 0);
    FlatC2State both_zero{0.0, 0.0, 1.0, 1.0, Signature::Sphere};
    CHECK_THROWS_AS(project(both_zero), std::domain_error);
}

TEST_CASE("projected coordinates satisfy the reduced brackets") {
    for (Signature sig : {Signature::Sphere, Signature::Pseudosphere}) {
        BracketStructure st{BracketKind::CanonicalC2, {}, sig};
        auto comp = [sig](const char* name, int which) {
            return on_c2(name,
                         [which](const FlatC2State& s) {
                             const auto pt = project(s);
                             switch (which) {
                                 case 0: return pt.p.real();
                                 case 1: return pt.p.imag();
                                 case 2: return pt.w.real();
                                 default: return pt.w.imag();
                             }
                         },
                         sig);
        };
        ComplexObservable P{"p", comp("p.re", 0), comp("p.im", 1)};
        ComplexObservable W{"w", comp("w.re", 2), comp("w.im", 3)};
        ComplexObservable Wb{"wbar", comp("wb.re", 2), comp("wb.im", 3)};
        Wb.im.eval = [e = Wb.im.eval](const PhaseState& s) { return -e(s); };
        FdOptions fd;
        fd.richardson = true;
        int used = 0;
        for (int k = 0; k < 200 && used < 40; ++k) {
            PhaseState at;
            try {
                at = sample_point(st, 29, static_cast<std::uint64_t>(k));
                const auto c2 = FlatC2State::from_phase(at, sig);
                const auto mv = moment_map(c2);
                if (std::fabs(mv.P) < 0.3) continue;  // keep the chart factors bounded
                if (sig == Signature::Sphere &&
                    std::fabs(std::abs(c2.pi0) - std::abs(c2.pi1)) < 0.1)
                    continue;  // stay away from the chart crossover kink
                ++used;
                const auto pt = project(c2);
                const double g = metric_g(pt.p, sig, pt.m);
                CHECK(std::abs(bracket_c(st, P, W, at, fd) - 1.0) < 1e-7);
                const cplx twist = cplx{0, 1} * (2.0 * pt.s / pt.m) * g;
                CHECK(std::abs(bracket_c(st, W, Wb, at, fd) - twist) < 1e-6);
                CHECK(std::abs(bracket_c(st, P, Wb, at, fd)) < 1e-7);
            } catch (const std::domain_error&) {
                continue;
            }
        }
        CHECK(used >= 30);
    }
}

TEST_CASE("lift is a section of project") {
    for (Signature sig : {Signature::Sphere, Signature::Pseudosphere}) {
        auto rng = rng_for(101, sig == Signature::Sphere ? 0 : 1);
        std::uniform_real_distribution<double> u(-0.8, 0.8);
        std::uniform_real_distribution<double> up(-0.6, 0.6);  // keep |p| inside the disk
        for (int k = 0; k < 50; ++k) {
            ReducedPoint pt;
            pt.p = {up(rng), up(rng)};
            pt.w = {u(rng), u(rng)};
            pt.chart = 0;
            pt.m = sig == Signature::Sphere ? 1.0 + 0.5 * u(rng) : -1.0 + 0.5 * u(rng);
            pt.s = u(rng);
            const auto fiber = lift(pt, sig);
            const auto back = project(fiber);
            CHECK(std::abs(back.p - pt.p) < 1e-11);
            CHECK(std::abs(back.w - pt.w) < 1e-11);
            CHECK(back.m == doctest::Approx(pt.m).epsilon(1e-11));
            CHECK(back.s == doctest::Approx(pt.s).epsilon(1e-11));
        }
    }
}

TEST_CASE("projection is constant along the fiber: project(lift(project(x))) = project(x)") {
    for (Signature sig : {Signature::Sphere, Signature::Pseudosphere}) {
        for (std::uint64_t k = 0; k < 20; ++k) {
            const auto st = random_state(200 + k, sig);
            const auto pt = project(st);
            if (pt.chart != 0) continue;  // lift produces chart-0 representatives
            const auto again = project(lift(pt, sig));
            CHECK(std::abs(again.p - pt.p) < 1e-10);
            CHECK(std::abs(again.w - pt.w) < 1e-10);
        }
    }
}

TEST_CASE("chart transition equals lift-relabel-project") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        auto rng = rng_for(300, k);
        std::uniform_real_distribution<double> u(-0.9, 0.9);
        // |p| > 1 so the reprojection of the exchanged fiber picks the other chart
        ReducedPoint pt{{u(rng) + 2.0, u(rng)}, {u(rng), u(rng)}, 0, 1.2, 0.4};
        const auto direct = chart_transition(pt);
        const auto via_fiber = project(lift(pt, Signature::Sphere).exchanged());
        CHECK(std::abs(direct.p - via_fiber.p) < 1e-10);
        CHECK(std::abs(direct.w - via_fiber.w) < 1e-10);
        // involution
        const auto back = chart_transition(direct);
        CHECK(std::abs(back.p - pt.p) < 1e-12);
        CHECK(std::abs(back.w - pt.w) < 1e-12);
    }
}

TEST_CASE("reduced generators: anchors and Casimirs") {
    Params par;
    par.m = 1.4;
    par.s = 0.6;
    const auto at_zero = reduced_generators(0.0, cplx{0.3, 0.2}, par, Signature::Sphere);
    CHECK(at_zero.P_vec[0] == doctest::Approx(0.0));
    CHECK(at_zero.P_vec[1] == doctest::Approx(0.0));
    CHECK(at_zero.P_vec[2] == doctest::Approx(par.m));
    for (Signature sig : {Signature::Sphere, Signature::Pseudosphere}) {
        Params p = par;
        if (sig == Signature::Pseudosphere) p.m = -1.4;
        const auto eta = sig == Signature::Sphere ? std::array<double, 3>{1, 1, 1}
                                                  : std::array<double, 3>{1, -1, -1};
        const auto structure = reduced_chart_structure(p, sig);
        for (int k = 0; k < 200; ++k) {
            const auto pt = sample_point(structure, 55, static_cast<std::uint64_t>(k));
            const auto gv = reduced_generators(pt.c_at(0), pt.c_at(1), p, sig);
            double pp = 0, pj = 0, jj = 0;
            for (int a = 0; a < 3; ++a) {
                pp += eta[a] * gv.P_vec[a] * gv.P_vec[a];
                pj += eta[a] * gv.P_vec[a] * gv.J_vec[a];
                jj += eta[a] * gv.J_vec[a] * gv.J_vec[a];
            }
            CHECK(std::fabs(pp - p.m * p.m) < 1e-9 * p.m * p.m);
            CHECK(std::fabs(pj - p.m * p.s) < 1e-9 * std::max(1.0, std::fabs(p.m * p.s)));
            // top identity m H = eps_sig (J.J - s^2), H = g^{-1} w wbar
            const double h = std::norm(pt.c_at(1)) / metric_g(pt.c_at(0), sig, p.m);
            CHECK(std::fabs(p.m * h - signature_eps(sig) * (jj - p.s * p.s)) <
                  1e-9 * std::max(1.0, std::fabs(p.m * h)));
        }
    }
}

TEST_CASE("e(3) and iso(1,2) audits over the reduced generators") {
    Params par;
    par.m = 1.0;
    par.s = 0.5;
    auto rep = audit_algebra(reduced_chart_structure(par, Signature::Sphere),
                             reduced_algebra_spec(par, Signature::Sphere), 100, 7);
    CHECK(rep.max_abs() < 1e-7);
    Params ps;
    ps.m = -1.0;
    ps.s = 0.3;
    rep = audit_algebra(reduced_chart_structure(ps, Signature::Pseudosphere),
                        reduced_algebra_spec(ps, Signature::Pseudosphere), 100, 7);
    CHECK(rep.max_abs() < 1e-7);
}

TEST_CASE("split exchange flips m, preserves P.P, flips P.J") {
    for (std::uint64_t k = 0; k < 20; ++k) {
        const auto st = random_state(400 + k, Signature::Pseudosphere);
        const auto ex = st.exchanged();
        const auto mv = moment_map(st), mx = moment_map(ex);
        CHECK(mx.P == doctest::Approx(-mv.P).epsilon(1e-12));
        CHECK(mx.J == doctest::Approx(mv.J).epsilon(1e-12));
        // Casimir pair through the partial reduction, eta = diag(1,-1,-1)
        const auto cm = charge_monopole_coords(st);
        const auto cx = charge_monopole_coords(ex);
        auto dot = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
            return a[0] * b[0] - a[1] * b[1] - a[2] * b[2];
        };
        CHECK(dot(cx.P_vec, cx.P_vec) == doctest::Approx(dot(cm.P_vec, cm.P_vec)).epsilon(1e-10));
        // massless-shell bookkeeping P^2 = P_vec.P_vec
        CHECK(dot(cm.P_vec, cm.P_vec) == doctest::Approx(mv.P * mv.P).epsilon(1e-10));
    }
}

TEST_CASE("charge-monopole coordinates: anchors and twisted brackets") {
    FlatC2State st{1.0, 0.0, 0.0, 0.0, Signature::Sphere};
    const auto cm = charge_monopole_coords(st);
    CHECK(cm.P_vec[0] == doctest::Approx(0.0));
    CHECK(cm.P_vec[1] == doctest::Approx(0.0));
    CHECK(cm.P_vec[2] == doctest::Approx(1.0));
    CHECK(std::fabs(cm.Q[0]) + std::fabs(cm.Q[1]) + std::fabs(cm.Q[2]) < 1e-12);

    // after the exchange (q, p) = (P_vec, -Q) the brackets reproduce the
    // monopole-twisted structure with charge s = spin
    const Signature sig = Signature::Sphere;
    BracketStructure flat{BracketKind::CanonicalC2, {}, sig};
    auto qo = [sig](int a) {
        return on_c2("q" + std::to_string(a),
                     [a](const FlatC2State& s) { return charge_monopole_coords(s).P_vec[a]; }, sig);
    };
    auto po = [sig](int a) {
        return on_c2("p" + std::to_string(a),
                     [a](const FlatC2State& s) { return charge_monopole_coords(s).Q[a]; }, sig);
    };
    FdOptions fd;
    fd.richardson = true;
    int used = 0;
    for (int k = 0; k < 100 && used < 25; ++k) {
        const auto at = sample_point(flat, 91, static_cast<std::uint64_t>(k));
        const auto c2 = FlatC2State::from_phase(at, sig);
        const auto mv = moment_map(c2);
        if (mv.P < 0.4) continue;
        ++used;
        const double spin = spin_of(c2);
        const auto cmv = charge_monopole_coords(c2);
        const double r = std::hypot(cmv.P_vec[0], cmv.P_vec[1], cmv.P_vec[2]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                // {q_a, p_b} = delta_ab (p = -Q)
                const double qp = -bracket(flat, qo(a), po(b), at, fd);
                CHECK(std::fabs(qp - (a == b ? 1.0 : 0.0)) < 1e-7);
                CHECK(std::fabs(bracket(flat, qo(a), qo(b), at, fd)) < 1e-7);
                if (b == (a + 1) % 3) {
                    // {p_a, p_b} = -s eps_abc q^c / r^3 (orientation convention)
                    const int c = (a + 2) % 3;
                    const double pp = bracket(flat, po(a), po(b), at, fd);
                    CHECK(std::fabs(pp + spin * cmv.P_vec[c] / (r * r * r)) < 1e-7);
                }
            }
    }
    CHECK(used >= 20);
}

TEST_CASE("gauge potentials") {
    Params par;
    par.m = 1.0;
    CHECK(std::abs(gauge_potential(GaugeChoice::GammaPlus, 0.0, par)) == doctest::Approx(0.0));
    const cplx a1 = gauge_potential(GaugeChoice::GammaPlus, 1.0, par);
    CHECK(a1.real() == doctest::Approx(0.0));
    CHECK(a1.imag() == doctest::Approx(0.5));
    CHECK_THROWS_AS(gauge_potential(GaugeChoice::GammaMean, 0.0, par), std::domain_error);
    // pure-gauge difference: A+ - A- = i m / p
    const cplx p{0.3, -0.8};
    const cplx diff = gauge_potential(GaugeChoice::GammaPlus, p, par) -
                      gauge_potential(GaugeChoice::GammaMinus, p, par);
    CHECK(std::abs(diff - cplx{0, 1} * par.m / p) < 1e-14);
}

TEST_CASE("loop integrals and flux") {
    Params par;
    par.m = 1.0;
    par.s = 0.5;
    for (double radius : {0.4, 1.0, 2.3}) {
        const double loop = loop_integral_gauge_diff(radius, par);
        CHECK(std::fabs(loop + 4.0 * kPi * par.m) < 1e-9);
        // flux unit 2 pi per unit s: the physical loop is an integer multiple
        const double physical = loop * (par.s / par.m);
        const double multiple = physical / (2.0 * kPi);
        CHECK(std::fabs(multiple - std::llround(multiple)) < 1e-6);
    }
    const double flux = sphere_flux(par);
    CHECK(std::fabs(flux + 4.0 * kPi * par.s) < 1e-3 * 4.0 * kPi * par.s);
}

TEST_CASE("spin admissibility") {
    CHECK(spin_quantization_check(0.5, Signature::Sphere).admissible);
    CHECK_FALSE(spin_quantization_check(0.3, Signature::Sphere).admissible);
    const auto an = spin_quantization_check(0.3, Signature::Pseudosphere);
    CHECK(an.admissible);
    CHECK(an.exchange_phase == doctest::Approx(0.6 * kPi));
}
