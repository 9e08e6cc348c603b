#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bohlin/algebras.hpp"
#include "bohlin/poisson.hpp"

using namespace bohlin;

namespace {

ComplexObservable coord_pair(const std::string& name, std::size_t pair) {
    ComplexObservable c;
    c.name = name;
    c.re = {name + ".re", [pair](const PhaseState& st) { return st.coords[2 * pair]; },
            [pair](const PhaseState& st) {
                std::vector<double> g(st.coords.size(), 0.0);
                g[2 * pair] = 1.0;
                return g;
            }};
    c.im = {name + ".im", [pair](const PhaseState& st) { return st.coords[2 * pair + 1]; },
            [pair](const PhaseState& st) {
                std::vector<double> g(st.coords.size(), 0.0);
                g[2 * pair + 1] = 1.0;
                return g;
            }};
    return c;
}

Observable coord(const std::string& name, std::size_t i, std::size_t dim) {
    return {name, [i](const PhaseState& st) { return st.coords[i]; },
            [i, dim](const PhaseState&) {
                std::vector<double> g(dim, 0.0);
                g[i] = 1.0;
                return g;
            }};
}

}  // namespace

TEST_CASE("canonical complex bracket {pi, z} = 1") {
    BracketStructure st{BracketKind::CanonicalComplex, {}, Signature::Sphere};
    const auto z = coord_pair("z", 0);
    const auto pi = coord_pair("pi", 1);
    const auto at = make_flatc({0.3, -0.2}, {1.1, 0.7});
    const cplx b = bracket_c(st, pi, z, at);
    CHECK(b.real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.imag() == doctest::Approx(0.0).epsilon(1e-12));
    // {pi, zbar} = 0
    ComplexObservable zbar = z;
    zbar.im.eval = [](const PhaseState& s) { return -s.coords[1]; };
    zbar.im.grad = [](const PhaseState& s) {
        std::vector<double> g(s.coords.size(), 0.0);
        g[1] = -1.0;
        return g;
    };
    CHECK(std::abs(bracket_c(st, pi, zbar, at)) < 1e-12);
}

TEST_CASE("R3 twisted bracket {p1, p2} = s q3/|q|^3") {
    Params par;
    par.s = 1.0;
    BracketStructure st{BracketKind::R3Twisted, par, Signature::Sphere};
    PhaseState at(Space::R3Monopole, {0, 0, 1, 0.4, -0.3, 0.2});
    const auto p1 = coord("p1", 3, 6), p2 = coord("p2", 4, 6), q1 = coord("q1", 0, 6);
    CHECK(bracket(st, p1, p2, at) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bracket(st, q1, p1, at) == doctest::Approx(1.0).epsilon(1e-12));
    // antisymmetry and {f,f} = 0
    CHECK(bracket(st, p2, p1, at) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(bracket(st, p1, p1, at) == doctest::Approx(0.0));
}

TEST_CASE("Leibniz rule under finite differences") {
    Params par;
    par.s = 0.7;
    BracketStructure st{BracketKind::R3Twisted, par, Signature::Sphere};
    const auto at = sample_point(st, 11, 0);
    Observable f = {"q1*q2", [](const PhaseState& s) { return s.coords[0] * s.coords[1]; }, nullptr};
    Observable g = {"p3", [](const PhaseState& s) { return s.coords[5]; }, nullptr};
    Observable q1 = {"q1", [](const PhaseState& s) { return s.coords[0]; }, nullptr};
    Observable q2 = {"q2", [](const PhaseState& s) { return s.coords[1]; }, nullptr};
    const double lhs = bracket(st, f, g, at);
    const double rhs = at.coords[0] * bracket(st, q2, g, at) + at.coords[1] * bracket(st, q1, g, at);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
}

TEST_CASE("Jacobi identity on the twisted structure, 50 sampled triples") {
    Params par;
    par.s = 1.3;
    BracketStructure st{BracketKind::R3Twisted, par, Signature::Sphere};
    // nested brackets of the momentum coordinates: only {p_a, p_b} is
    // position-dependent, so these triples exercise the twist closedness
    auto pa = [&](int a) { return coord("p" + std::to_string(a + 1), 3 + a, 6); };
    FdOptions fd;
    fd.richardson = true;
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto at = sample_point(st, 23, static_cast<std::uint64_t>(k));
        double cyc = 0.0;
        for (int a = 0; a < 3; ++a) {
            const int b = (a + 1) % 3, c = (a + 2) % 3;
            Observable inner{"{pa,pb}",
                             [&st, a, b, &pa, &fd](const PhaseState& x) {
                                 return bracket(st, pa(a), pa(b), x, fd);
                             },
                             nullptr};
            cyc += bracket(st, inner, pa(c), at, fd);
        }
        worst = std::max(worst, std::fabs(cyc));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("reduced chart bracket matches its defining twist") {
    Params par;
    par.m = 1.3;
    par.s = 0.9;  // structure twist parameter, used literally
    BracketStructure st{BracketKind::ReducedChart, par, Signature::Sphere};
    const auto at = sample_point(st, 5, 2);
    const auto p = coord_pair("p", 0);
    const auto w = coord_pair("w", 1);
    ComplexObservable wbar = w;
    wbar.im.eval = [](const PhaseState& s) { return -s.coords[3]; };
    wbar.im.grad = [](const PhaseState& s) {
        std::vector<double> g(s.coords.size(), 0.0);
        g[3] = -1.0;
        return g;
    };
    CHECK(std::abs(bracket_c(st, p, w, at) - 1.0) < 1e-12);
    const cplx expect = cplx{0, 1} * (par.s / par.m) * metric_g(at.c_at(0), Signature::Sphere, par.m);
    CHECK(std::abs(bracket_c(st, w, wbar, at) - expect) < 1e-12);
    CHECK(std::abs(bracket_c(st, p, wbar, at)) < 1e-12);
}

TEST_CASE("su(2) audit with analytic gradients is rounding-level") {
    Params par;
    par.omega = 1.7;
    const auto spec = su2_spec(par);
    BracketStructure st{BracketKind::CanonicalComplex, par, Signature::Sphere};
    const auto rep = audit_algebra(st, spec, 100, 42);
    CHECK(rep.max_abs() < 1e-10);
    // determinism: same seed, same report
    const auto rep2 = audit_algebra(st, spec, 100, 42);
    CHECK(rep.to_json() == rep2.to_json());
    const auto rep3 = audit_algebra(st, spec, 100, 43);
    CHECK(rep.to_json() != rep3.to_json());
}

TEST_CASE("conservation audit {H_osc, J} = 0") {
    Params par;
    BracketStructure st{BracketKind::CanonicalComplex, par, Signature::Sphere};
    Observable h{"H_osc",
                 [](const PhaseState& s) {
                     return std::norm(s.c_at(0)) + std::norm(s.c_at(1));
                 },
                 nullptr};
    Observable j{"J", [](const PhaseState& s) { return -2.0 * std::imag(s.c_at(1) * s.c_at(0)); },
                 nullptr};
    const auto rep = check_conserved(st, ComplexObservable::wrap_real(h),
                                     ComplexObservable::wrap_real(j), 50, 9);
    CHECK(rep.max_abs() < 1e-9);
    const auto self = check_conserved(st, ComplexObservable::wrap_real(h),
                                      ComplexObservable::wrap_real(h), 10, 9);
    CHECK(self.max_abs() < 1e-12);
}

TEST_CASE("analytic gradients match finite differences") {
    Params par;
    par.omega = 1.3;
    const auto spec = su2_spec(par);
    BracketStructure st{BracketKind::CanonicalComplex, par, Signature::Sphere};
    for (int k = 0; k < 10; ++k) {
        const auto at = sample_point(st, 77, static_cast<std::uint64_t>(k));
        for (const auto& g : spec.generators) {
            const auto an = g.re.grad(at);
            const auto fd = fd_gradient(g.re.eval, at);
            for (std::size_t i = 0; i < an.size(); ++i)
                CHECK(an[i] == doctest::Approx(fd[i]).epsilon(1e-6));
        }
    }
}

TEST_CASE("declarative algebra JSON") {
    Params par;
    const nlohmann::json j = {
        {"base", "su2"},
        {"name", "su2-partial"},
        {"relations",
         {{{"name", "k1k2"},
           {"lhs", {"K1", "K2"}},
           {"rhs", {{{"coeff", 2.0 * par.omega * par.omega}, {"gen", "J"}}}}}}}};
    const auto spec = load_algebra_json(j, par);
    CHECK(spec.name == "su2-partial");
    REQUIRE(spec.relations.size() == 1);
    BracketStructure st{BracketKind::CanonicalComplex, par, Signature::Sphere};
    CHECK(audit_algebra(st, spec, 50, 1).max_abs() < 1e-10);
    // unknown generator reference rejected
    nlohmann::json bad = j;
    bad["relations"][0]["lhs"][0] = "nope";
    CHECK_THROWS_AS(load_algebra_json(bad, par), std::invalid_argument);
}

TEST_CASE("sampling respects chart domains") {
    Params par;
    par.m = -1.0;
    par.s = 0.4;
    BracketStructure st{BracketKind::ReducedChart, par, Signature::Pseudosphere};
    for (int k = 0; k < 50; ++k)
        CHECK(std::abs(sample_point(st, 3, static_cast<std::uint64_t>(k)).c_at(0)) < 0.9);
    Params p2;
    p2.s = 1.0;
    BracketStructure r3{BracketKind::R3Twisted, p2, Signature::Sphere};
    for (int k = 0; k < 50; ++k) {
        const auto pt = sample_point(r3, 3, static_cast<std::uint64_t>(k));
        CHECK(std::hypot(pt.coords[0], pt.coords[1], pt.coords[2]) >= 0.25);
    }
}
