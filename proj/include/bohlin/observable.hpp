// Scalar observables on phase space with analytic gradients or a central
// finite-difference fallback.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bohlin/core.hpp"

namespace bohlin {

struct FdOptions {
    double h_scale = 1e-5;      // step h = h_scale * max(1, |x_i|)
    bool richardson = false;    // one-step Richardson extrapolation
};

/// Named scalar function of a PhaseState; grad is optional (finite
/// differences are used when absent).
struct Observable {
    std::string name;
    std::function<double(const PhaseState&)> eval;
    std::function<std::vector<double>(const PhaseState&)> grad;  // may be empty

    double operator()(const PhaseState& st) const { return eval(st); }
};

/// Central finite-difference gradient of f at st.
inline std::vector<double> fd_gradient(const std::function<double(const PhaseState&)>& f,
                                       const PhaseState& st, const FdOptions& opt = {}) {
    const std::size_t n = st.coords.size();
    std::vector<double> g(n);
    PhaseState probe = st;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = st.coords[i];
        const double h = opt.h_scale * std::max(1.0, std::fabs(xi));
        auto central = [&](double step) {
            probe.coords[i] = xi + step;
            const double fp = f(probe);
            probe.coords[i] = xi - step;
            const double fm = f(probe);
            probe.coords[i] = xi;
            return (fp - fm) / (2.0 * step);
        };
        double d = central(h);
        if (opt.richardson) {
            const double d2 = central(h / 2.0);
            d = (4.0 * d2 - d) / 3.0;  // eliminates the O(h^2) term
        }
        if (!std::isfinite(d))
            throw std::runtime_error("fd_gradient: finite differencing produced a non-finite value");
        g[i] = d;
    }
    return g;
}

inline std::vector<double> gradient_of(const Observable& f, const PhaseState& st,
                                       const FdOptions& opt = {}) {
    if (f.grad) return f.grad(st);
    return fd_gradient(f.eval, st, opt);
}

/// Complex observable as a pair of real ones; brackets of complex functions
/// are computed by bilinearity.
struct ComplexObservable {
    std::string name;
    Observable re, im;

    static ComplexObservable wrap_real(Observable o) {
        ComplexObservable c;
        c.name = o.name;
        c.im = Observable{o.name + ".im", [](const PhaseState&) { return 0.0; }, nullptr};
        // analytic zero gradient so a real observable never forces finite differencing
        c.im.grad = [](const PhaseState& st) { return std::vector<double>(st.coords.size(), 0.0); };
        c.re = std::move(o);
        return c;
    }

    cplx operator()(const PhaseState& st) const { return {re.eval(st), im.eval(st)}; }
};

}  // namespace bohlin
