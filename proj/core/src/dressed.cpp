#include "jcopen/dressed.hpp"

#include <cmath>

#include "jcopen/errors.hpp"

namespace jcopen {

std::vector<std::string> SystemParams::validate() const {
    for (double v : {omega0, omega, g, gamma, nbar_at_omega}) {
        if (!std::isfinite(v)) throw ParameterError("system parameters must be finite");
    }
    if (omega <= 0.0) throw ParameterError("field frequency omega must be positive");
    if (omega0 <= 0.0) throw ParameterError("qubit frequency omega0 must be positive");
    if (g < 0.0) throw ParameterError("coupling g must be non-negative");
    if (gamma < 0.0) throw ParameterError("decay rate gamma must be non-negative");
    if (nbar_at_omega < 0.0) throw ParameterError("nbar_at_omega must be non-negative");

    std::vector<std::string> warnings;
    if (omega <= 50.0 * gamma) {
        warnings.push_back("omega <= 50 gamma: phenomenological master equation is outside "
                           "its validity regime");
    }
    return warnings;
}

void SystemParams::require_rwa() const {
    if (!(2.0 * g > gamma)) {
        throw ParameterError("dressed-state master equation requires 2g > gamma (g=" +
                             std::to_string(g) + ", gamma=" + std::to_string(gamma) + ")");
    }
}

Operator build_jc_hamiltonian(const SystemParams& params, const SpaceSpec& spec) {
    const Operator a = build_annihilation(spec);
    const QubitOps q = build_qubit_ops(spec);
    Operator h = 0.5 * params.omega0 * q.sz + params.omega * build_number(spec) +
                 params.g * (a * q.sp + a.adjoint() * q.sm);
    return h;
}

DressedSpectrum dressed_spectrum(const SystemParams& params, const SpaceSpec& spec) {
    const double delta = params.detuning();
    const int m = spec.n_max();
    DressedSpectrum out;
    out.eps0 = -0.5 * params.omega0;
    out.rabi.resize(m);
    out.theta.resize(m);
    out.c.resize(m);
    out.s.resize(m);
    out.eps_plus.resize(m);
    out.eps_minus.resize(m);
    for (int n = 0; n < m; ++n) {
        const double coupling = 2.0 * params.g * std::sqrt(n + 1.0);
        const double rabi = std::hypot(delta, coupling);
        // atan2 keeps theta in (0, pi) and equal to pi/2 on resonance.
        const double theta = std::atan2(coupling, delta);
        out.rabi[n] = rabi;
        out.theta[n] = theta;
        out.c[n] = std::cos(0.5 * theta);
        out.s[n] = std::sin(0.5 * theta);
        const double centre = (n + 0.5) * params.omega;
        out.eps_plus[n] = centre + 0.5 * rabi;
        out.eps_minus[n] = centre - 0.5 * rabi;
    }
    // g = 0 collapses theta to 0 or pi; the formulas above still hold.
    out.eps_top = 0.5 * params.omega0 + m * params.omega;
    return out;
}

Operator dressed_basis_matrix(const DressedSpectrum& spectrum, const SpaceSpec& spec) {
    if (spectrum.manifolds() != spec.n_max()) {
        throw DimensionError("dressed spectrum has " + std::to_string(spectrum.manifolds()) +
                             " manifolds, space expects " + std::to_string(spec.n_max()));
    }
    const int d = spec.dim_total();
    Operator u = Operator::Zero(d, d);
    u(spec.index(0, Qubit::g), dressed_ground()) = 1.0;
    for (int n = 0; n < spectrum.manifolds(); ++n) {
        const int ke = spec.index(n, Qubit::e);
        const int kg = spec.index(n + 1, Qubit::g);
        u(ke, dressed_plus(n)) = spectrum.c[n];
        u(kg, dressed_plus(n)) = spectrum.s[n];
        u(ke, dressed_minus(n)) = -spectrum.s[n];
        u(kg, dressed_minus(n)) = spectrum.c[n];
    }
    u(spec.index(spec.n_max(), Qubit::e), dressed_top(spec)) = 1.0;
    return u;
}

} // namespace jcopen
