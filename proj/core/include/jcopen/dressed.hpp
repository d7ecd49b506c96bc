// dressed.hpp: Jaynes-Cummings Hamiltonian and its analytic dressed basis

#pragma once

#include <string>
#include <vector>

#include "jcopen/hilbert.hpp"

namespace jcopen {

// Physical parameters in units of the coupling g, with hbar = k_B = 1.
struct SystemParams {
    double omega0{100.0};       // qubit frequency
    double omega{100.0};        // field frequency
    double g{1.0};              // coupling (the unit)
    double gamma{0.0};          // flat-bath decay rate
    double nbar_at_omega{0.0};  // thermal occupation at the field frequency

    double detuning() const { return omega0 - omega; }

    // Basic sanity (finite, non-negative rates). Returns soft warnings,
    // e.g. when omega <= 50 gamma.
    std::vector<std::string> validate() const;

    // The secular dressed-state master equation needs 2g > gamma.
    void require_rwa() const;
};

// Analytic spectrum of H_JC. Manifold n in [0, n_max - 1] holds |n,e>, |n+1,g>:
//   |eps_{n,+}> =  c_n |n,e> + s_n |n+1,g>
//   |eps_{n,-}> = -s_n |n,e> + c_n |n+1,g>
// with eps_{n,+-} = (n + 1/2) omega +- Omega_n / 2 and eps0 = -omega0/2.
struct DressedSpectrum {
    double eps0{0.0};
    std::vector<double> rabi;   // Omega_n
    std::vector<double> theta;  // mixing angle in (0, pi)
    std::vector<double> c;
    std::vector<double> s;
    std::vector<double> eps_plus;
    std::vector<double> eps_minus;
    // Energy of the unpaired top state |n_max, e>.
    double eps_top{0.0};

    int manifolds() const { return static_cast<int>(rabi.size()); }
};

Operator build_jc_hamiltonian(const SystemParams& params, const SpaceSpec& spec);

DressedSpectrum dressed_spectrum(const SystemParams& params, const SpaceSpec& spec);

// Column layout of the dressed basis matrix: index 0 is |eps0>, then
// |eps_{n,+}> at 1 + 2n and |eps_{n,-}> at 2 + 2n, and finally the bare
// top state |n_max, e> which has no partner inside the truncation.
inline int dressed_ground() { return 0; }
inline int dressed_plus(int n) { return 1 + 2 * n; }
inline int dressed_minus(int n) { return 2 + 2 * n; }
inline int dressed_top(const SpaceSpec& spec) { return spec.dim_total() - 1; }

Operator dressed_basis_matrix(const DressedSpectrum& spectrum, const SpaceSpec& spec);

} // namespace jcopen
