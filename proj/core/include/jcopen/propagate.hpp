// propagate.hpp: density-matrix evolution (fixed-step RK4 and Liouvillian
// eigendecomposition), steady states, and closed-form single-excitation
// solutions used as oracles.

#pragma once

#include <span>
#include <vector>

#include "jcopen/lindblad.hpp"

namespace jcopen {

enum class Method { rk4, spectral };

std::string to_string(Method method);

// Largest |Tr rho - 1| and Hermiticity defect seen before the per-output
// correction was applied.
struct Diagnostics {
    double max_trace_drift{0.0};
    double max_hermiticity_drift{0.0};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Operator> states;
    Diagnostics diagnostics;
};

struct Rk4Options {
    // Step size in units of 1/g; 0 picks 0.008 / fastest_frequency.
    double dt{0.0};
    // Integrate in the frame rotating at frame_frequency * N. Both master
    // equations commute with [N, .], so the transformation back is exact.
    double frame_frequency{0.0};
};

// Spread of the frame Hamiltonian H - f N plus the largest decay rate; the
// step size must satisfy dt <= 0.01 / fastest_frequency.
double fastest_frequency(const Liouvillian& liouvillian, double frame_frequency);

// Classical fixed-step RK4 on vec(rho). Each output is made Hermitian and
// renormalised; DriftError if either defect exceeds 1e-7 first.
Trajectory evolve_rk4(const Liouvillian& liouvillian, const Operator& rho0,
                      std::span<const double> times, const Rk4Options& options = {});

// rho(t) = V exp(Lambda t) V^-1 vec(rho0), decomposed once. The generator is
// block diagonal in the coherence order k = N_left - N_right; each block is
// diagonalised in the energy eigenbasis of its excitation manifolds.
class SpectralPropagator {
public:
    // Throws DefectiveLiouvillianError if an eigenvector matrix has
    // condition number above `condition_limit`.
    explicit SpectralPropagator(const Liouvillian& liouvillian, double condition_limit = 1e10);

    int dim() const { return dim_; }
    Operator at(const Operator& rho0, double t) const;
    Trajectory evolve(const Operator& rho0, std::span<const double> times) const;

    // All eigenvalues, sector by sector.
    Eigen::VectorXcd eigenvalues() const;
    double max_condition_number() const { return max_condition_; }

private:
    struct Sector {
        int order{0};
        std::vector<int> positions;  // vec indices in the working basis
        Eigen::MatrixXcd vectors;
        Eigen::MatrixXcd inverse;
        Eigen::VectorXcd values;
    };

    int dim_;
    Operator basis_;
    std::vector<Sector> sectors_;
    double max_condition_{1.0};
};

Trajectory evolve_spectral(const Liouvillian& liouvillian, const Operator& rho0,
                           std::span<const double> times);

Trajectory evolve(const Liouvillian& liouvillian, const Operator& rho0,
                  std::span<const double> times, Method method,
                  const Rk4Options& rk4 = {});

// Unique trace-one kernel element of L. Throws DegenerateKernelError if the
// second-smallest |eigenvalue| is below 1e-8 * rate_scale(). For the
// microscopic generator the unpaired top state |n_max, e> is excluded.
Operator steady_state(const Liouvillian& liouvillian);

// alpha |0,e> + beta |1,g> with |alpha|^2 + |beta|^2 = 1.
struct SingleExcitationInput {
    cplx alpha{1.0};
    cplx beta{0.0};
    SystemParams params;

    void validate() const;
    StateVector state(const SpaceSpec& spec) const;
};

// Zero-temperature dressed-state master equation restricted to
// {|eps0>, |eps_{0,+}>, |eps_{0,->}}: populations of |eps_{0,+-}> decay at
// gamma s0^2 and gamma c0^2, their coherence at gamma/2 while rotating at Omega_0.
Operator analytic_microscopic(const SingleExcitationInput& input, const SpaceSpec& spec,
                              double t);

// Zero-temperature bare-photon master equation in the same sector: the
// excitation amplitudes a(t), b(t) of |0,e>, |1,g> follow a damped two-level
// problem with complex frequency Omega = sqrt(gamma^2 - 16 g^2 - 4 D (D + i gamma))/2.
Operator analytic_phenomenological(const SingleExcitationInput& input,
                                   const SpaceSpec& spec, double t);

} // namespace jcopen
