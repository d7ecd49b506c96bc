// hilbert.hpp: truncated Fock (x) qubit space, bare operators and states

#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace jcopen {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class Qubit : int { g = 0, e = 1 };

// Composite basis |n, s> with the qubit index fastest: k = 2 n + s.
// Every module relies on this ordering.
class SpaceSpec {
public:
    explicit SpaceSpec(int n_max);

    int n_max() const { return n_max_; }
    int dim_field() const { return n_max_ + 1; }
    int dim_total() const { return 2 * (n_max_ + 1); }

    int index(int n, Qubit s) const;
    std::pair<int, Qubit> decompose(int k) const;

    // Total excitation number n + s of basis state k.
    int excitations(int k) const;

    bool operator==(const SpaceSpec&) const = default;

private:
    int n_max_;
};

struct QubitOps {
    Operator sz;
    Operator sm;
    Operator sp;
};

Operator build_annihilation(const SpaceSpec& spec);
QubitOps build_qubit_ops(const SpaceSpec& spec);
Operator build_number(const SpaceSpec& spec);
// N = a^dag a + (1 + sz)/2, diagonal in the bare basis.
Operator build_excitation_number(const SpaceSpec& spec);

StateVector basis_state(const SpaceSpec& spec, int n, Qubit s);

// Poisson weight beyond n_max for a coherent amplitude of mean |alpha|^2.
double coherent_tail(double mean_photons, int n_max);

// Truncated coherent state |alpha> (x) |s>, renormalised. Throws
// TruncationError when the discarded Poisson tail is >= 1e-10.
StateVector coherent_state(const SpaceSpec& spec, cplx alpha, Qubit s);

// ceil(|alpha|^2 + 6|alpha| + 10)
int default_coherent_truncation(cplx alpha);

Operator projector(const StateVector& psi);

// Reduced field state (trace over the qubit), dim_field x dim_field.
Operator partial_trace_qubit(const Operator& rho, const SpaceSpec& spec);
// Reduced qubit state (trace over the field), 2 x 2 ordered {g, e}.
Operator partial_trace_field(const Operator& rho, const SpaceSpec& spec);

// |rho_ij - conj(rho_ji)| maximised over entries.
double hermiticity_defect(const Operator& m);
double min_eigenvalue(const Operator& rho);
// 0.5 * ||a - b||_1 for Hermitian arguments.
double trace_distance(const Operator& a, const Operator& b);

} // namespace jcopen
