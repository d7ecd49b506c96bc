// lindblad.hpp: thermal rate table, dressed jump operators, and the two
// Liouvillians (dressed-state "microscopic" and bare-photon "phenomenological").

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "jcopen/dressed.hpp"
#include "jcopen/hilbert.hpp"

namespace jcopen {

// Bose occupation 1/(exp(nu/kT) - 1); zero when kT == 0. Throws DomainError
// for nu <= 0.
double thermal_occupation(double nu, double kT);

// Temperature for which the occupation at `omega` equals `nbar` (0 -> 0).
double temperature_from_occupation(double nbar, double omega);

// One decay channel: downward rate gamma_i = [1 + nbar(nu)] gamma and
// upward rate gtilde_i = nbar(nu) gamma at Bohr frequency nu.
struct RateSlot {
    double nu{0.0};
    double down{0.0};
    double up{0.0};
};

struct LadderAmplitudes {
    double a{0.0};
    double b{0.0};
    double d{0.0};
};

// a_n, b_n, d_n between manifolds n and n+1 (requires n + 1 < manifolds).
LadderAmplitudes ladder_amplitudes(const DressedSpectrum& spectrum, int n);

struct LadderRates {
    int n{0};
    LadderAmplitudes amp;
    std::array<RateSlot, 4> slot;  // gamma3 .. gamma6
};

struct RateTable {
    double gamma{0.0};
    double kT{0.0};
    std::array<RateSlot, 2> ground;  // gamma1, gamma2
    std::vector<LadderRates> ladder; // n = 0 .. n_max - 2

    // index in 1..6; n ignored for 1 and 2.
    const RateSlot& slot(int index, int n) const;
    double rate(int index, int n) const { return slot(index, n).down; }
    double rate_tilde(int index, int n) const { return slot(index, n).up; }
};

// Throws BohrFrequencyError if any transition frequency is not positive.
RateTable build_rate_table(const SystemParams& params, const DressedSpectrum& spectrum);

// Columns: n,a_n,b_n,d_n,gamma1..gamma6,gtilde1..gtilde6 ('%.17g' precision).
void write_rate_table_csv(std::ostream& os, const RateTable& table);

// Lowering jump X(nu) between dressed states, amplitude included. The
// raising partner is its adjoint.
struct JumpOperator {
    Operator matrix;
    int rate_index{0};  // 1..6
    int n{0};
    std::string label;
};

std::vector<JumpOperator> build_jump_operators(const DressedSpectrum& spectrum,
                                               const SpaceSpec& spec);

enum class MasterEquation { microscopic, phenomenological };

std::string to_string(MasterEquation kind);

struct Dissipator {
    double rate{0.0};
    Operator jump;
    std::string label;
};

using SuperOperator = Eigen::SparseMatrix<cplx>;

// Column-stacking vectorisation: vec(rho)[i + d j] = rho(i, j).
inline int vec_index(int i, int j, int dim) { return i + dim * j; }
Eigen::VectorXcd vectorize(const Operator& rho);
Operator unvectorize(const Eigen::VectorXcd& v, int dim);

// L[rho] = -i[H, rho] + sum_k rate_k D(J_k)[rho]. Immutable once built; the
// sparse superoperator is assembled eagerly in a fixed term order.
class Liouvillian {
public:
    Liouvillian(MasterEquation kind, SpaceSpec space, Operator hamiltonian,
                std::vector<Dissipator> dissipators);

    MasterEquation kind() const { return kind_; }
    const SpaceSpec& space() const { return space_; }
    int dim() const { return static_cast<int>(hamiltonian_.rows()); }
    int dim_super() const { return dim() * dim(); }
    const Operator& hamiltonian() const { return hamiltonian_; }
    const std::vector<Dissipator>& dissipators() const { return dissipators_; }

    // Direct action on a density matrix, without the superoperator.
    Operator apply(const Operator& rho) const;

    const SuperOperator& sparse() const { return super_; }
    Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(super_); }

    // Same generator expressed in the basis given by the columns of the
    // unitary `u`: H -> u^dag H u, J -> u^dag J u. Roundoff below 1e-14 of
    // each operator's largest entry is dropped.
    Liouvillian in_basis(const Operator& u) const;

    // Largest single dissipator rate times ||J||^2; zero for closed systems.
    double rate_scale() const;

private:
    MasterEquation kind_;
    SpaceSpec space_;
    Operator hamiltonian_;
    std::vector<Dissipator> dissipators_;
    SuperOperator super_;
};

// Dressed-ladder dissipators summed over complete manifold pairs
// (n <= n_max - 2). Requires 2g > gamma.
Liouvillian build_microscopic_liouvillian(const SystemParams& params,
                                          const DressedSpectrum& spectrum,
                                          const SpaceSpec& spec);

// gamma (nbar(omega) + 1) D(a) + gamma nbar(omega) D(a^dag).
Liouvillian build_phenomenological_liouvillian(const SystemParams& params,
                                               const SpaceSpec& spec);

} // namespace jcopen
