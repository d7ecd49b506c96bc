// observables.hpp: scalar and phase-space observables of density-matrix snapshots

#pragma once

#include <string>
#include <vector>

#include "jcopen/hilbert.hpp"

namespace jcopen {

struct TimeSeries {
    std::string name;
    std::vector<double> t;
    std::vector<double> values;
};

double atomic_inversion(const Operator& rho, const SpaceSpec& spec);
double mean_photon_number(const Operator& rho, const SpaceSpec& spec);
double purity(const Operator& rho);
double ground_state_probability(const Operator& rho, const SpaceSpec& spec);

// Von Neumann entropy of the field reduced state; eigenvalues below 1e-14
// contribute nothing.
double field_entropy(const Operator& rho, const SpaceSpec& spec);
double von_neumann_entropy(const Operator& rho);

// Wootters concurrence with the field treated as a qubit on {|0>, |1>}.
// Throws SubspaceLeakError if more than 1e-6 population lies outside.
double concurrence_single_excitation(const Operator& rho, const SpaceSpec& spec);

// q = (a + a^dag)/2, p = (a - a^dag)/(2i).
struct Quadratures {
    double q_mean{0.0};
    double p_mean{0.0};
    double q_var{0.0};
    double p_var{0.0};
};

Quadratures quadratures(const Operator& rho, const SpaceSpec& spec);

// exp(i phase N) rho exp(-i phase N): the state seen from the frame rotating
// at omega when phase = omega t. Populations, purity and entropies are
// unchanged; field quadratures and Q lose the fast carrier rotation.
Operator rotating_frame(const Operator& rho, const SpaceSpec& spec, double phase);

struct GridSpec {
    double re_min{-1.0};
    double re_max{1.0};
    double im_min{-1.0};
    double im_max{1.0};
    int n_re{121};
    int n_im{121};

    // Square grid spanning +-(|alpha| + 4) in both axes.
    static GridSpec around(double alpha_magnitude, int points = 121);
};

struct PhaseGrid {
    std::vector<double> re_alpha;
    std::vector<double> im_alpha;
    Eigen::MatrixXd q;  // q(i_re, i_im)

    double cell_area() const;
    double integral() const;
};

// Q(beta) = <beta| rho_field |beta> / pi on the grid. Coherent overlaps use
// the exact amplitudes for the retained Fock levels, so no truncation
// condition applies to the grid points themselves.
PhaseGrid husimi_q(const Operator& rho, const SpaceSpec& spec, const GridSpec& grid);

// Names accepted by `evaluate_observable`.
const std::vector<std::string>& observable_names();
bool is_observable(const std::string& name);
double evaluate_observable(const std::string& name, const Operator& rho, const SpaceSpec& spec);

} // namespace jcopen
