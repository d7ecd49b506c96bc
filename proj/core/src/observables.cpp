#include "jcopen/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "jcopen/errors.hpp"

namespace jcopen {

namespace {

void check_dim(const Operator& rho, const SpaceSpec& spec) {
    if (rho.rows() != spec.dim_total() || rho.cols() != spec.dim_total()) {
        throw DimensionError("density matrix does not match the space dimension");
    }
}

} // namespace

double atomic_inversion(const Operator& rho, const SpaceSpec& spec) {
    check_dim(rho, spec);
    double w = 0.0;
    for (int n = 0; n <= spec.n_max(); ++n) {
        w += rho(spec.index(n, Qubit::e), spec.index(n, Qubit::e)).real() -
             rho(spec.index(n, Qubit::g), spec.index(n, Qubit::g)).real();
    }
    return w;
}

double mean_photon_number(const Operator& rho, const SpaceSpec& spec) {
    check_dim(rho, spec);
    double n_mean = 0.0;
    for (int k = 0; k < spec.dim_total(); ++k) n_mean += (k / 2) * rho(k, k).real();
    return n_mean;
}

double purity(const Operator& rho) {
    // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
    return rho.cwiseAbs2().sum();
}

double ground_state_probability(const Operator& rho, const SpaceSpec& spec) {
    check_dim(rho, spec);
    const int k = spec.index(0, Qubit::g);
    return rho(k, k).real();
}

double von_neumann_entropy(const Operator& rho) {
    const Operator h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > 1e-14) s -= p * std::log(p);
    }
    return s;
}

double field_entropy(const Operator& rho, const SpaceSpec& spec) {
    return von_neumann_entropy(partial_trace_qubit(rho, spec));
}

double concurrence_single_excitation(const Operator& rho, const SpaceSpec& spec) {
    check_dim(rho, spec);
    // Composite indices 0..3 are |0,g>, |0,e>, |1,g>, |1,e>.
    Operator r4 = rho.topLeftCorner(4, 4);
    const double inside = r4.trace().real();
    const double leak = std::max(0.0, rho.trace().real() - inside);
    if (leak > 1e-6) throw SubspaceLeakError(leak);
    r4 /= inside;

    Operator yy = Operator::Zero(4, 4);
    // sigma_y (x) sigma_y in the product basis {00, 01, 10, 11}.
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Operator r = r4 * yy * r4.conjugate() * yy;
    Eigen::ComplexEigenSolver<Operator> es(r, false);
    std::vector<double> lambda;
    for (Eigen::Index i = 0; i < 4; ++i) {
        lambda.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    }
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    return std::max(0.0, c);
}

Quadratures quadratures(const Operator& rho, const SpaceSpec& spec) {
    check_dim(rho, spec);
    const Operator rf = partial_trace_qubit(rho, spec);
    const int df = spec.dim_field();
    // <a>, <a^2>, <a^dag a> from the field state.
    cplx a1 = 0.0, a2 = 0.0;
    double nn = 0.0;
    for (int n = 1; n < df; ++n) {
        a1 += std::sqrt(static_cast<double>(n)) * rf(n, n - 1);
        nn += n * rf(n, n).real();
    }
    for (int n = 2; n < df; ++n) {
        a2 += std::sqrt(static_cast<double>(n) * (n - 1)) * rf(n, n - 2);
    }
    Quadratures out;
    out.q_mean = a1.real();
    out.p_mean = a1.imag();
    // q^2 = (a^2 + a^dag^2 + 2 a^dag a + 1)/4, p^2 = (-a^2 - a^dag^2 + 2 a^dag a + 1)/4.
    // Truncation drops the [a, a^dag] = 1 defect at n_max; it is irrelevant
    // while the top level is empty.
    const double q2 = (2.0 * a2.real() + 2.0 * nn + 1.0) / 4.0;
    const double p2 = (-2.0 * a2.real() + 2.0 * nn + 1.0) / 4.0;
    out.q_var = q2 - out.q_mean * out.q_mean;
    out.p_var = p2 - out.p_mean * out.p_mean;
    return out;
}

GridSpec GridSpec::around(double alpha_magnitude, int points) {
    const double extent = alpha_magnitude + 4.0;
    return GridSpec{-extent, extent, -extent, extent, points, points};
}

Operator rotating_frame(const Operator& rho, const SpaceSpec& spec, double phase) {
    Operator out = rho;
    for (Eigen::Index j = 0; j < rho.cols(); ++j) {
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            const int k = spec.excitations(static_cast<int>(i)) - spec.excitations(static_cast<int>(j));
            if (k != 0) out(i, j) *= std::polar(1.0, phase * k);
        }
    }
    return out;
}

double PhaseGrid::cell_area() const {
    const double dre = re_alpha.size() > 1 ? re_alpha[1] - re_alpha[0] : 1.0;
    const double dim = im_alpha.size() > 1 ? im_alpha[1] - im_alpha[0] : 1.0;
    return dre * dim;
}

double PhaseGrid::integral() const {
    return q.sum() * cell_area();
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    }
    return out;
}

} // namespace

PhaseGrid husimi_q(const Operator& rho, const SpaceSpec& spec, const GridSpec& grid) {
    check_dim(rho, spec);
    if (grid.n_re < 1 || grid.n_im < 1) throw DimensionError("empty Husimi grid");
    const Operator rf = partial_trace_qubit(rho, spec);
    const int df = spec.dim_field();
    PhaseGrid out;
    out.re_alpha = linspace(grid.re_min, grid.re_max, grid.n_re);
    out.im_alpha = linspace(grid.im_min, grid.im_max, grid.n_im);
    out.q.resize(grid.n_re, grid.n_im);

    std::vector<double> log_fact(df);
    for (int n = 0; n < df; ++n) log_fact[n] = 0.5 * std::lgamma(n + 1.0);

    StateVector coh(df);
    for (int i = 0; i < grid.n_re; ++i) {
        for (int j = 0; j < grid.n_im; ++j) {
            const cplx beta(out.re_alpha[i], out.im_alpha[j]);
            const double r = std::abs(beta);
            const double phi = std::arg(beta);
            for (int n = 0; n < df; ++n) {
                const double mag = r == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                            : std::exp(-0.5 * r * r + n * std::log(r) - log_fact[n]);
                coh(n) = std::polar(mag, n * phi);
            }
            const cplx val = coh.dot(rf * coh);  // conj(coh)^T rf coh
            out.q(i, j) = std::max(0.0, val.real()) / std::numbers::pi;
        }
    }
    return out;
}

const std::vector<std::string>& observable_names() {
    static const std::vector<std::string> names = {
        "ground_probability", "inversion", "mean_photon_number", "purity",
        "field_entropy", "concurrence", "q_mean", "p_mean", "q_var", "p_var"};
    return names;
}

bool is_observable(const std::string& name) {
    const auto& names = observable_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

double evaluate_observable(const std::string& name, const Operator& rho, const SpaceSpec& spec) {
    if (name == "ground_probability") return ground_state_probability(rho, spec);
    if (name == "inversion") return atomic_inversion(rho, spec);
    if (name == "mean_photon_number") return mean_photon_number(rho, spec);
    if (name == "purity") return purity(rho);
    if (name == "field_entropy") return field_entropy(rho, spec);
    if (name == "concurrence") return concurrence_single_excitation(rho, spec);
    if (name == "q_mean" || name == "p_mean" || name == "q_var" || name == "p_var") {
        const Quadratures qd = quadratures(rho, spec);
        if (name == "q_mean") return qd.q_mean;
        if (name == "p_mean") return qd.p_mean;
        if (name == "q_var") return qd.q_var;
        return qd.p_var;
    }
    throw DomainError("unknown observable '" + name + "'");
}

} // namespace jcopen
