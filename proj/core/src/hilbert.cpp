#include "jcopen/hilbert.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "jcopen/errors.hpp"

namespace jcopen {

SpaceSpec::SpaceSpec(int n_max) : n_max_(n_max) {
    if (n_max < 1) {
        throw DimensionError("n_max must be >= 1, got " + std::to_string(n_max));
    }
}

int SpaceSpec::index(int n, Qubit s) const {
    if (n < 0 || n > n_max_) {
        throw DimensionError("Fock level " + std::to_string(n) + " outside [0, " +
                             std::to_string(n_max_) + "]");
    }
    return 2 * n + static_cast<int>(s);
}

std::pair<int, Qubit> SpaceSpec::decompose(int k) const {
    if (k < 0 || k >= dim_total()) {
        throw DimensionError("composite index " + std::to_string(k) + " out of range");
    }
    return {k / 2, static_cast<Qubit>(k % 2)};
}

int SpaceSpec::excitations(int k) const {
    return k / 2 + k % 2;
}

Operator build_annihilation(const SpaceSpec& spec) {
    const int d = spec.dim_total();
    Operator a = Operator::Zero(d, d);
    for (int n = 1; n <= spec.n_max(); ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (Qubit s : {Qubit::g, Qubit::e}) {
            a(spec.index(n - 1, s), spec.index(n, s)) = amp;
        }
    }
    return a;
}

QubitOps build_qubit_ops(const SpaceSpec& spec) {
    const int d = spec.dim_total();
    QubitOps ops{Operator::Zero(d, d), Operator::Zero(d, d), Operator::Zero(d, d)};
    for (int n = 0; n <= spec.n_max(); ++n) {
        const int kg = spec.index(n, Qubit::g);
        const int ke = spec.index(n, Qubit::e);
        ops.sz(ke, ke) = 1.0;
        ops.sz(kg, kg) = -1.0;
        ops.sm(kg, ke) = 1.0;
    }
    ops.sp = ops.sm.adjoint();
    return ops;
}

Operator build_number(const SpaceSpec& spec) {
    const int d = spec.dim_total();
    Operator num = Operator::Zero(d, d);
    for (int k = 0; k < d; ++k) num(k, k) = k / 2;
    return num;
}

Operator build_excitation_number(const SpaceSpec& spec) {
    const int d = spec.dim_total();
    Operator num = Operator::Zero(d, d);
    for (int k = 0; k < d; ++k) num(k, k) = spec.excitations(k);
    return num;
}

StateVector basis_state(const SpaceSpec& spec, int n, Qubit s) {
    StateVector psi = StateVector::Zero(spec.dim_total());
    psi(spec.index(n, s)) = 1.0;
    return psi;
}

namespace {

// log of the Poisson weight e^{-mu} mu^n / n!
double log_poisson(double mu, int n) {
    if (mu == 0.0) return n == 0 ? 0.0 : -INFINITY;
    return -mu + n * std::log(mu) - std::lgamma(n + 1.0);
}

} // namespace

double coherent_tail(double mean_photons, int n_max) {
    if (mean_photons == 0.0) return 0.0;
    // Terms decrease geometrically once n > mu; sum until negligible.
    double tail = 0.0;
    for (int n = n_max + 1;; ++n) {
        const double term = std::exp(log_poisson(mean_photons, n));
        tail += term;
        if (n > mean_photons && term < 1e-22 * (tail + 1e-300)) break;
        if (n > n_max + 10000) break;
    }
    return tail;
}

StateVector coherent_state(const SpaceSpec& spec, cplx alpha, Qubit s) {
    const double mu = std::norm(alpha);
    const double tail = coherent_tail(mu, spec.n_max());
    if (tail >= 1e-10) {
        throw TruncationError("coherent state |alpha|^2=" + std::to_string(mu) +
                              " needs more than n_max=" + std::to_string(spec.n_max()) +
                              " (tail weight " + std::to_string(tail) + ")");
    }
    StateVector psi = StateVector::Zero(spec.dim_total());
    const double r = std::abs(alpha);
    const double phase = std::arg(alpha);
    for (int n = 0; n <= spec.n_max(); ++n) {
        const double mag = r == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                    : std::exp(0.5 * log_poisson(mu, n));
        psi(spec.index(n, s)) = std::polar(mag, n * phase);
    }
    psi.normalize();
    return psi;
}

int default_coherent_truncation(cplx alpha) {
    const double r = std::abs(alpha);
    return static_cast<int>(std::ceil(r * r + 6.0 * r + 10.0));
}

Operator projector(const StateVector& psi) {
    return psi * psi.adjoint();
}

Operator partial_trace_qubit(const Operator& rho, const SpaceSpec& spec) {
    if (rho.rows() != spec.dim_total() || rho.cols() != spec.dim_total()) {
        throw DimensionError("partial_trace_qubit: operator is " + std::to_string(rho.rows()) +
                             "x" + std::to_string(rho.cols()) + ", expected " +
                             std::to_string(spec.dim_total()));
    }
    const int df = spec.dim_field();
    Operator out = Operator::Zero(df, df);
    for (int m = 0; m < df; ++m) {
        for (int n = 0; n < df; ++n) {
            out(m, n) = rho(2 * m, 2 * n) + rho(2 * m + 1, 2 * n + 1);
        }
    }
    return out;
}

Operator partial_trace_field(const Operator& rho, const SpaceSpec& spec) {
    if (rho.rows() != spec.dim_total() || rho.cols() != spec.dim_total()) {
        throw DimensionError("partial_trace_field: operator is " + std::to_string(rho.rows()) +
                             "x" + std::to_string(rho.cols()) + ", expected " +
                             std::to_string(spec.dim_total()));
    }
    Operator out = Operator::Zero(2, 2);
    for (int n = 0; n < spec.dim_field(); ++n) {
        out += rho.block(2 * n, 2 * n, 2, 2);
    }
    return out;
}

double hermiticity_defect(const Operator& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Operator& rho) {
    const Operator h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double trace_distance(const Operator& a, const Operator& b) {
    const Operator diff = a - b;
    const Operator h = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(h, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

} // namespace jcopen
