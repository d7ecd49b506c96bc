#include "jcopen/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "jcopen/errors.hpp"

namespace jcopen {

std::string to_string(Method method) {
    return method == Method::rk4 ? "rk4" : "spectral";
}

namespace {

constexpr double kDriftLimit = 1e-7;

void check_times(std::span<const double> times) {
    if (times.empty()) throw ParameterError("time grid is empty");
    if (!(times[0] >= 0.0)) throw ParameterError("time grid must start at t >= 0");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ParameterError("time grid must be strictly increasing");
        }
    }
}

void check_initial_state(const Liouvillian& l, const Operator& rho0) {
    if (rho0.rows() != l.dim() || rho0.cols() != l.dim()) {
        throw DimensionError("initial state dimension does not match the Liouvillian");
    }
    if (std::abs(rho0.trace() - 1.0) > 1e-9) {
        throw ParameterError("initial state must have unit trace");
    }
    if (hermiticity_defect(rho0) > 1e-12) {
        throw ParameterError("initial state must be Hermitian");
    }
}

// Records drift, then hermitises and renormalises in place.
void correct_output(Operator& rho, Diagnostics& diag) {
    const double trace_drift = std::abs(rho.trace() - 1.0);
    const double herm_drift = hermiticity_defect(rho);
    diag.max_trace_drift = std::max(diag.max_trace_drift, trace_drift);
    diag.max_hermiticity_drift = std::max(diag.max_hermiticity_drift, herm_drift);
    if (trace_drift > kDriftLimit || herm_drift > kDriftLimit) {
        throw DriftError("state drift (trace " + std::to_string(trace_drift) + ", hermiticity " +
                         std::to_string(herm_drift) + ") exceeds 1e-7; reduce dt");
    }
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
}

std::vector<int> excitation_numbers(const SpaceSpec& spec) {
    std::vector<int> n(spec.dim_total());
    for (int k = 0; k < spec.dim_total(); ++k) n[k] = spec.excitations(k);
    return n;
}

// Energy eigenbasis assembled manifold by manifold (H commutes with N).
Operator manifold_eigenbasis(const Liouvillian& l) {
    const auto exc = excitation_numbers(l.space());
    const int d = l.dim();
    Operator u = Operator::Zero(d, d);
    const int top = *std::max_element(exc.begin(), exc.end());
    for (int m = 0; m <= top; ++m) {
        std::vector<int> idx;
        for (int k = 0; k < d; ++k) {
            if (exc[k] == m) idx.push_back(k);
        }
        const int b = static_cast<int>(idx.size());
        Operator block(b, b);
        for (int i = 0; i < b; ++i) {
            for (int j = 0; j < b; ++j) block(i, j) = l.hamiltonian()(idx[i], idx[j]);
        }
        Eigen::SelfAdjointEigenSolver<Operator> es(block);
        for (int i = 0; i < b; ++i) {
            for (int j = 0; j < b; ++j) u(idx[i], idx[j]) = es.eigenvectors()(i, j);
        }
    }
    return u;
}

} // namespace

double fastest_frequency(const Liouvillian& l, double frame_frequency) {
    const Operator hf = l.hamiltonian() - frame_frequency * build_excitation_number(l.space());
    Eigen::SelfAdjointEigenSolver<Operator> es(hf, Eigen::EigenvaluesOnly);
    const double spread = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
    Operator m = Operator::Zero(l.dim(), l.dim());
    for (const auto& t : l.dissipators()) m += t.rate * (t.jump.adjoint() * t.jump);
    double decay = 0.0;
    if (!l.dissipators().empty()) {
        Eigen::SelfAdjointEigenSolver<Operator> ms(m, Eigen::EigenvaluesOnly);
        decay = ms.eigenvalues().maxCoeff();
    }
    return std::max(spread + decay, 1e-12);
}

Trajectory evolve_rk4(const Liouvillian& l, const Operator& rho0,
                      std::span<const double> times, const Rk4Options& options) {
    check_times(times);
    check_initial_state(l, rho0);
    const double fast = fastest_frequency(l, options.frame_frequency);
    const double dt = options.dt > 0.0 ? options.dt : 0.008 / fast;
    if (dt > 0.01 / fast * (1.0 + 1e-12)) {
        throw ParameterError("rk4 step " + std::to_string(dt) + " exceeds 0.01/" +
                             std::to_string(fast) + " for this frame");
    }

    const int d = l.dim();
    const auto exc = excitation_numbers(l.space());
    // Frame shift +i f (N_i - N_j) folded into the generator's diagonal.
    SuperOperator gen = l.sparse();
    if (options.frame_frequency != 0.0) {
        SuperOperator shift(d * d, d * d);
        std::vector<Eigen::Triplet<cplx>> diag;
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) {
                if (exc[i] != exc[j]) {
                    diag.emplace_back(vec_index(i, j, d), vec_index(i, j, d),
                                      cplx(0.0, options.frame_frequency * (exc[i] - exc[j])));
                }
            }
        }
        shift.setFromTriplets(diag.begin(), diag.end());
        gen += shift;
        gen.makeCompressed();
    }

    Eigen::VectorXcd v = vectorize(rho0);
    Eigen::VectorXcd k1(d * d), k2(d * d), k3(d * d), k4(d * d), tmp(d * d);
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    double t = 0.0;
    for (double target : times) {
        const double span = target - t;
        const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0;
        if (steps > 0) {
            const double h = span / static_cast<double>(steps);
            for (long n = 0; n < steps; ++n) {
                k1.noalias() = gen * v;
                tmp = v + (0.5 * h) * k1;
                k2.noalias() = gen * tmp;
                tmp = v + (0.5 * h) * k2;
                k3.noalias() = gen * tmp;
                tmp = v + h * k3;
                k4.noalias() = gen * tmp;
                v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        t = target;
        Operator rho = unvectorize(v, d);
        if (options.frame_frequency != 0.0) {
            for (int j = 0; j < d; ++j) {
                for (int i = 0; i < d; ++i) {
                    rho(i, j) *= std::polar(1.0, -options.frame_frequency * (exc[i] - exc[j]) * t);
                }
            }
        }
        correct_output(rho, traj.diagnostics);
        traj.states.push_back(std::move(rho));
    }
    return traj;
}

SpectralPropagator::SpectralPropagator(const Liouvillian& l, double condition_limit)
    : dim_(l.dim()), basis_(manifold_eigenbasis(l)) {
    const Liouvillian work = l.in_basis(basis_);
    const SuperOperator& s = work.sparse();
    const auto exc = excitation_numbers(l.space());
    const int d = dim_;

    std::map<int, int> order_to_sector;
    std::vector<int> sector_of(d * d), local_of(d * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const int k = exc[i] - exc[j];
            auto [it, inserted] = order_to_sector.try_emplace(k, static_cast<int>(sectors_.size()));
            if (inserted) {
                sectors_.push_back({});
                sectors_.back().order = k;
            }
            const int p = vec_index(i, j, d);
            sector_of[p] = it->second;
            local_of[p] = static_cast<int>(sectors_[it->second].positions.size());
            sectors_[it->second].positions.push_back(p);
        }
    }

    for (auto& sec : sectors_) {
        const int b = static_cast<int>(sec.positions.size());
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(b, b);
        for (int c = 0; c < b; ++c) {
            for (SuperOperator::InnerIterator it(s, sec.positions[c]); it; ++it) {
                const int r = static_cast<int>(it.row());
                if (sector_of[r] != sector_of[sec.positions[c]]) {
                    throw DefectiveLiouvillianError(
                        "generator couples different coherence orders; it does not "
                        "conserve the excitation number");
                }
                block(local_of[r], c) += it.value();
            }
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block, true);
        if (es.info() != Eigen::Success) {
            throw DefectiveLiouvillianError("eigendecomposition failed for sector k=" +
                                            std::to_string(sec.order));
        }
        sec.values = es.eigenvalues();
        sec.vectors = es.eigenvectors();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sec.vectors);
        const auto& sv = svd.singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
        if (!(cond < condition_limit)) {
            throw DefectiveLiouvillianError("eigenvector matrix of sector k=" +
                                            std::to_string(sec.order) +
                                            " has condition number " + std::to_string(cond));
        }
        max_condition_ = std::max(max_condition_, cond);
        sec.inverse = sec.vectors.partialPivLu().inverse();
    }
}

Operator SpectralPropagator::at(const Operator& rho0, double t) const {
    const Operator sigma0 = basis_.adjoint() * rho0 * basis_;
    Operator sigma = Operator::Zero(dim_, dim_);
    const cplx* in = sigma0.data();
    cplx* out = sigma.data();
    for (const auto& sec : sectors_) {
        const int b = static_cast<int>(sec.positions.size());
        Eigen::VectorXcd x(b);
        for (int i = 0; i < b; ++i) x(i) = in[sec.positions[i]];
        Eigen::VectorXcd coeff = sec.inverse * x;
        for (int i = 0; i < b; ++i) coeff(i) *= std::exp(sec.values(i) * t);
        const Eigen::VectorXcd y = sec.vectors * coeff;
        for (int i = 0; i < b; ++i) out[sec.positions[i]] = y(i);
    }
    return basis_ * sigma * basis_.adjoint();
}

Trajectory SpectralPropagator::evolve(const Operator& rho0, std::span<const double> times) const {
    check_times(times);
    if (rho0.rows() != dim_ || rho0.cols() != dim_) {
        throw DimensionError("initial state dimension does not match the propagator");
    }
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(times.size());
    for (double t : times) {
        Operator rho = at(rho0, t);
        correct_output(rho, traj.diagnostics);
        traj.states.push_back(std::move(rho));
    }
    return traj;
}

Eigen::VectorXcd SpectralPropagator::eigenvalues() const {
    Eigen::VectorXcd all(dim_ * dim_);
    Eigen::Index pos = 0;
    for (const auto& sec : sectors_) {
        all.segment(pos, sec.values.size()) = sec.values;
        pos += sec.values.size();
    }
    return all;
}

Trajectory evolve_spectral(const Liouvillian& l, const Operator& rho0,
                           std::span<const double> times) {
    check_initial_state(l, rho0);
    return SpectralPropagator(l).evolve(rho0, times);
}

Trajectory evolve(const Liouvillian& l, const Operator& rho0, std::span<const double> times,
                  Method method, const Rk4Options& rk4) {
    return method == Method::rk4 ? evolve_rk4(l, rho0, times, rk4)
                                 : evolve_spectral(l, rho0, times);
}

Operator steady_state(const Liouvillian& l) {
    const double scale = l.rate_scale();
    if (scale == 0.0) {
        throw DegenerateKernelError("closed system: every diagonal state is stationary");
    }
    const Operator u = manifold_eigenbasis(l);
    const Liouvillian work = l.in_basis(u);
    const SuperOperator& s = work.sparse();
    const auto exc = excitation_numbers(l.space());
    const int d = l.dim();

    // The dressed ladder ends below the unpaired top state |n_max, e>, which
    // is invariant under the microscopic generator; it is left out.
    const int top = l.space().n_max() + 1;
    auto kept = [&](int k) {
        return l.kind() != MasterEquation::microscopic || exc[k] != top;
    };
    // Group vec positions by coherence order; only k = 0 can carry trace.
    std::map<int, std::vector<int>> sectors;
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            if (kept(i) && kept(j)) sectors[exc[i] - exc[j]].push_back(vec_index(i, j, d));
        }
    }
    std::vector<double> magnitudes;
    Eigen::MatrixXcd populations_block;
    for (const auto& [order, pos] : sectors) {
        const int b = static_cast<int>(pos.size());
        std::vector<int> local(d * d, -1);
        for (int i = 0; i < b; ++i) local[pos[i]] = i;
        Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(b, b);
        for (int c = 0; c < b; ++c) {
            for (SuperOperator::InnerIterator it(s, pos[c]); it; ++it) {
                const int r = local[it.row()];
                if (r >= 0) block(r, c) += it.value();
            }
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(block, false);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            magnitudes.push_back(std::abs(es.eigenvalues()(i)));
        }
        if (order == 0) populations_block = std::move(block);
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    if (magnitudes.size() < 2 || magnitudes[1] <= 1e-8 * scale) {
        throw DegenerateKernelError("Liouvillian kernel is not one-dimensional (second "
                                    "smallest |eigenvalue| " +
                                    std::to_string(magnitudes.size() > 1 ? magnitudes[1] : 0.0) +
                                    ")");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(populations_block, Eigen::ComputeFullV);
    const Eigen::VectorXcd null = svd.matrixV().col(svd.matrixV().cols() - 1);
    Operator sigma = Operator::Zero(d, d);
    const auto& pos0 = sectors.at(0);
    for (std::size_t i = 0; i < pos0.size(); ++i) sigma.data()[pos0[i]] = null(i);
    Operator rho = u * sigma * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return rho;
}

void SingleExcitationInput::validate() const {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12) {
        throw ParameterError("single-excitation amplitudes must satisfy |alpha|^2+|beta|^2=1");
    }
    params.validate();
    if (params.nbar_at_omega != 0.0) {
        throw ParameterError("closed-form single-excitation solutions are zero temperature");
    }
}

StateVector SingleExcitationInput::state(const SpaceSpec& spec) const {
    StateVector psi = StateVector::Zero(spec.dim_total());
    psi(spec.index(0, Qubit::e)) = alpha;
    psi(spec.index(1, Qubit::g)) = beta;
    return psi;
}

Operator analytic_microscopic(const SingleExcitationInput& in, const SpaceSpec& spec, double t) {
    in.validate();
    const DressedSpectrum sp = dressed_spectrum(in.params, spec);
    const Operator u = dressed_basis_matrix(sp, spec);
    const double c = sp.c[0];
    const double s = sp.s[0];
    const double gamma = in.params.gamma;
    const double a2 = std::norm(in.alpha);
    const double b2 = std::norm(in.beta);
    const double re_ab = std::real(in.alpha * std::conj(in.beta));

    // Initial dressed populations and coherence <eps_-|rho|eps_+>.
    const double p_plus = c * c * a2 + s * s * b2 + 2.0 * c * s * re_ab;
    const double p_minus = s * s * a2 + c * c * b2 - 2.0 * c * s * re_ab;
    const cplx coh = (1.0 - 2.0 * a2) * c * s + std::conj(in.alpha) * in.beta * c * c -
                     in.alpha * std::conj(in.beta) * s * s;

    const double rho_pp = p_plus * std::exp(-gamma * s * s * t);
    const double rho_mm = p_minus * std::exp(-gamma * c * c * t);
    const cplx rho_mp = coh * std::exp(-0.5 * gamma * t) * std::polar(1.0, sp.rabi[0] * t);

    const StateVector g0 = u.col(dressed_ground());
    const StateVector plus = u.col(dressed_plus(0));
    const StateVector minus = u.col(dressed_minus(0));
    Operator rho = (1.0 - rho_pp - rho_mm) * g0 * g0.adjoint() + rho_pp * plus * plus.adjoint() +
                   rho_mm * minus * minus.adjoint() + rho_mp * minus * plus.adjoint() +
                   std::conj(rho_mp) * plus * minus.adjoint();
    return rho;
}

Operator analytic_phenomenological(const SingleExcitationInput& in, const SpaceSpec& spec,
                                   double t) {
    in.validate();
    const SystemParams& p = in.params;
    const DressedSpectrum sp = dressed_spectrum(p, spec);
    const Operator u = dressed_basis_matrix(sp, spec);
    const double delta = p.detuning();
    const double gamma = p.gamma;
    const double g = p.g;
    const cplx i(0.0, 1.0);

    const cplx omega_c = std::sqrt(cplx(gamma * gamma - 16.0 * g * g, 0.0) -
                                   4.0 * delta * (delta + i * gamma)) / 2.0;
    const cplx ch = std::cosh(0.5 * omega_c * t);
    // sinh(Omega t / 2) / (2 Omega), regular at Omega -> 0.
    const cplx half = 0.5 * omega_c * t;
    const cplx sh_over = std::abs(half) < 1e-6
                             ? 0.25 * t * (1.0 + half * half / 6.0)
                             : std::sinh(half) / (2.0 * omega_c);
    const cplx phase = std::exp(-0.25 * (gamma + 6.0 * i * delta) * t);
    const cplx a_t = (in.alpha * ch + (in.alpha * (gamma - 2.0 * i * delta) -
                                      4.0 * i * in.beta * g) * sh_over) * phase;
    const cplx b_t = (in.beta * ch - (in.beta * (gamma - 2.0 * i * delta) +
                                     4.0 * i * in.alpha * g) * sh_over) * phase;

    const double c = sp.c[0];
    const double s = sp.s[0];
    const StateVector psi = (c * a_t + s * b_t) * u.col(dressed_plus(0)) +
                            (c * b_t - s * a_t) * u.col(dressed_minus(0));
    const StateVector g0 = u.col(dressed_ground());
    return (1.0 - std::norm(a_t) - std::norm(b_t)) * g0 * g0.adjoint() + psi * psi.adjoint();
}

} // namespace jcopen
