#include "jcopen/lindblad.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "jcopen/csv.hpp"
#include "jcopen/errors.hpp"

namespace jcopen {

double thermal_occupation(double nu, double kT) {
    if (!(nu > 0.0)) {
        throw DomainError("thermal occupation needs a positive frequency, got " +
                          std::to_string(nu));
    }
    if (kT < 0.0) throw DomainError("temperature must be non-negative");
    if (kT == 0.0) return 0.0;
    return 1.0 / std::expm1(nu / kT);
}

double temperature_from_occupation(double nbar, double omega) {
    if (nbar < 0.0) throw DomainError("thermal occupation must be non-negative");
    if (!(omega > 0.0)) throw DomainError("reference frequency must be positive");
    if (nbar == 0.0) return 0.0;
    return omega / std::log1p(1.0 / nbar);
}

LadderAmplitudes ladder_amplitudes(const DressedSpectrum& sp, int n) {
    if (n < 0 || n + 1 >= sp.manifolds()) {
        throw DimensionError("ladder amplitudes need manifolds n and n+1, n=" +
                             std::to_string(n));
    }
    const double r1 = std::sqrt(n + 1.0);
    const double r2 = std::sqrt(n + 2.0);
    LadderAmplitudes amp;
    amp.a = sp.c[n] * sp.c[n + 1] * r1 + sp.s[n] * sp.s[n + 1] * r2;
    amp.b = sp.s[n] * sp.s[n + 1] * r1 + sp.c[n] * sp.c[n + 1] * r2;
    amp.d = sp.s[n] * sp.c[n + 1] * r2 - sp.c[n] * sp.s[n + 1] * r1;
    return amp;
}

const RateSlot& RateTable::slot(int index, int n) const {
    if (index == 1 || index == 2) return ground[index - 1];
    if (index < 3 || index > 6) throw DomainError("rate index must be in 1..6");
    if (n < 0 || n >= static_cast<int>(ladder.size())) {
        throw DimensionError("no ladder rates for n=" + std::to_string(n));
    }
    return ladder[n].slot[index - 3];
}

namespace {

RateSlot make_slot(int index, int n, double nu, double gamma, double kT) {
    if (!(nu > 0.0)) throw BohrFrequencyError(index, n, nu);
    const double occ = thermal_occupation(nu, kT);
    return RateSlot{nu, (1.0 + occ) * gamma, occ * gamma};
}

} // namespace

RateTable build_rate_table(const SystemParams& params, const DressedSpectrum& sp) {
    RateTable table;
    table.gamma = params.gamma;
    table.kT = temperature_from_occupation(params.nbar_at_omega, params.omega);
    const double w = params.omega;
    const double w0 = params.omega0;
    const double r0 = sp.rabi.at(0);
    table.ground[0] = make_slot(1, 0, 0.5 * (w0 + w + r0), params.gamma, table.kT);
    table.ground[1] = make_slot(2, 0, 0.5 * (w0 + w - r0), params.gamma, table.kT);
    for (int n = 0; n + 1 < sp.manifolds(); ++n) {
        const double diff = 0.5 * (sp.rabi[n + 1] - sp.rabi[n]);
        const double sum = 0.5 * (sp.rabi[n + 1] + sp.rabi[n]);
        LadderRates lr;
        lr.n = n;
        lr.amp = ladder_amplitudes(sp, n);
        lr.slot[0] = make_slot(3, n, w + diff, params.gamma, table.kT);
        lr.slot[1] = make_slot(4, n, w - diff, params.gamma, table.kT);
        lr.slot[2] = make_slot(5, n, w + sum, params.gamma, table.kT);
        lr.slot[3] = make_slot(6, n, w - sum, params.gamma, table.kT);
        table.ladder.push_back(lr);
    }
    return table;
}

void write_rate_table_csv(std::ostream& os, const RateTable& table) {
    os << "n,a_n,b_n,d_n";
    for (int i = 1; i <= 6; ++i) os << ",gamma" << i;
    for (int i = 1; i <= 6; ++i) os << ",gtilde" << i;
    os << '\n';
    for (const auto& lr : table.ladder) {
        os << lr.n << ',' << csv::format(lr.amp.a) << ',' << csv::format(lr.amp.b) << ','
           << csv::format(lr.amp.d);
        for (int i = 1; i <= 6; ++i) os << ',' << csv::format(table.rate(i, lr.n));
        for (int i = 1; i <= 6; ++i) os << ',' << csv::format(table.rate_tilde(i, lr.n));
        os << '\n';
    }
}

std::vector<JumpOperator> build_jump_operators(const DressedSpectrum& sp,
                                               const SpaceSpec& spec) {
    const Operator u = dressed_basis_matrix(sp, spec);
    auto ket = [&](int col) -> StateVector { return u.col(col); };
    auto rank_one = [&](double amp, int to, int from) -> Operator {
        return amp * ket(to) * ket(from).adjoint();
    };

    std::vector<JumpOperator> jumps;
    jumps.push_back({rank_one(sp.s[0], dressed_ground(), dressed_plus(0)), 1, 0,
                     "ground<-plus0"});
    jumps.push_back({rank_one(sp.c[0], dressed_ground(), dressed_minus(0)), 2, 0,
                     "ground<-minus0"});
    for (int n = 0; n + 1 < sp.manifolds(); ++n) {
        const LadderAmplitudes amp = ladder_amplitudes(sp, n);
        const std::string tag = std::to_string(n);
        jumps.push_back({rank_one(amp.a, dressed_plus(n), dressed_plus(n + 1)), 3, n,
                         "plus" + tag + "<-plus" + std::to_string(n + 1)});
        jumps.push_back({rank_one(amp.b, dressed_minus(n), dressed_minus(n + 1)), 4, n,
                         "minus" + tag + "<-minus" + std::to_string(n + 1)});
        jumps.push_back({rank_one(amp.d, dressed_minus(n), dressed_plus(n + 1)), 5, n,
                         "minus" + tag + "<-plus" + std::to_string(n + 1)});
        jumps.push_back({rank_one(amp.d, dressed_plus(n), dressed_minus(n + 1)), 6, n,
                         "plus" + tag + "<-minus" + std::to_string(n + 1)});
    }
    return jumps;
}

std::string to_string(MasterEquation kind) {
    return kind == MasterEquation::microscopic ? "microscopic" : "phenomenological";
}

Eigen::VectorXcd vectorize(const Operator& rho) {
    return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
        throw DimensionError("vector length does not match dim^2");
    }
    return Eigen::Map<const Operator>(v.data(), dim, dim);
}

namespace {

struct Entry {
    int row;
    int col;
    cplx value;
};

std::vector<Entry> nonzeros(const Operator& m) {
    std::vector<Entry> out;
    for (int j = 0; j < m.cols(); ++j) {
        for (int i = 0; i < m.rows(); ++i) {
            if (m(i, j) != cplx(0.0)) out.push_back({i, j, m(i, j)});
        }
    }
    return out;
}

SuperOperator assemble(const Operator& h, const std::vector<Dissipator>& terms) {
    const int d = static_cast<int>(h.rows());
    Operator m = Operator::Zero(d, d);
    for (const auto& t : terms) m += t.rate * (t.jump.adjoint() * t.jump);
    // L rho = K rho + rho K^dag + sum_k r_k J_k rho J_k^dag
    const Operator k = cplx(0.0, -1.0) * h - 0.5 * m;

    std::vector<Eigen::Triplet<cplx>> triplets;
    for (const Entry& e : nonzeros(k)) {
        for (int j = 0; j < d; ++j) {
            triplets.emplace_back(vec_index(e.row, j, d), vec_index(e.col, j, d), e.value);
        }
    }
    // (rho K^dag)_ij = sum_l rho_il conj(K_jl)
    for (const Entry& e : nonzeros(k)) {
        const int j = e.row;
        const int l = e.col;
        for (int i = 0; i < d; ++i) {
            triplets.emplace_back(vec_index(i, j, d), vec_index(i, l, d), std::conj(e.value));
        }
    }
    for (const auto& t : terms) {
        const auto nz = nonzeros(t.jump);
        for (const Entry& x : nz) {
            for (const Entry& y : nz) {
                triplets.emplace_back(vec_index(x.row, y.row, d), vec_index(x.col, y.col, d),
                                      t.rate * x.value * std::conj(y.value));
            }
        }
    }
    SuperOperator s(d * d, d * d);
    s.setFromTriplets(triplets.begin(), triplets.end());
    s.prune(cplx(0.0));
    s.makeCompressed();
    return s;
}

Operator drop_roundoff(Operator m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return m;
    const double cut = 1e-14 * scale;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) < cut) m(i, j) = 0.0;
        }
    }
    return m;
}

} // namespace

Liouvillian::Liouvillian(MasterEquation kind, SpaceSpec space, Operator hamiltonian,
                         std::vector<Dissipator> dissipators)
    : kind_(kind), space_(space), hamiltonian_(std::move(hamiltonian)),
      dissipators_(std::move(dissipators)) {
    const int d = space_.dim_total();
    if (hamiltonian_.rows() != d || hamiltonian_.cols() != d) {
        throw DimensionError("Hamiltonian does not match the space dimension");
    }
    for (const auto& t : dissipators_) {
        if (t.jump.rows() != d || t.jump.cols() != d) {
            throw DimensionError("jump operator '" + t.label + "' has wrong dimension");
        }
        if (t.rate < 0.0) throw ParameterError("negative rate for '" + t.label + "'");
    }
    super_ = assemble(hamiltonian_, dissipators_);
}

Operator Liouvillian::apply(const Operator& rho) const {
    Operator out = cplx(0.0, -1.0) * (hamiltonian_ * rho - rho * hamiltonian_);
    for (const auto& t : dissipators_) {
        const Operator jd = t.jump.adjoint();
        const Operator jdj = jd * t.jump;
        out += t.rate * (t.jump * rho * jd - 0.5 * (jdj * rho + rho * jdj));
    }
    return out;
}

Liouvillian Liouvillian::in_basis(const Operator& u) const {
    std::vector<Dissipator> rotated;
    rotated.reserve(dissipators_.size());
    for (const auto& t : dissipators_) {
        rotated.push_back({t.rate, drop_roundoff(u.adjoint() * t.jump * u), t.label});
    }
    Operator h = u.adjoint() * hamiltonian_ * u;
    h = drop_roundoff(0.5 * (h + h.adjoint()));
    return Liouvillian(kind_, space_, std::move(h), std::move(rotated));
}

double Liouvillian::rate_scale() const {
    double scale = 0.0;
    for (const auto& t : dissipators_) {
        const double norm2 = (t.jump.adjoint() * t.jump).cwiseAbs().maxCoeff();
        scale = std::max(scale, t.rate * norm2);
    }
    return scale;
}

Liouvillian build_microscopic_liouvillian(const SystemParams& params,
                                          const DressedSpectrum& spectrum,
                                          const SpaceSpec& spec) {
    params.validate();
    params.require_rwa();
    const RateTable table = build_rate_table(params, spectrum);
    std::vector<Dissipator> terms;
    for (auto& jump : build_jump_operators(spectrum, spec)) {
        const RateSlot& slot = table.slot(jump.rate_index, jump.n);
        if (slot.down > 0.0) terms.push_back({slot.down, jump.matrix, jump.label});
        if (slot.up > 0.0) {
            terms.push_back({slot.up, jump.matrix.adjoint(), jump.label + " (up)"});
        }
    }
    return Liouvillian(MasterEquation::microscopic, spec, build_jc_hamiltonian(params, spec),
                       std::move(terms));
}

Liouvillian build_phenomenological_liouvillian(const SystemParams& params,
                                               const SpaceSpec& spec) {
    params.validate();
    const double occ = params.nbar_at_omega;
    const Operator a = build_annihilation(spec);
    std::vector<Dissipator> terms;
    if (params.gamma > 0.0) {
        terms.push_back({params.gamma * (occ + 1.0), a, "a"});
        if (occ > 0.0) terms.push_back({params.gamma * occ, a.adjoint(), "a^dag"});
    }
    return Liouvillian(MasterEquation::phenomenological, spec,
                       build_jc_hamiltonian(params, spec), std::move(terms));
}

} // namespace jcopen
