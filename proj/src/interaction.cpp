#include "fewmode/interaction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "fewmode/errors.hpp"

namespace fewmode {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// The emitter theory lives in the frequency-normalized oscillator frame, so
// the resonant denominator must describe a wave-equation kind.
void require_wave_equation(WaveKind kind, const char* where) {
    if (kind == WaveKind::schroedinger)
        throw std::invalid_argument(std::string(where) +
                                    " needs a wave-equation resonant denominator, "
                                    "not a matter-wave one");
}

double probe_frequency(const DMatrix& d) { return std::sqrt(2.0 * d.energy); }

// Shared contraction pieces: x_g = D^-1 g*, x_w = D^-1 W, all in the
// oscillator frame.
struct Contraction {
    Eigen::VectorXcd x_g;
    Eigen::MatrixXcd x_w;
    Eigen::MatrixXcd w_osc;
    Complex shift;  // g^T D^-1 g*
};

Contraction contract(const CouplingTable& w_row, const DMatrix& d, const SystemBasis& basis,
                     const AtomCouplings& g, const char* where) {
    require_wave_equation(d.kind, where);
    if (w_row.size() != 1)
        throw std::invalid_argument(std::string(where) +
                                    " expects a single-energy coupling row");
    if (std::abs(w_row.energies.front() - d.energy) >
        1e-12 * std::max(1.0, std::abs(d.energy)))
        throw std::invalid_argument(std::string(where) +
                                    ": coupling row and denominator disagree in energy");
    if (g.g.size() != d.d.rows() ||
        static_cast<std::size_t>(g.g.size()) != basis.size())
        throw std::invalid_argument(std::string(where) +
                                    ": emitter couplings do not match the mode count");

    Eigen::VectorXd inv_sqrt(basis.size());
    for (std::size_t m = 0; m < basis.size(); ++m)
        inv_sqrt(static_cast<Eigen::Index>(m)) = 1.0 / std::sqrt(basis.mode(m).omega);

    Contraction out;
    out.w_osc = inv_sqrt.asDiagonal() * w_row.values.front();
    const Eigen::MatrixXcd d_osc = d.oscillator_frame(basis);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(d_osc);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible())
        throw SolverError("resonant denominator is singular at energy " +
                          std::to_string(d.energy));
    out.x_g = lu.solve(g.g.conjugate());
    out.x_w = lu.solve(out.w_osc);
    out.shift = (g.g.transpose() * out.x_g)(0, 0);
    return out;
}

}  // namespace

double DriveResponse::fixed_point_residual() const {
    const Complex eq_coherence =
        Complex(0.0, 1.0) *
        (detuning * sigma_minus + rabi * sigma_z - level_shift * sigma_minus);
    const Complex sigma_plus = std::conj(sigma_minus);
    const double eq_population = 2.0 * std::imag(rabi * sigma_plus) +
                                 std::imag(level_shift) * (sigma_z + 1.0);
    return std::max(std::abs(eq_coherence), std::abs(eq_population));
}

AtomCouplings atom_couplings(const AtomSpec& atom, const SystemBasis& basis) {
    if (!(atom.position >= basis.a() && atom.position <= basis.b()))
        throw std::invalid_argument("emitter sits outside the confined interval");
    AtomCouplings out;
    out.g.resize(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const double omega_m = basis.mode(m).omega;
        out.g(static_cast<Eigen::Index>(m)) =
            Complex(0.0, -1.0) * atom.dipole * atom.omega_a *
            std::sqrt(0.5 / omega_m) * basis.value(m, atom.position);
    }
    return out;
}

LinearResponse level_shift(const AtomCouplings& g, const DMatrix& d,
                           const SystemBasis& basis) {
    require_wave_equation(d.kind, "level_shift");
    if (g.g.size() != d.d.rows() ||
        static_cast<std::size_t>(g.g.size()) != basis.size())
        throw std::invalid_argument("emitter couplings do not match the mode count");
    LinearResponse out;
    out.omega = probe_frequency(d);
    if (g.g.size() == 0) return out;
    const Eigen::MatrixXcd d_osc = d.oscillator_frame(basis);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(d_osc);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible())
        throw SolverError("resonant denominator is singular at energy " +
                          std::to_string(d.energy));
    const Eigen::VectorXcd x = lu.solve(g.g.conjugate());
    out.level_shift = (g.g.transpose() * x)(0, 0);
    return out;
}

SMatrix linear_smatrix_with_atom(const CouplingTable& w_row, const DMatrix& d,
                                 const SystemBasis& basis, const AtomCouplings& g,
                                 double omega_a) {
    const Contraction c = contract(w_row, d, basis, g, "linear_smatrix_with_atom");
    const double omega = probe_frequency(d);

    SMatrix out;
    out.energy = d.energy;
    out.s = Eigen::Matrix2cd::Identity() -
            Complex(0.0, kTwoPi) * (c.w_osc.adjoint() * c.x_w);

    const Complex denom = omega - omega_a - c.shift;
    if (!(std::abs(denom) > 0.0))
        throw SolverError("emitter pole hit exactly at frequency " + std::to_string(omega));
    const Eigen::Vector2cd into = c.w_osc.adjoint() * c.x_g;   // W^dag D^-1 g*
    const Eigen::RowVector2cd from = g.g.transpose() * c.x_w;  // g^T D^-1 W
    out.s -= Complex(0.0, kTwoPi) / denom * (into * from);
    return out;
}

double atom_transmission_rate(const CouplingTable& w_row, const DMatrix& d,
                              const SystemBasis& basis, const AtomCouplings& g) {
    const Contraction c = contract(w_row, d, basis, g, "atom_transmission_rate");
    const Eigen::Vector2cd into = c.w_osc.adjoint() * c.x_g;
    const Eigen::RowVector2cd from = g.g.transpose() * c.x_w;
    return kTwoPi * std::abs((into * from)(0, 0));
}

double effective_permittivity_layer(const AtomSpec& atom, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("layer strength needs omega > 0");
    const double wa2 = atom.omega_a * atom.omega_a;
    const double split = omega * omega - wa2;
    if (std::abs(split) < 1e-12 * std::max(1.0, wa2))
        throw std::domain_error("probe frequency sits on the bare emitter pole");
    return -2.0 * wa2 * atom.omega_a * atom.dipole * atom.dipole /
           (omega * omega * split);
}

SMatrix linear_dispersion_oracle(const PotentialSpec& spec, const AtomSpec& atom,
                                 double energy) {
    const double omega = std::sqrt(2.0 * energy);
    const SusceptibilityLayer layer{atom.position,
                                    effective_permittivity_layer(atom, omega)};
    return transfer_matrix_oracle(spec, energy, layer);
}

DriveResponse semiclassical_steady_state(const CouplingTable& w_row, const DMatrix& d,
                                         const SystemBasis& basis, const AtomCouplings& g,
                                         const AtomSpec& atom,
                                         const Eigen::Vector2cd& b_in) {
    const Contraction c = contract(w_row, d, basis, g, "semiclassical_steady_state");

    DriveResponse out;
    out.omega_in = probe_frequency(d);
    out.b_in = b_in;
    out.detuning = out.omega_in - atom.omega_a;
    out.level_shift = c.shift;
    out.rabi = kTwoPi * (g.g.transpose() * (c.x_w * b_in))(0, 0);

    // sigma^z rewritten over the common real denominator |Delta - delta|^2
    // + 2 |Omega|^2, which shows it real and pinned to [-1, 0]
    const Complex pole = out.detuning - out.level_shift;
    const double denom = std::norm(pole) + 2.0 * std::norm(out.rabi);
    if (!(denom > 0.0))
        throw SolverError("driven steady state is singular: undamped emitter hit "
                          "exactly on resonance");
    out.sigma_minus = out.rabi * std::conj(pole) / denom;
    out.sigma_z = -std::norm(pole) / denom;

    out.b_out = b_in - Complex(0.0, 1.0) *
                           (c.w_osc.adjoint() *
                            (kTwoPi * (c.x_w * b_in) + c.x_g * out.sigma_minus));
    return out;
}

}  // namespace fewmode
