#pragma once

#include <Eigen/Dense>

#include "fewmode/geometry.hpp"
#include "fewmode/modes.hpp"
#include "fewmode/projection.hpp"
#include "fewmode/scattering.hpp"

namespace fewmode {

// A single two-level emitter inside the confined interval. The dipole moment
// is dimensionless in the units of the rest of the library.
struct AtomSpec {
    double omega_a = 0.0;   // transition frequency
    double dipole = 0.0;    // transition dipole moment
    double position = 0.0;  // emitter location
};

// Emitter-mode couplings in the rotating-wave frame, one entry per selected
// mode: g = -i * d * omega_a * sqrt(1 / (2 omega_lambda)) * chi(r_a).
struct AtomCouplings {
    Eigen::VectorXcd g;
};

// Complex emitter level shift g^T D^-1 g* at one probe frequency. The
// imaginary part is the cavity-enhanced radiative width (nonnegative while
// the mode damping matrix stays positive semidefinite), the real part the
// cavity-induced line shift.
struct LinearResponse {
    double omega = 0.0;
    Complex level_shift{};

    double width() const { return -level_shift.imag(); }
    double shift() const { return level_shift.real(); }
};

// Steady state of the emitter under a monochromatic classical drive, plus
// the outgoing amplitudes in the resonant (io) frame. The observable
// spectrum still carries the smooth background factor.
struct DriveResponse {
    double omega_in = 0.0;
    Eigen::Vector2cd b_in = Eigen::Vector2cd::Zero();
    Eigen::Vector2cd b_out = Eigen::Vector2cd::Zero();

    double detuning = 0.0;    // drive frequency minus transition frequency
    Complex rabi{};           // cavity-filtered drive amplitude at the emitter
    Complex level_shift{};    // cavity-dressed complex shift at the drive
    Complex sigma_minus{};
    double sigma_z = -1.0;

    // largest violation of the stationarity conditions; exact solutions sit
    // at roundoff
    double fixed_point_residual() const;
};

// Couplings of the emitter to the selected modes. Demands the emitter inside
// the confined interval; a node of a mode function yields a vanishing entry.
AtomCouplings atom_couplings(const AtomSpec& atom, const SystemBasis& basis);

// Complex level shift at the probe frequency of `d` (wave-equation kinds
// only; the contraction lives in the oscillator frame).
LinearResponse level_shift(const AtomCouplings& g, const DMatrix& d, const SystemBasis& basis);

// Resonant scattering factor with the emitter pole:
//   S = S_free - 2 pi i (W^dag D^-1 g*) (g^T D^-1 W) / (omega - omega_a - g^T D^-1 g*).
// `w_row` is a single-energy coupling row as fed to s_io.
SMatrix linear_smatrix_with_atom(const CouplingTable& w_row, const DMatrix& d,
                                 const SystemBasis& basis, const AtomCouplings& g,
                                 double omega_a);

// Emitter width funneled into the transmitted port,
// 2 pi |[W^dag D^-1 g* g^T D^-1 W]| at the transmission element.
double atom_transmission_rate(const CouplingTable& w_row, const DMatrix& d,
                              const SystemBasis& basis, const AtomCouplings& g);

// Equivalent delta-layer strength added to the permittivity by the emitter,
// counter-rotating response included through the omega^2 - omega_a^2
// denominator. Real away from the bare pole, so the layer keeps the
// reference spectrum unitary.
double effective_permittivity_layer(const AtomSpec& atom, double omega);

// Independent reference for linear interacting spectra: the transfer-matrix
// march with the emitter inserted as its equivalent permittivity layer.
SMatrix linear_dispersion_oracle(const PotentialSpec& spec, const AtomSpec& atom,
                                 double energy);

// Closed-form steady state under a classical monochromatic drive at the
// probe frequency of `d`, with outgoing amplitudes in the io frame.
DriveResponse semiclassical_steady_state(const CouplingTable& w_row, const DMatrix& d,
                                         const SystemBasis& basis, const AtomCouplings& g,
                                         const AtomSpec& atom, const Eigen::Vector2cd& b_in);

}  // namespace fewmode
