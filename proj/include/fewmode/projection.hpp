#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fewmode/bath.hpp"
#include "fewmode/geometry.hpp"
#include "fewmode/modes.hpp"

namespace fewmode {

// Couplings between confined modes and continuum states, energy-normalized so
// that rows of `values` can be fed directly into the level-shift integral and
// the resonant scattering formula. Entry (lambda, channel) at each grid node.
struct CouplingTable {
    WaveKind kind = WaveKind::schroedinger;
    std::vector<double> energies;          // ascending, > 0
    std::vector<Eigen::MatrixXcd> values;  // per energy: M x 2

    std::size_t size() const { return energies.size(); }
    std::size_t mode_count() const { return values.empty() ? 0 : values.front().rows(); }

    // oscillator-frame couplings W / (2 E_lambda)^{1/4}; identity rescale for
    // schroedinger
    Eigen::MatrixXcd rescaled(std::size_t i, const SystemBasis& basis) const;

    // keeps energies ascending and dimensions consistent
    void append(double energy, Eigen::MatrixXcd row);
};

// One-energy slice of the level-shift matrix. `gamma` holds the full complex
// matrix; the real shift is -Re and the width is Im.
struct LevelShiftMatrix {
    double energy = 0.0;
    WaveKind kind = WaveKind::schroedinger;
    Eigen::MatrixXcd gamma;

    Eigen::MatrixXd shift() const { return -gamma.real(); }
    Eigen::MatrixXd width() const { return gamma.imag(); }

    // quadrature diagnostics (zero for the resolvent route)
    double tail_error = 0.0;
    bool tail_warning = false;
};

// Resonant denominator D = diag(E - E_lambda) + Gamma, kept in the
// energy-normalized frame for every wave kind.
struct DMatrix {
    double energy = 0.0;
    WaveKind kind = WaveKind::schroedinger;
    Eigen::MatrixXcd d;

    // oscillator-frame equivalent diag(sqrt(w_l))^-1 D diag(sqrt(w_l))^-1,
    // whose diagonal is (w^2 - w_l^2)/(2 w_l); needs the mode frequencies
    Eigen::MatrixXcd oscillator_frame(const SystemBasis& basis) const;

    // right-division by D; throws SolverError naming the energy when singular
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
    Eigen::MatrixXcd inverse() const;
};

// Extracts the one-energy coupling row from a solved continuum table,
// converting the solver's unit-amplitude matrix elements to energy
// normalization (division by sqrt(2 pi k)).
CouplingTable couplings(const SystemBasis& basis, const BathStateTable& bath);

// Level shift through the outgoing resolvent of the mode-free problem:
// radiating response columns are solved per mode and contracted with the
// boundary kinks. Exact for energy-independent potentials, hence restricted
// to schroedinger.
LevelShiftMatrix gamma_green(const PotentialSpec& spec, const SystemBasis& basis, double energy,
                             const SpatialGrid& grid);

// Level shift by principal-value quadrature over a precomputed coupling
// table: subtract-the-singularity sum, endpoint log term, and a closed-form
// continuation beyond the cutoff fitted to the top of the table in
// wavenumber. The width part is assembled exactly as pi W W^dagger at the
// probe energy.
LevelShiftMatrix gamma_quadrature(const CouplingTable& table, double energy);

// Assembles D = diag(E - E_lambda) + Gamma in the energy frame.
DMatrix d_matrix(double energy, const SystemBasis& basis, const LevelShiftMatrix& gamma);

}  // namespace fewmode
