#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fewmode/bath.hpp"
#include "fewmode/geometry.hpp"
#include "fewmode/modes.hpp"
#include "fewmode/projection.hpp"

namespace fewmode {

// Two-channel scattering matrix. Row is the outgoing channel, column the
// incident one; with channel 0 fed from the left and 1 from the right the
// diagonal holds transmissions (free propagation is the identity) and the
// off-diagonal holds reflections.
struct SMatrix {
    double energy = 0.0;
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Identity();

    Complex transmission() const { return s(0, 0); }          // left -> right
    Complex transmission_reverse() const { return s(1, 1); }  // right -> left
    Complex reflection_left() const { return s(1, 0); }
    Complex reflection_right() const { return s(0, 1); }
    double unitarity_defect() const {
        return (s.adjoint() * s - Eigen::Matrix2cd::Identity()).norm();
    }
};

struct SpectrumPoint {
    SMatrix full;
    SMatrix io;
    SMatrix bg;
    bool has_atom = false;
    double gamma_s = 0.0;   // spontaneous-emission width into the continuum
    double delta_ls = 0.0;  // level shift of the emitter
    double kappa_t = 0.0;   // emitter width restricted to the transmitted port
};

struct SpectrumResult {
    WaveKind kind = WaveKind::schroedinger;
    bool frequency_axis = false;  // grid holds frequency instead of energy
    std::vector<double> grid;
    std::vector<SpectrumPoint> points;
    std::vector<std::pair<std::string, std::string>> manifest;
};

// Point scatterer expressed as a delta spike in the permittivity,
// eps -> eps + weight * delta(r - position).
struct SusceptibilityLayer {
    double position = 0.0;
    double weight = 0.0;
};

// Resonant factor I - 2 pi i W^dagger D^-1 W from one coupling row and the
// matching resonant denominator.
SMatrix s_io(const CouplingTable& w_row, const DMatrix& d);

// Smooth background factor: the continuum-to-continuum matrix element of the
// potential with the mode content subtracted, evaluated in closed form from
// the piecewise solution.
SMatrix s_bg(const PotentialSpec& spec, const SystemBasis& basis, const BathStateTable& bath,
             const CouplingTable& w_row);

// Product of the two factors at a common energy.
SMatrix s_full(const SMatrix& bg, const SMatrix& io);

// Independent exact reference: marches 2x2 interface/jump matrices across the
// geometry and reads off the scattering amplitudes.
SMatrix transfer_matrix_oracle(const PotentialSpec& spec, double energy,
                               const std::optional<SusceptibilityLayer>& atom_layer = {});

}  // namespace fewmode
