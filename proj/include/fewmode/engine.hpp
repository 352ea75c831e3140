#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fewmode/config.hpp"
#include "fewmode/interaction.hpp"
#include "fewmode/projection.hpp"
#include "fewmode/scattering.hpp"

namespace fewmode {

// Schroedinger grids carry energy; the wave kinds probe in frequency.
bool frequency_axis(WaveKind kind);

// Probe energy behind one grid value under the shared dispersion.
double grid_energy(WaveKind kind, double value);

// `automatic` picks the exact resolvent route for schroedinger and the
// tabulated quadrature route for the wave kinds.
GammaRoute resolve_gamma_route(WaveKind kind, GammaRoute requested);

// Frequency (grid units) of the bare structure's transmission maximum inside
// the probe band: a dense reference scan refined by the parabolic vertex
// through the best node. A maximum pinned to a band edge has no interior
// vertex and raises ConfigError naming atom.omega_a.
double locate_peak(const PotentialSpec& spec, const GridConfig& grid);

// Coupling rows tabulated for the quadrature route. Nodes are the union of a
// global ladder spanning [e_min, e_max] (uniform in k for the wave kinds, in
// energy for schroedinger), a fine frequency window around the probe band,
// a refinement cluster across each confined-mode line whose measured width
// is narrow, and every probe energy exactly, so the on-shell row entering
// the principal value is the row the scattering factors see. Both quadrature
// edges must clear the probe band (ConfigError otherwise).
CouplingTable build_coupling_table(const PotentialSpec& spec, const SystemBasis& basis,
                                   const QuadratureConfig& quad,
                                   const std::vector<double>& probe_energies, int threads = 1);

struct SpectrumRun {
    SpectrumResult result;
    // reference |t|^2 per grid point from the independent transfer-matrix
    // solver (emitter folded in as its permittivity layer when present);
    // empty when the outputs disable it
    std::vector<double> oracle;
    double resolved_omega_a = 0.0;  // 0 without an emitter
};

// One driven steady state. `b_out_full` carries the smooth background factor
// on top of the io-frame outgoing amplitudes.
struct DrivePoint {
    DriveResponse response;
    Eigen::Vector2cd b_out_full = Eigen::Vector2cd::Zero();
};

struct DriveRun {
    WaveKind kind = WaveKind::maxwell_rwa;
    std::vector<double> grid;  // drive frequencies
    std::vector<DrivePoint> points;
    std::vector<double> oracle;  // bare-structure |t|^2, only on request
    std::vector<std::pair<std::string, std::string>> manifest;
    double resolved_omega_a = 0.0;
};

// Full per-point pipeline: bath solve, coupling row, level-shift matrix,
// damping matrix, scattering factors, and the emitter response when one is
// configured. Grid points are independent and results are written in grid
// order, so every thread count produces identical output; solver failures
// surface as SolverError annotated with the grid point. Configs with a drive
// block belong to compute_drive.
SpectrumRun compute_spectrum(const RunConfig& cfg, int threads = 1);

// Semiclassical steady states over the grid for configs with a drive block.
DriveRun compute_drive(const RunConfig& cfg, int threads = 1);

}  // namespace fewmode
