#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fewmode/geometry.hpp"
#include "fewmode/modes.hpp"

namespace fewmode {

enum class Channel { left = 0, right = 1 };

// Uniform sampling grid used for exported wavefunction tables and for the
// dense integral-equation backend.
struct SpatialGrid {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;

    double step() const { return (hi - lo) / (count - 1); }
    double point(int i) const { return lo + step() * i; }
};

// Scattering solution represented region by region: between consecutive
// breakpoints the wave is a_plus*e^{+i kappa (r-ref)} + a_minus*e^{-i kappa (r-ref)},
// plus, inside the confined-mode interval, one forced-oscillation term per
// projected mode whose weight w_mu doubles as the coupling <chi_mu|H|psi>.
class PiecewiseSolution {
public:
    struct Region {
        double lo = 0.0;          // -inf conceptually for the first region
        double hi = 0.0;          // +inf conceptually for the last region
        double ref = 0.0;         // phase reference point
        double kappa = 0.0;       // local wavenumber
        bool in_mode_interval = false;
        Complex a_plus;
        Complex a_minus;
    };

    Complex value(double r) const;
    Complex slope(double r) const;

    // w_mu = <chi_mu|H|psi> for the unit-amplitude solution.
    const Eigen::VectorXcd& mode_weights() const { return weights_; }

    // Coefficients of e^{+ikr} in the rightmost region and e^{-ikr} in the
    // leftmost region (global phase convention).
    Complex outgoing_right() const;
    Complex outgoing_left() const;

    double k() const { return k_; }
    const std::vector<Region>& regions() const { return regions_; }

private:
    friend class RegionAssembler;
    std::vector<Region> regions_;
    Eigen::VectorXcd weights_;
    double k_ = 0.0;
    double q_lo_ = 0.0;  // confined interval
    double q_hi_ = 0.0;
    std::vector<double> nu_;  // mode frequencies
    double mode_norm_ = 0.0;  // sqrt(2/L)
    std::size_t region_index(double r) const;
};

struct RegionSolveResult {
    std::array<PiecewiseSolution, 2> incident;     // left, right channels
    std::vector<PiecewiseSolution> green_columns;  // one per mode if requested
    double rcond = 0.0;
    double residual = 0.0;
};

// Exact piecewise-analytic solve of the mode-projected scattering problem at
// energy E: plane-wave matching at every breakpoint, delta jump conditions,
// and explicit orthogonality to every projected mode. green_columns, when
// requested, hold the outgoing responses to the surface and interior sources
// of each projected mode, used by the Green-function route to the level-shift
// matrix.
RegionSolveResult solve_regions(const PotentialSpec& spec, const SystemBasis& basis,
                                double energy, bool with_green_columns = false);

struct BathDiagnostics {
    double rcond = 0.0;          // reciprocal condition estimate of the solve
    double residual = 0.0;       // max linear-system residual
    double q_orthogonality = 0.0; // max |<chi|psi>| over modes and channels
    double flux_error = 0.0;     // max |1 - |r|^2 - |t|^2| over channels
};

enum class BathBackend { analytic, nystrom };

// Continuum states at one energy, unit incident amplitude per channel.
struct BathStateTable {
    WaveKind kind = WaveKind::schroedinger;
    double energy = 0.0;
    double k = 0.0;
    SpatialGrid grid;
    std::array<std::vector<Complex>, 2> samples;       // on grid, per channel
    std::array<Complex, 2> value_a;                    // psi at mode-interval edges
    std::array<Complex, 2> value_b;
    std::array<Complex, 2> reflected;                  // outgoing on incidence side
    std::array<Complex, 2> transmitted;                // outgoing on far side
    Eigen::MatrixXcd couplings;                        // M x 2, <chi|H|psi>, unit amplitude
    BathDiagnostics diagnostics;
    std::array<PiecewiseSolution, 2> analytic;         // set for the analytic backend
    bool has_analytic = false;
};

// Solves for the two continuum states at energy E. The analytic backend is
// exact for piecewise-constant-plus-delta potentials; the nystrom backend
// discretizes the integral form of the same projected problem on the grid
// (nodes snapped to breakpoints, composite trapezoid) and exists to
// cross-validate the analytic one. i_epsilon is a diagnostics knob for the
// nystrom kernel only and must stay 0 for the analytic backend.
BathStateTable bath_states(const PotentialSpec& spec, const SystemBasis& basis,
                           double energy, const SpatialGrid& grid,
                           double i_epsilon = 0.0,
                           BathBackend backend = BathBackend::analytic);

}  // namespace fewmode
