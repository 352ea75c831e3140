#pragma once

#include <complex>
#include <string>
#include <vector>

namespace fewmode {

using Complex = std::complex<double>;

// Wave equation family. All three share the dispersion E = k^2/2, omega = k
// (natural units). For maxwell_rwa and sve the scatterer enters through a
// relative permittivity profile eps(r), giving the on-shell potential
// (1 - eps(r)) * E; for schroedinger the potential is a sum of delta barriers.
enum class WaveKind { schroedinger, maxwell_rwa, sve };

std::string to_string(WaveKind kind);
WaveKind wave_kind_from_string(const std::string& name);

// Self-consistent kinematic triple.
struct Dispersion {
    double energy = 0.0;
    double omega = 0.0;
    double k = 0.0;
};

Dispersion dispersion_from_k(double k);
Dispersion dispersion_from_omega(double omega);
Dispersion dispersion_from_energy(double energy);

// Point scatterer. For schroedinger the strength is the barrier weight xi
// in V = xi * delta(r - position) (units 1/length). For maxwell_rwa/sve it is
// the thin-mirror weight eta in eps = 1 + eta * delta(r - position)
// (units length), which must be non-negative.
struct DeltaBarrier {
    double position = 0.0;
    double strength = 0.0;
};

// Homogeneous dielectric slab, eps = n^2 on [start, end]. Only meaningful for
// maxwell_rwa/sve; schroedinger specs must not carry layers.
struct Layer {
    double start = 0.0;
    double end = 0.0;
    double refractive_index = 1.0;
};

// Scattering potential on the line. Outside [support_min, support_max] the
// medium is vacuum (eps = 1, V = 0) and all barriers/layers must lie inside.
struct PotentialSpec {
    WaveKind kind = WaveKind::schroedinger;
    double support_min = 0.0;
    double support_max = 0.0;
    std::vector<DeltaBarrier> deltas;
    std::vector<Layer> layers;

    bool mirror_symmetric(double tol = 1e-12) const;
};

// Throws std::invalid_argument (message names the offending field) if the
// spec violates the layout rules above.
void validate(const PotentialSpec& spec);

// Smooth relative permittivity at r (layers only; delta weights excluded).
double epsilon_smooth(const PotentialSpec& spec, double r);

// Smooth part of the on-shell potential at r for probe frequency omega.
// Evaluation exactly at a delta position is a domain error: the delta weight
// is not representable as a pointwise value.
double potential_value(const PotentialSpec& spec, double r, double omega);

// Schroedinger-normalized weight g of each delta at probe energy E, i.e. the
// jump condition reads psi'(a+) - psi'(a-) = 2 g psi(a). For schroedinger
// g = xi; for maxwell_rwa/sve g = -eta * E.
double delta_weight(const PotentialSpec& spec, std::size_t index, double energy);

// Amplitude reflection coefficient of a single thin mirror of weight eta at
// frequency omega: r = i*omega*eta / (2 - i*omega*eta). Satisfies the
// lossless closure |r|^2 + |1+r|^2 = 1.
Complex ley_loudon_reflectivity(double eta, double omega);

// Sorted positions where the potential changes character (support ends,
// layer edges, delta positions). Used to build piecewise solvers.
std::vector<double> breakpoints(const PotentialSpec& spec);

}  // namespace fewmode
