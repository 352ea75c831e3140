#pragma once

#include <cstddef>
#include <vector>

#include "fewmode/geometry.hpp"

namespace fewmode {

// One confined mode of the hard-wall interval.
struct CavityMode {
    int index = 1;       // lambda >= 1
    double omega = 0.0;  // lambda * pi / L
    double energy = 0.0; // omega^2 / 2
};

// Sine basis on [a, b] with Dirichlet walls:
//   chi_lambda(r) = sqrt(2/L) * sin(omega_lambda * (r - a)),  L = b - a.
// Orthonormal on the interval, identically zero outside. The one-sided
// boundary slopes are the data the confined block exchanges with the
// exterior, so they are exposed directly:
//   chi'(a+) = sqrt(2/L) * omega_lambda
//   chi'(b-) = sqrt(2/L) * omega_lambda * (-1)^lambda
class SystemBasis {
public:
    SystemBasis(double a, double b, std::vector<int> indices);

    double a() const { return a_; }
    double b() const { return b_; }
    double length() const { return b_ - a_; }
    std::size_t size() const { return modes_.size(); }
    const std::vector<CavityMode>& modes() const { return modes_; }
    const CavityMode& mode(std::size_t m) const { return modes_.at(m); }

    double value(std::size_t m, double r) const;
    double slope_a(std::size_t m) const;
    double slope_b(std::size_t m) const;
    double norm_factor() const;  // sqrt(2/L)

private:
    double a_;
    double b_;
    std::vector<CavityMode> modes_;
};

// Builds the basis for a potential, checking that the confined interval is
// vacuum so the sine modes are orthonormal under the wave kind's weight
// (the weight is eps(r) for maxwell_rwa/sve and 1 for schroedinger; both
// reduce to 1 on a vacuum interval).
SystemBasis dirichlet_modes(const PotentialSpec& spec, double a, double b,
                               const std::vector<int>& selector);

// Outgoing free-space resolvent kernel at energy E > 0 with E = k^2/2:
//   G0(r, r') = -(i/k) * exp(i k |r - r'|).
// Satisfies (E + d^2/dr^2 / 2) G0 = delta(r - r').
Complex free_green_kernel(double energy, double r, double rp);

}  // namespace fewmode
