#include "fewmode/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fewmode {

SystemBasis::SystemBasis(double a, double b, std::vector<int> indices)
    : a_(a), b_(b) {
    if (!(a < b)) throw std::invalid_argument("mode interval: a must be < b");
    {
        auto sorted = indices;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("mode selector contains a duplicate index");
    }
    const double L = b - a;
    modes_.reserve(indices.size());
    for (int lam : indices) {
        if (lam < 1) throw std::invalid_argument("mode index must be >= 1");
        CavityMode m;
        m.index = lam;
        m.omega = static_cast<double>(lam) * std::numbers::pi / L;
        m.energy = 0.5 * m.omega * m.omega;
        modes_.push_back(m);
    }
}

double SystemBasis::value(std::size_t m, double r) const {
    if (r < a_ || r > b_) return 0.0;
    const auto& md = modes_.at(m);
    return norm_factor() * std::sin(md.omega * (r - a_));
}

double SystemBasis::slope_a(std::size_t m) const {
    return norm_factor() * modes_.at(m).omega;
}

double SystemBasis::slope_b(std::size_t m) const {
    const auto& md = modes_.at(m);
    const double sign = (md.index % 2 == 0) ? 1.0 : -1.0;
    return norm_factor() * md.omega * sign;
}

double SystemBasis::norm_factor() const {
    return std::sqrt(2.0 / length());
}

SystemBasis dirichlet_modes(const PotentialSpec& spec, double a, double b,
                               const std::vector<int>& selector) {
    for (const auto& l : spec.layers) {
        if (std::max(l.start, a) < std::min(l.end, b))
            throw std::invalid_argument(
                "confined interval overlaps a dielectric layer; sine modes would not be "
                "orthonormal under the permittivity weight");
    }
    return SystemBasis(a, b, selector);
}

Complex free_green_kernel(double energy, double r, double rp) {
    if (!(energy > 0.0)) throw std::domain_error("free resolvent needs energy > 0");
    const double k = std::sqrt(2.0 * energy);
    const Complex i(0.0, 1.0);
    return -(i / k) * std::exp(i * k * std::abs(r - rp));
}

}  // namespace fewmode
