#include "fewmode/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fewmode {

std::string to_string(WaveKind kind) {
    switch (kind) {
        case WaveKind::schroedinger: return "schroedinger";
        case WaveKind::maxwell_rwa: return "maxwell_rwa";
        case WaveKind::sve: return "sve";
    }
    throw std::logic_error("unreachable wave kind");
}

WaveKind wave_kind_from_string(const std::string& name) {
    if (name == "schroedinger") return WaveKind::schroedinger;
    if (name == "maxwell_rwa") return WaveKind::maxwell_rwa;
    if (name == "sve") return WaveKind::sve;
    throw std::invalid_argument("unknown wave kind '" + name +
                                "' (expected schroedinger, maxwell_rwa, or sve)");
}

Dispersion dispersion_from_k(double k) {
    if (!(k > 0.0)) throw std::domain_error("wavenumber must be positive");
    return {0.5 * k * k, k, k};
}

Dispersion dispersion_from_omega(double omega) {
    if (!(omega > 0.0)) throw std::domain_error("frequency must be positive");
    return {0.5 * omega * omega, omega, omega};
}

Dispersion dispersion_from_energy(double energy) {
    if (!(energy > 0.0)) throw std::domain_error("energy must be positive");
    const double k = std::sqrt(2.0 * energy);
    return {energy, k, k};
}

bool PotentialSpec::mirror_symmetric(double tol) const {
    const double c = 0.5 * (support_min + support_max);
    auto mirrored = [&](double x) { return 2.0 * c - x; };
    for (const auto& d : deltas) {
        bool found = false;
        for (const auto& e : deltas) {
            if (std::abs(e.position - mirrored(d.position)) < tol &&
                std::abs(e.strength - d.strength) < tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    for (const auto& l : layers) {
        bool found = false;
        for (const auto& m : layers) {
            if (std::abs(m.start - mirrored(l.end)) < tol &&
                std::abs(m.end - mirrored(l.start)) < tol &&
                std::abs(m.refractive_index - l.refractive_index) < tol) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

void validate(const PotentialSpec& spec) {
    if (!(spec.support_min < spec.support_max))
        throw std::invalid_argument("potential.support: support_min must be < support_max");
    for (std::size_t i = 0; i < spec.deltas.size(); ++i) {
        const auto& d = spec.deltas[i];
        if (d.position < spec.support_min || d.position > spec.support_max)
            throw std::invalid_argument("potential.deltas[" + std::to_string(i) +
                                        "].position lies outside the support interval");
        if (spec.kind != WaveKind::schroedinger && d.strength < 0.0)
            throw std::invalid_argument("potential.deltas[" + std::to_string(i) +
                                        "].strength: mirror weight must be non-negative");
    }
    if (spec.kind == WaveKind::schroedinger && !spec.layers.empty())
        throw std::invalid_argument("potential.layers: dielectric layers require maxwell_rwa or sve");
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const auto& l = spec.layers[i];
        if (!(l.start < l.end))
            throw std::invalid_argument("potential.layers[" + std::to_string(i) +
                                        "]: start must be < end");
        if (l.start < spec.support_min || l.end > spec.support_max)
            throw std::invalid_argument("potential.layers[" + std::to_string(i) +
                                        "] extends outside the support interval");
        if (!(l.refractive_index > 0.0))
            throw std::invalid_argument("potential.layers[" + std::to_string(i) +
                                        "].refractive_index must be positive");
        for (std::size_t j = i + 1; j < spec.layers.size(); ++j) {
            const auto& m = spec.layers[j];
            if (std::max(l.start, m.start) < std::min(l.end, m.end))
                throw std::invalid_argument("potential.layers[" + std::to_string(i) + "] and [" +
                                            std::to_string(j) + "] overlap");
        }
    }
}

double epsilon_smooth(const PotentialSpec& spec, double r) {
    if (spec.kind == WaveKind::schroedinger) return 1.0;
    for (const auto& l : spec.layers) {
        if (r >= l.start && r <= l.end) return l.refractive_index * l.refractive_index;
    }
    return 1.0;
}

double potential_value(const PotentialSpec& spec, double r, double omega) {
    for (const auto& d : spec.deltas) {
        if (r == d.position)
            throw std::domain_error("potential evaluated exactly at a delta position");
    }
    if (spec.kind == WaveKind::schroedinger) return 0.0;
    const double E = 0.5 * omega * omega;
    return (1.0 - epsilon_smooth(spec, r)) * E;
}

double delta_weight(const PotentialSpec& spec, std::size_t index, double energy) {
    const auto& d = spec.deltas.at(index);
    if (spec.kind == WaveKind::schroedinger) return d.strength;
    return -d.strength * energy;
}

Complex ley_loudon_reflectivity(double eta, double omega) {
    const Complex i(0.0, 1.0);
    return i * omega * eta / (2.0 - i * omega * eta);
}

std::vector<double> breakpoints(const PotentialSpec& spec) {
    std::vector<double> pts{spec.support_min, spec.support_max};
    for (const auto& d : spec.deltas) pts.push_back(d.position);
    for (const auto& l : spec.layers) {
        pts.push_back(l.start);
        pts.push_back(l.end);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              pts.end());
    return pts;
}

}  // namespace fewmode
