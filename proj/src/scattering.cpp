#include "fewmode/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "fewmode/wave_integrals.hpp"

namespace fewmode {

namespace {

constexpr double kEnergyMatchTol = 1e-9;

void require_same_energy(double a, double b, const char* what) {
    if (std::abs(a - b) > kEnergyMatchTol * std::max(1.0, std::abs(a)))
        throw std::invalid_argument(std::string(what) + ": energy mismatch");
}

Complex cis(double x) { return std::exp(Complex(0.0, x)); }

}  // namespace

SMatrix s_io(const CouplingTable& w_row, const DMatrix& d) {
    if (w_row.size() != 1)
        throw std::invalid_argument("s_io expects a single-energy coupling row");
    require_same_energy(w_row.energies.front(), d.energy, "s_io");
    const Eigen::MatrixXcd& w = w_row.values.front();
    if (w.rows() != d.d.rows())
        throw std::invalid_argument("coupling row and resonant denominator disagree in size");

    SMatrix out;
    out.energy = d.energy;
    if (w.rows() == 0) return out;
    out.s = Eigen::Matrix2cd::Identity() -
            Complex(0.0, 2.0 * std::numbers::pi) * (w.adjoint() * d.solve(w));
    return out;
}

SMatrix s_bg(const PotentialSpec& spec, const SystemBasis& basis, const BathStateTable& bath,
             const CouplingTable& w_row) {
    if (!bath.has_analytic)
        throw std::invalid_argument("background factor needs the piecewise-analytic solution");
    if (w_row.size() != 1)
        throw std::invalid_argument("s_bg expects a single-energy coupling row");
    require_same_energy(w_row.energies.front(), bath.energy, "s_bg");
    if (bath.diagnostics.q_orthogonality > 1e-8)
        throw std::invalid_argument("bath states failed the mode-orthogonality check");

    const double k = bath.k;
    const double energy = bath.energy;
    // unit-amplitude couplings
    const Eigen::MatrixXcd w_hat =
        w_row.values.front() * std::sqrt(2.0 * std::numbers::pi * k);

    Eigen::Matrix2cd t_hat = Eigen::Matrix2cd::Zero();
    for (int m = 0; m < 2; ++m) {
        const double q = (m == 0) ? -k : k;  // conjugated free wave
        for (int mp = 0; mp < 2; ++mp) {
            const auto& sol = bath.analytic[static_cast<std::size_t>(mp)];
            Complex acc = 0.0;

            // smooth potential over the bounded regions
            for (const auto& reg : sol.regions()) {
                if (!(reg.hi > reg.lo) || !std::isfinite(reg.hi - reg.lo)) continue;
                const double v_here = energy - 0.5 * reg.kappa * reg.kappa;
                if (v_here == 0.0) continue;
                const Complex plus = reg.a_plus * cis(-reg.kappa * reg.ref) *
                                     cis_integral(q + reg.kappa, reg.lo, reg.hi);
                const Complex minus = reg.a_minus * cis(reg.kappa * reg.ref) *
                                      cis_integral(q - reg.kappa, reg.lo, reg.hi);
                acc += v_here * (plus + minus);
            }

            // point scatterers
            for (std::size_t j = 0; j < spec.deltas.size(); ++j) {
                const double pos = spec.deltas[j].position;
                acc += delta_weight(spec, j, energy) * cis(q * pos) * sol.value(pos);
            }

            // subtract the confined-mode content
            for (std::size_t lam = 0; lam < basis.size(); ++lam) {
                const Complex bra_mode =
                    basis.norm_factor() *
                    exp_sine_integral(q, basis.mode(lam).omega, basis.a(), basis.a(), basis.b());
                acc -= bra_mode * w_hat(static_cast<Eigen::Index>(lam), mp);
            }

            t_hat(m, mp) = acc;
        }
    }

    SMatrix out;
    out.energy = energy;
    out.s = Eigen::Matrix2cd::Identity() - Complex(0.0, 1.0 / k) * t_hat;
    return out;
}

SMatrix s_full(const SMatrix& bg, const SMatrix& io) {
    require_same_energy(bg.energy, io.energy, "s_full");
    SMatrix out;
    out.energy = bg.energy;
    out.s = bg.s * io.s;
    return out;
}

SMatrix transfer_matrix_oracle(const PotentialSpec& spec, double energy,
                               const std::optional<SusceptibilityLayer>& atom_layer) {
    validate(spec);
    if (!(energy > 0.0)) throw std::domain_error("oracle needs energy > 0");
    const double k = std::sqrt(2.0 * energy);

    // jump strength per interface position (coinciding scatterers accumulate)
    std::map<double, double> jumps;
    for (double p : breakpoints(spec)) jumps.emplace(p, 0.0);
    for (std::size_t j = 0; j < spec.deltas.size(); ++j)
        jumps[spec.deltas[j].position] += delta_weight(spec, j, energy);
    if (atom_layer) jumps[atom_layer->position] += -atom_layer->weight * energy;

    // dedupe positions that differ only by roundoff
    std::vector<std::pair<double, double>> events(jumps.begin(), jumps.end());
    for (std::size_t i = 1; i < events.size();) {
        if (events[i].first - events[i - 1].first <
            1e-12 * std::max(1.0, std::abs(events[i].first))) {
            events[i - 1].second += events[i].second;
            events.erase(events.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }

    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    double kappa_left = k;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const double x = events[i].first;
        const double g = events[i].second;
        const double next_mid = (i + 1 < events.size()) ? 0.5 * (x + events[i + 1].first)
                                                        : x + 1.0;
        const double kappa_right = std::sqrt(epsilon_smooth(spec, next_mid)) * k;

        Eigen::Matrix2cd step;
        for (int col = 0; col < 2; ++col) {
            const Complex a1 = (col == 0) ? 1.0 : 0.0;
            const Complex b1 = (col == 0) ? 0.0 : 1.0;
            const Complex psi = a1 * cis(kappa_left * x) + b1 * cis(-kappa_left * x);
            const Complex dpsi = Complex(0.0, kappa_left) *
                                     (a1 * cis(kappa_left * x) - b1 * cis(-kappa_left * x)) +
                                 2.0 * g * psi;
            step(0, col) = 0.5 * cis(-kappa_right * x) * (psi + dpsi / Complex(0.0, kappa_right));
            step(1, col) = 0.5 * cis(kappa_right * x) * (psi - dpsi / Complex(0.0, kappa_right));
        }
        m = step * m;
        kappa_left = kappa_right;
    }

    SMatrix out;
    out.energy = energy;
    const Complex t_rl = 1.0 / m(1, 1);
    out.s(0, 0) = m.determinant() * t_rl;
    out.s(1, 0) = -m(1, 0) * t_rl;
    out.s(0, 1) = m(0, 1) * t_rl;
    out.s(1, 1) = t_rl;
    return out;
}

}  // namespace fewmode
