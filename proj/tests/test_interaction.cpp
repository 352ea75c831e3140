#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fewmode/bath.hpp"
#include "fewmode/errors.hpp"
#include "fewmode/interaction.hpp"
#include "fewmode/projection.hpp"
#include "fewmode/scattering.hpp"

using namespace fewmode;
using std::numbers::pi;

namespace {

const SpatialGrid kCoarse{-0.2, 1.2, 11};

PotentialSpec mirror_cavity(double eta) {
    PotentialSpec s;
    s.kind = WaveKind::maxwell_rwa;
    s.support_min = 0.0;
    s.support_max = 1.0;
    s.deltas = {{0.0, eta}, {1.0, eta}};
    return s;
}

CouplingTable table_for(const PotentialSpec& spec, const SystemBasis& basis, double k_lo,
                        double k_hi, int count, const std::vector<double>& probes) {
    std::vector<double> energies;
    for (int i = 0; i < count; ++i) {
        const double k = k_lo + (k_hi - k_lo) * i / (count - 1);
        energies.push_back(0.5 * k * k);
    }
    energies.insert(energies.end(), probes.begin(), probes.end());
    std::sort(energies.begin(), energies.end());
    CouplingTable table;
    table.kind = spec.kind;
    for (double e : energies) {
        if (!table.energies.empty() && e <= table.energies.back() * (1.0 + 1e-13)) continue;
        auto bath = bath_states(spec, basis, e, kCoarse);
        auto row = couplings(basis, bath);
        table.append(e, row.values.front());
    }
    return table;
}

// transmission peak of the reference spectrum inside [lo, hi]
double locate_peak(const PotentialSpec& spec, double lo, double hi) {
    for (int round = 0; round < 4; ++round) {
        double best = lo;
        double best_t = -1.0;
        for (int i = 0; i <= 80; ++i) {
            const double w = lo + (hi - lo) * i / 80.0;
            const double t =
                std::norm(transfer_matrix_oracle(spec, 0.5 * w * w).transmission());
            if (t > best_t) {
                best_t = t;
                best = w;
            }
        }
        const double span = (hi - lo) / 80.0;
        lo = best - span;
        hi = best + span;
    }
    return 0.5 * (lo + hi);
}

struct AtomBand {
    PotentialSpec spec;
    SystemBasis basis;
    AtomSpec atom;
    CouplingTable table;
};

AtomBand make_band_fixture(double eta, double dipole, const std::vector<int>& modes,
                           const std::vector<double>& band) {
    AtomBand f{mirror_cavity(eta), SystemBasis(0.0, 1.0, modes),
               AtomSpec{locate_peak(mirror_cavity(eta), 27.9, 28.4), dipole, 0.5},
               CouplingTable{}};
    std::vector<double> probes;
    for (double w : band) probes.push_back(0.5 * w * w);
    f.table = table_for(f.spec, f.basis, 0.05, 320.0, 8000, probes);
    return f;
}

}  // namespace

TEST_CASE("emitter couplings follow the mode functions") {
    const SystemBasis nine(0.0, 1.0, {9});
    const AtomSpec atom{28.71, 0.01, 0.5};
    auto g = atom_couplings(atom, nine);
    REQUIRE(g.g.size() == 1);
    const double expected = 0.01 * 28.71 * std::sqrt(1.0 / (2.0 * 9.0 * pi)) * std::sqrt(2.0);
    CHECK(std::abs(std::abs(g.g(0)) - expected) < 1e-14);
    // -i times a positive amplitude
    CHECK(g.g(0).real() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.g(0).imag() < 0.0);

    // center placement keeps only every other mode
    const SystemBasis six(0.0, 1.0, {1, 2, 3, 4, 5, 6});
    auto gc = atom_couplings(atom, six);
    for (int m = 0; m < 6; ++m) {
        if (m % 2 == 1)
            CHECK(std::abs(gc.g(m)) < 1e-13);
        else
            CHECK(std::abs(gc.g(m)) > 1e-3);
    }

    // a node of the mode function kills the coupling
    const SystemBasis three(0.0, 1.0, {3});
    auto gn = atom_couplings(AtomSpec{28.71, 0.01, 1.0 / 3.0}, three);
    CHECK(std::abs(gn.g(0)) < 1e-13);

    CHECK_THROWS_AS(atom_couplings(AtomSpec{28.71, 0.01, 1.5}, nine),
                    std::invalid_argument);
}

TEST_CASE("emitter level shift reduces to the dispersive form") {
    const SystemBasis nine(0.0, 1.0, {9});
    const double omega_m = 9.0 * pi;
    const double omega = omega_m + 0.5;
    const double E = 0.5 * omega * omega;

    LevelShiftMatrix zero;
    zero.energy = E;
    zero.kind = WaveKind::maxwell_rwa;
    zero.gamma = Eigen::MatrixXcd::Zero(1, 1);
    auto d = d_matrix(E, nine, zero);

    const AtomSpec atom{omega, 0.01, 0.5};
    auto g = atom_couplings(atom, nine);
    auto resp = level_shift(g, d, nine);
    const double g2 = std::norm(g.g(0));
    CHECK(resp.shift() ==
          doctest::Approx(g2 * 2.0 * omega_m / (omega * omega - omega_m * omega_m))
              .epsilon(1e-12));
    CHECK(resp.width() == doctest::Approx(0.0).epsilon(1e-14));
    // rotating-wave shorthand of the same quantity
    CHECK(resp.shift() == doctest::Approx(g2 / (omega - omega_m)).epsilon(2e-2));

    // no dipole, no response
    auto g0 = atom_couplings(AtomSpec{omega, 0.0, 0.5}, nine);
    auto r0 = level_shift(g0, d, nine);
    CHECK(r0.shift() == 0.0);
    CHECK(r0.width() == 0.0);

    // matter-wave denominators are rejected
    LevelShiftMatrix wrong = zero;
    wrong.kind = WaveKind::schroedinger;
    auto dw = d_matrix(E, nine, wrong);
    CHECK_THROWS_AS(level_shift(g, dw, nine), std::invalid_argument);
}

TEST_CASE("emitter width stays nonnegative across the band") {
    PotentialSpec spec = mirror_cavity(0.124);
    const SystemBasis basis(0.0, 1.0, {9});
    std::vector<double> omegas = {20.0, 27.5, 28.0, 28.27, 28.6, 29.5};
    std::vector<double> probes;
    for (double w : omegas) probes.push_back(0.5 * w * w);
    auto table = table_for(spec, basis, 0.05, 160.0, 4000, probes);
    const AtomSpec atom{28.27, 0.01, 0.5};
    auto g = atom_couplings(atom, basis);
    for (double E : probes) {
        auto gam = gamma_quadrature(table, E);
        auto d = d_matrix(E, basis, gam);
        auto resp = level_shift(g, d, basis);
        CHECK(resp.width() >= -1e-12);
    }
}

TEST_CASE("zero dipole reduces the resonant factor to the free one") {
    PotentialSpec spec = mirror_cavity(0.289);
    const SystemBasis basis(0.0, 1.0, {9});
    const double E = 0.5 * 28.2 * 28.2;
    auto table = table_for(spec, basis, 0.05, 160.0, 4000, {E});
    auto gam = gamma_quadrature(table, E);
    auto d = d_matrix(E, basis, gam);
    auto bath = bath_states(spec, basis, E, kCoarse);
    auto row = couplings(basis, bath);

    auto g0 = atom_couplings(AtomSpec{28.0, 0.0, 0.5}, basis);
    auto with = linear_smatrix_with_atom(row, d, basis, g0, 28.0);
    auto free = s_io(row, d);
    CHECK((with.s - free.s).norm() < 1e-13);
    CHECK(atom_transmission_rate(row, d, basis, g0) == 0.0);

    // a probe exactly on the undressed transition with no coupling is the
    // documented singular case
    CHECK_THROWS_AS(linear_smatrix_with_atom(row, d, basis, g0, 28.2), SolverError);
}

TEST_CASE("interacting spectrum matches the dispersion reference") {
    const double eta = 0.289;
    const double peak = locate_peak(mirror_cavity(eta), 27.9, 28.4);
    // even count staggered around the peak: the reference layer has a bare
    // pole exactly at the transition frequency, which grids must not sample
    std::vector<double> band;
    for (int i = 0; i < 32; ++i) band.push_back(peak - 0.15 + 0.3 * i / 31.0);
    auto f = make_band_fixture(eta, 0.01, {9}, band);
    auto g = atom_couplings(f.atom, f.basis);

    double worst = 0.0;
    double kappa_prev = -1.0;
    for (double w : band) {
        const double E = 0.5 * w * w;
        auto gam = gamma_quadrature(f.table, E);
        auto d = d_matrix(E, f.basis, gam);
        auto bath = bath_states(f.spec, f.basis, E, kCoarse);
        auto row = couplings(f.basis, bath);
        auto bg = s_bg(f.spec, f.basis, bath, row);
        auto atom_s = linear_smatrix_with_atom(row, d, f.basis, g, f.atom.omega_a);
        auto full = s_full(bg, atom_s);
        auto oracle = linear_dispersion_oracle(f.spec, f.atom, E);
        worst = std::max(worst, std::abs(std::norm(full.transmission()) -
                                         std::norm(oracle.transmission())));
        // port-restricted emitter rate stays finite and varies smoothly
        const double kappa = atom_transmission_rate(row, d, f.basis, g);
        CHECK(kappa >= 0.0);
        CHECK(kappa < 10.0);
        if (kappa_prev >= 0.0) CHECK(std::abs(kappa - kappa_prev) < 0.5);
        kappa_prev = kappa;
    }
    CHECK(worst < 0.05);

    // the doublet really is split: transmissivity at the bare peak is
    // suppressed below the flanks
    auto tr = [&](double w) {
        const double E = 0.5 * w * w;
        auto gam = gamma_quadrature(f.table, E);
        auto d = d_matrix(E, f.basis, gam);
        auto bath = bath_states(f.spec, f.basis, E, kCoarse);
        auto row = couplings(f.basis, bath);
        auto bg = s_bg(f.spec, f.basis, bath, row);
        auto atom_s = linear_smatrix_with_atom(row, d, f.basis, g, f.atom.omega_a);
        return std::norm(s_full(bg, atom_s).transmission());
    };
    CHECK(tr(band[15]) < 0.5 * std::max(tr(band[3]), tr(band[28])));
}

TEST_CASE("equivalent permittivity layer of the emitter") {
    const AtomSpec atom{28.2, 0.01, 0.5};
    CHECK(effective_permittivity_layer(AtomSpec{28.2, 0.0, 0.5}, 10.0) == 0.0);
    CHECK(std::abs(effective_permittivity_layer(atom, 1e6)) < 1e-14);
    CHECK(effective_permittivity_layer(atom, 28.0) > 0.0);
    CHECK(effective_permittivity_layer(atom, 28.4) < 0.0);
    CHECK_THROWS_AS(effective_permittivity_layer(atom, 28.2), std::domain_error);

    // the lossless layer keeps the reference spectrum unitary
    PotentialSpec spec = mirror_cavity(0.124);
    for (double w : {27.8, 28.5, 30.0}) {
        auto s = linear_dispersion_oracle(spec, atom, 0.5 * w * w);
        CHECK(s.unitarity_defect() < 1e-8);
    }
    // no dipole reproduces the free reference
    auto bare = transfer_matrix_oracle(spec, 0.5 * 28.5 * 28.5);
    auto with0 = linear_dispersion_oracle(spec, AtomSpec{28.2, 0.0, 0.5}, 0.5 * 28.5 * 28.5);
    CHECK((bare.s - with0.s).norm() < 1e-14);
}

TEST_CASE("driven steady state: limits, bounds, and fixed point") {
    const double eta = 0.289;
    const double peak = locate_peak(mirror_cavity(eta), 27.9, 28.4);
    const double w_probe = peak + 0.02;
    auto f = make_band_fixture(eta, 0.01, {9}, {w_probe});
    auto g = atom_couplings(f.atom, f.basis);

    const double E = 0.5 * w_probe * w_probe;
    auto gam = gamma_quadrature(f.table, E);
    auto d = d_matrix(E, f.basis, gam);
    auto bath = bath_states(f.spec, f.basis, E, kCoarse);
    auto row = couplings(f.basis, bath);
    auto bg = s_bg(f.spec, f.basis, bath, row);

    SUBCASE("no drive leaves the ground state") {
        auto rest = semiclassical_steady_state(row, d, f.basis, g, f.atom,
                                               Eigen::Vector2cd::Zero());
        CHECK(std::abs(rest.sigma_minus) == 0.0);
        CHECK(rest.sigma_z == -1.0);
        CHECK(rest.b_out.norm() == 0.0);
        CHECK(rest.fixed_point_residual() < 1e-15);
    }

    SUBCASE("weak drive reproduces the linear spectrum") {
        const Eigen::Vector2cd b_in(1e-6, 0.0);
        auto drive = semiclassical_steady_state(row, d, f.basis, g, f.atom, b_in);
        const Eigen::Vector2cd observed = bg.s * drive.b_out;
        auto atom_s = linear_smatrix_with_atom(row, d, f.basis, g, f.atom.omega_a);
        auto lin = s_full(bg, atom_s);
        const double t_drive = std::norm(observed(0) / b_in(0));
        const double t_lin = std::norm(lin.transmission());
        CHECK(std::abs(t_drive - t_lin) < 1e-8);
        CHECK(drive.fixed_point_residual() < 1e-12);
    }

    SUBCASE("saturation recovers the empty cavity") {
        const Eigen::Vector2cd b_in(1e3, 0.0);
        auto drive = semiclassical_steady_state(row, d, f.basis, g, f.atom, b_in);
        CHECK(drive.sigma_z > -1e-5);
        const Eigen::Vector2cd observed = bg.s * drive.b_out;
        auto empty = s_full(bg, s_io(row, d));
        CHECK(std::abs(std::norm(observed(0) / b_in(0)) -
                       std::norm(empty.transmission())) < 1e-3);
        CHECK(drive.fixed_point_residual() < 1e-9 * b_in.norm());
    }

    SUBCASE("population bounds hold through the turn-on") {
        for (double amp : {1e-3, 1e-2, 0.1, 0.5, 2.0, 20.0}) {
            auto drive = semiclassical_steady_state(row, d, f.basis, g, f.atom,
                                                    Eigen::Vector2cd(amp, 0.0));
            CHECK(drive.sigma_z <= 0.0);
            CHECK(drive.sigma_z >= -1.0);
            CHECK(drive.fixed_point_residual() < 1e-10 * std::max(1.0, amp));
        }
    }
}
