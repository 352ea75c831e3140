#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fewmode/bath.hpp"
#include "fewmode/errors.hpp"
#include "fewmode/projection.hpp"

using namespace fewmode;
using std::numbers::pi;

namespace {

const SpatialGrid kCoarse{-0.2, 1.2, 11};

PotentialSpec double_delta(double xi = 10.0) {
    PotentialSpec s;
    s.kind = WaveKind::schroedinger;
    s.support_min = 0.0;
    s.support_max = 1.0;
    s.deltas = {{0.0, xi}, {1.0, xi}};
    return s;
}

PotentialSpec mirror_cavity(double eta) {
    PotentialSpec s;
    s.kind = WaveKind::maxwell_rwa;
    s.support_min = 0.0;
    s.support_max = 1.0;
    s.deltas = {{0.0, eta}, {1.0, eta}};
    return s;
}

// coupling table over a uniform k grid with the probe energy inserted as an
// exact node
CouplingTable sampled_couplings(const PotentialSpec& spec, const SystemBasis& basis,
                                double k_lo, double k_hi, int count, double probe) {
    std::vector<double> energies;
    energies.reserve(static_cast<std::size_t>(count) + 1);
    for (int i = 0; i < count; ++i) {
        const double k = k_lo + (k_hi - k_lo) * i / (count - 1);
        energies.push_back(0.5 * k * k);
    }
    energies.push_back(probe);
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

}  // namespace

TEST_CASE("empty mode set produces empty tables") {
    PotentialSpec spec = double_delta();
    const SystemBasis basis(0.0, 1.0, {});
    auto bath = bath_states(spec, basis, 2.0, kCoarse);
    auto table = couplings(basis, bath);
    CHECK(table.size() == 1);
    CHECK(table.values.front().rows() == 0);

    auto g = gamma_green(spec, basis, 2.0, kCoarse);
    CHECK(g.gamma.rows() == 0);
    auto d = d_matrix(2.0, basis, g);
    CHECK(d.d.rows() == 0);
}

TEST_CASE("couplings carry energy normalization and the wave-kind tag") {
    PotentialSpec spec = double_delta();
    const SystemBasis basis(0.0, 1.0, {1, 2, 3});
    const double E = 2.0;
    auto bath = bath_states(spec, basis, E, kCoarse);
    auto table = couplings(basis, bath);
    REQUIRE(table.size() == 1);
    CHECK(table.kind == WaveKind::schroedinger);
    const double scale = 1.0 / std::sqrt(2.0 * pi * bath.k);
    CHECK((table.values.front() - bath.couplings * scale).norm() < 1e-14);

    auto mx = bath_states(mirror_cavity(0.19), basis, 0.5 * std::pow(8.2 * pi, 2), kCoarse);
    auto mx_table = couplings(basis, mx);
    CHECK(mx_table.kind == WaveKind::maxwell_rwa);
    // oscillator-frame rescale divides each row by sqrt(omega_lambda)
    auto resc = mx_table.rescaled(0, basis);
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const auto i = static_cast<Eigen::Index>(m);
        CHECK((resc.row(i) * std::sqrt(basis.mode(m).omega) - mx_table.values.front().row(i))
                  .norm() < 1e-13);
    }
}

TEST_CASE("mirror symmetry links the two incidence channels by mode parity") {
    PotentialSpec spec = double_delta();
    const SystemBasis basis(0.0, 1.0, {7, 8, 9});
    const double E = 0.5 * std::pow(8.3 * pi, 2);
    auto bath = bath_states(spec, basis, E, kCoarse);
    auto table = couplings(basis, bath);
    const auto& w = table.values.front();
    const Complex phase = std::exp(Complex(0.0, 2.0 * bath.k * 0.5));
    for (std::size_t m = 0; m < basis.size(); ++m) {
        const auto i = static_cast<Eigen::Index>(m);
        const double sign = (basis.mode(m).index % 2 == 0) ? -1.0 : 1.0;
        // psi_right(r) = phase^-1 psi_left(1-r) and chi reflects with parity
        CHECK(std::abs(w(i, 1) - sign / phase * w(i, 0)) < 1e-10);
        // so one channel combination decouples from each parity class
        if (sign < 0) CHECK(std::abs(w(i, 0) + phase * w(i, 1)) < 1e-10);
        else CHECK(std::abs(w(i, 0) - phase * w(i, 1)) < 1e-10);
    }
}

TEST_CASE("resolvent-route width is the on-shell coupling product") {
    PotentialSpec spec = double_delta();
    const SystemBasis basis(0.0, 1.0, {1, 2, 3});
    for (double E : {2.0, 7.0, 26.0}) {
        auto bath = bath_states(spec, basis, E, kCoarse);
        auto w = couplings(basis, bath).values.front();
        auto g = gamma_green(spec, basis, E, kCoarse);
        const Eigen::MatrixXcd width = g.gamma.imag().cast<Complex>();
        const Eigen::MatrixXcd expected = pi * (w * w.adjoint());
        CHECK((width - expected).norm() < 1e-10 * std::max(1.0, expected.norm()));
        // width is positive semidefinite
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.width());
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    CHECK_THROWS_AS(gamma_green(mirror_cavity(0.1), basis, 2.0, kCoarse),
                    std::invalid_argument);
}

TEST_CASE("quadrature route handles the flat and empty cases exactly") {
    // constant coupling over a window symmetric about the probe: the
    // principal value cancels and only the width term survives
    CouplingTable table;
    table.kind = WaveKind::schroedinger;
    Eigen::MatrixXcd w(1, 2);
    w(0, 0) = Complex(0.3, 0.1);
    w(0, 1) = Complex(-0.2, 0.4);
    for (int i = 0; i <= 200; ++i) table.append(1.0 + i * 0.01, w);
    auto g = gamma_quadrature(table, 2.0);
    const double f = w.squaredNorm();
    CHECK(std::abs(g.gamma(0, 0) - Complex(0.0, pi * f)) < 1e-10);
    CHECK(std::abs(g.shift()(0, 0)) < 1e-10);

    // probe off-node interpolates and stays finite
    auto g2 = gamma_quadrature(table, 2.0041);
    CHECK(std::isfinite(g2.gamma(0, 0).real()));

    // zero couplings give a zero matrix
    CouplingTable zero;
    for (int i = 0; i <= 20; ++i) zero.append(1.0 + i * 0.1, Eigen::MatrixXcd::Zero(1, 2));
    CHECK(gamma_quadrature(zero, 2.0).gamma.norm() == 0.0);

    CHECK_THROWS_AS(gamma_quadrature(table, 0.5), std::domain_error);
    CHECK_THROWS_AS(gamma_quadrature(table, 3.0), std::domain_error);
    CouplingTable tiny;
    tiny.append(1.0, w);
    tiny.append(2.0, w);
    CHECK_THROWS_AS(gamma_quadrature(tiny, 1.5), std::domain_error);
}

TEST_CASE("both level-shift routes agree on the double-delta cavity") {
    PotentialSpec spec = double_delta();
    const SystemBasis basis(0.0, 1.0, {1, 2});
    const double probe = 2.0;
    // the cavity ringing in the coupling tail dies off like 1/k, so the
    // cutoff does the heavy lifting; nodes only have to resolve the rings
    auto table = sampled_couplings(spec, basis, 0.05, 640.0, 16000, probe);
    auto quad = gamma_quadrature(table, probe);
    auto green = gamma_green(spec, basis, probe, kCoarse);
    const double rel = (quad.gamma - green.gamma).norm() / green.gamma.norm();
    CHECK(rel < 1e-4);
    CHECK_FALSE(quad.tail_warning);
}

TEST_CASE("resonant denominator assembly and inversion") {
    PotentialSpec spec = double_delta();
    const SystemBasis one(0.0, 1.0, {1});
    const double E = 2.0;
    auto g = gamma_green(spec, one, E, kCoarse);
    auto d = d_matrix(E, one, g);
    const Complex expected = E - one.mode(0).energy + g.gamma(0, 0);
    CHECK(std::abs(d.d(0, 0) - expected) < 1e-14);

    // no level shift, energy far from the mode: diagonal inverse
    LevelShiftMatrix zero;
    zero.energy = 100.0;
    zero.gamma = Eigen::MatrixXcd::Zero(1, 1);
    auto far = d_matrix(100.0, one, zero);
    CHECK(std::abs(far.inverse()(0, 0) - 1.0 / (100.0 - one.mode(0).energy)) < 1e-14);

    // exact crossing with no width is singular
    LevelShiftMatrix z2;
    z2.energy = one.mode(0).energy;
    z2.gamma = Eigen::MatrixXcd::Zero(1, 1);
    auto sing = d_matrix(one.mode(0).energy, one, z2);
    CHECK_THROWS_AS(sing.inverse(), SolverError);

    // energy consistency is enforced
    CHECK_THROWS_AS(d_matrix(E + 0.1, one, g), std::invalid_argument);
}

TEST_CASE("oscillator-frame contraction equals the energy-frame one") {
    PotentialSpec spec = mirror_cavity(0.19);
    const SystemBasis basis(0.0, 1.0, {7, 8, 9});
    const double probe = 0.5 * std::pow(8.2 * pi, 2);
    auto table = sampled_couplings(spec, basis, 2.0, std::sqrt(2.0 * 10.0 * probe), 800, probe);
    auto g = gamma_quadrature(table, probe);
    auto d = d_matrix(probe, basis, g);

    std::size_t at = table.size();
    for (std::size_t i = 0; i < table.size(); ++i)
        if (std::abs(table.energies[i] - probe) < 1e-12 * probe) at = i;
    REQUIRE(at < table.size());
    const Eigen::MatrixXcd w = table.values[at];
    const Eigen::MatrixXcd w_osc = table.rescaled(at, basis);

    const Eigen::MatrixXcd direct = w.adjoint() * d.solve(w);
    const Eigen::MatrixXcd osc =
        w_osc.adjoint() *
        d.oscillator_frame(basis).fullPivLu().solve(Eigen::MatrixXcd(w_osc));
    CHECK((direct - osc).norm() < 1e-12 * std::max(1.0, direct.norm()));
}
