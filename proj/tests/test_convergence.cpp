#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fewmode/convergence.hpp"
#include "fewmode/errors.hpp"

using namespace fewmode;
using std::numbers::pi;

namespace {

SeparableCavityModel sample_model() {
    SeparableCavityModel m;
    m.length = 1.0;
    m.alpha = 2.3;
    m.beta = 0.4;
    m.w = Complex(0.8, -0.3);
    m.g_tilde = Complex(0.35, 0.2);
    return m;
}

std::vector<int> symmetric_about(int dominant, int count) {
    OrderingScheme scheme;
    scheme.kind = OrderingKind::symmetric_about_dominant;
    scheme.dominant = dominant;
    return mode_sequence(scheme, count);
}

SpectrumResult flat_spectrum(const std::vector<double>& grid, Complex t) {
    SpectrumResult run;
    run.kind = WaveKind::maxwell_rwa;
    run.frequency_axis = true;
    run.grid = grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SpectrumPoint p;
        p.full.s = Eigen::Matrix2cd::Identity() * t;
        run.points.push_back(p);
    }
    return run;
}

}  // namespace

TEST_CASE("mode orderings rank by distance from the dominant mode") {
    OrderingScheme up;
    up.kind = OrderingKind::counting_up;
    CHECK(mode_sequence(up, 1) == std::vector<int>{1});
    CHECK(mode_sequence(up, 2) == std::vector<int>{1, 3});
    CHECK(mode_sequence(up, 5) == std::vector<int>{1, 3, 5, 7, 9});

    up.parity = ModeParity::any;
    CHECK(mode_sequence(up, 4) == std::vector<int>{1, 2, 3, 4});
    up.parity = ModeParity::even;
    CHECK(mode_sequence(up, 3) == std::vector<int>{2, 4, 6});

    CHECK(symmetric_about(9, 1) == std::vector<int>{9});
    CHECK(symmetric_about(9, 2) == std::vector<int>{7, 9});
    CHECK(symmetric_about(9, 3) == std::vector<int>{7, 9, 11});
    CHECK(symmetric_about(9, 4) == std::vector<int>{5, 7, 9, 11});
    // the pairs run out at the bottom of the ladder after nine picks; from
    // there the sequence climbs one odd mode at a time
    CHECK(symmetric_about(9, 9) == std::vector<int>{1, 3, 5, 7, 9, 11, 13, 15, 17});
    CHECK(symmetric_about(9, 10) == std::vector<int>{1, 3, 5, 7, 9, 11, 13, 15, 17, 19});
    CHECK(symmetric_about(1, 3) == std::vector<int>{1, 3, 5});

    SUBCASE("ties go to the lower index") {
        OrderingScheme near4;
        near4.kind = OrderingKind::symmetric_about_dominant;
        near4.parity = ModeParity::any;
        near4.dominant = 4;
        CHECK(mode_sequence(near4, 2) == std::vector<int>{3, 4});
        CHECK(mode_sequence(near4, 3) == std::vector<int>{3, 4, 5});
    }

    SUBCASE("selectors are strictly ascending for any request") {
        for (int dominant : {1, 5, 9, 40}) {
            for (int count : {1, 2, 3, 8, 25}) {
                const auto seq = symmetric_about(dominant, count);
                REQUIRE(seq.size() == static_cast<std::size_t>(count));
                for (std::size_t i = 1; i < seq.size(); ++i) CHECK(seq[i - 1] < seq[i]);
                CHECK(seq.front() >= 1);
            }
        }
    }

    SUBCASE("bad requests are rejected") {
        CHECK_THROWS_AS(mode_sequence(up, 0), std::invalid_argument);
        OrderingScheme bad;
        bad.kind = OrderingKind::symmetric_about_dominant;
        bad.dominant = 0;
        CHECK_THROWS_AS(mode_sequence(bad, 3), std::invalid_argument);
    }

    SUBCASE("names round-trip") {
        for (auto kind : {OrderingKind::symmetric_about_dominant, OrderingKind::counting_up}) {
            CHECK(ordering_kind_from_string(to_string(kind)) == kind);
        }
        for (auto parity : {ModeParity::any, ModeParity::odd, ModeParity::even}) {
            CHECK(mode_parity_from_string(to_string(parity)) == parity);
        }
        CHECK_THROWS_AS(ordering_kind_from_string("sideways"), std::invalid_argument);
        CHECK_THROWS_AS(mode_parity_from_string("prime"), std::invalid_argument);
    }
}

TEST_CASE("few-mode deviation normalises against the baseline") {
    Eigen::VectorXcd reference(3);
    reference << Complex(0.3, 0.1), Complex(-0.2, 0.0), Complex(0.0, 0.8);
    Eigen::VectorXcd baseline(3);
    baseline << Complex(0.8, 0.1), Complex(-0.2, 0.2), Complex(-0.1, 0.8);

    CHECK(few_mode_deviation(reference, reference, baseline) == 0.0);
    CHECK(few_mode_deviation(baseline, reference, baseline) == doctest::Approx(1.0));

    const Eigen::VectorXcd halfway = reference + 0.5 * (baseline - reference);
    CHECK(few_mode_deviation(halfway, reference, baseline) == doctest::Approx(0.25));

    Eigen::VectorXcd off = reference;
    off(1) += Complex(0.0, 2.0);
    CHECK(few_mode_deviation(off, reference, baseline) > 0.0);

    SUBCASE("shape and scale violations are rejected") {
        Eigen::VectorXcd shorter(2);
        shorter << reference(0), reference(1);
        CHECK_THROWS_AS(few_mode_deviation(shorter, reference, baseline), std::invalid_argument);
        CHECK_THROWS_AS(few_mode_deviation(Eigen::VectorXcd(), Eigen::VectorXcd(), Eigen::VectorXcd()),
                        std::invalid_argument);
        CHECK_THROWS_AS(few_mode_deviation(baseline, reference, reference), std::invalid_argument);
    }

    SUBCASE("full-spectrum form checks the grids") {
        const std::vector<double> grid{27.0, 28.0, 29.0};
        SpectrumResult ref = flat_spectrum(grid, Complex(0.2, 0.1));
        SpectrumResult zero = flat_spectrum(grid, Complex(0.9, 0.0));
        SpectrumResult few = flat_spectrum(grid, Complex(0.2, 0.1));
        CHECK(few_mode_deviation(few, ref, zero) == 0.0);
        CHECK(few_mode_deviation(zero, ref, zero) == doctest::Approx(1.0));

        SpectrumResult shifted = few;
        shifted.grid[1] += 1e-6;
        CHECK_THROWS_AS(few_mode_deviation(shifted, ref, zero), std::invalid_argument);

        SpectrumResult energy_axis = few;
        energy_axis.frequency_axis = false;
        CHECK_THROWS_AS(few_mode_deviation(energy_axis, ref, zero), std::invalid_argument);

        SpectrumResult other_kind = few;
        other_kind.kind = WaveKind::schroedinger;
        CHECK_THROWS_AS(few_mode_deviation(other_kind, ref, zero), std::invalid_argument);
    }
}

TEST_CASE("separable cavity: rank-one and dense inversion agree") {
    const SeparableCavityModel model = sample_model();

    for (int count : {1, 7, 60, 200}) {
        CAPTURE(count);
        const auto mats = separable_cavity_matrices(model, count);
        CHECK((mats.d_inverse - mats.d_inverse_dense).norm() < 1e-10);
        const Eigen::MatrixXcd identity =
            Eigen::MatrixXcd::Identity(count, count);
        CHECK((mats.d * mats.d_inverse - identity).norm() < 1e-9);
    }

    SUBCASE("couplings carry the separable profile") {
        const auto mats = separable_cavity_matrices(model, 6);
        const auto sums = separable_cavity_sums(model, 6);
        CHECK((mats.couplings - sums.couplings).norm() == 0.0);
        CHECK(std::abs(mats.couplings(1) / mats.couplings(0) + std::sqrt(2.0)) < 1e-14);
        const double cot = std::cos(model.alpha) / std::sin(model.alpha);
        const Complex denom(model.alpha * cot - sums.s, -model.beta);
        CHECK(std::abs(mats.couplings(0) * denom + model.w) < 1e-13);
    }

    SUBCASE("contraction routes meet") {
        const int count = 200;
        const auto mats = separable_cavity_matrices(model, count);
        const auto sums = separable_cavity_sums(model, count);
        Eigen::VectorXcd g(count);
        for (int lam = 1; lam <= count; ++lam) {
            const double profile =
                std::sin(0.5 * pi * lam) / std::sqrt(static_cast<double>(lam));
            g(lam - 1) = model.g_tilde * profile;
        }
        const Complex dense = (g.transpose() * mats.d_inverse_dense * g.conjugate())(0, 0);
        CHECK(std::abs(dense - sums.interaction_sum) < 1e-10);
    }

    SUBCASE("a rescaled interval behaves the same") {
        SeparableCavityModel wide = model;
        wide.length = 2.5;
        const auto mats = separable_cavity_matrices(wide, 50);
        CHECK((mats.d_inverse - mats.d_inverse_dense).norm() < 1e-10);
    }
}

TEST_CASE("separable cavity: the ladder diverges while observables settle") {
    const SeparableCavityModel model = sample_model();

    SUBCASE("s keeps walking, roughly -2 per rung") {
        for (int count : {100, 1000}) {
            CAPTURE(count);
            const double near = separable_cavity_sums(model, count).s;
            const double far = separable_cavity_sums(model, 2 * count).s;
            CHECK(std::abs(far - near) > static_cast<double>(count));
        }
    }

    SUBCASE("the emitter self-energy ladder reaches its closed-form limit") {
        const auto sums = separable_cavity_sums(model, 10000);
        CHECK(sums.g1_limit ==
              doctest::Approx(-std::norm(model.g_tilde) * model.length * pi *
                              std::tan(0.5 * model.alpha) / (2.0 * model.alpha)));
        CHECK(std::abs(sums.g1 - sums.g1_limit) < 1e-3);
        CHECK(std::abs(sums.g1 - sums.g1_limit) < 2e-5);
    }

    SUBCASE("the contracted interaction is Cauchy even though s is not") {
        const Complex at1000 = separable_cavity_sums(model, 1000).interaction_sum;
        const Complex at2000 = separable_cavity_sums(model, 2000).interaction_sum;
        const Complex at4000 = separable_cavity_sums(model, 4000).interaction_sum;
        const double step_near = std::abs(at2000 - at1000);
        const double step_far = std::abs(at4000 - at2000);
        CHECK(step_far < step_near);
        CHECK(step_far < 1e-3);
        const double s_step = std::abs(separable_cavity_sums(model, 4000).s -
                                       separable_cavity_sums(model, 2000).s);
        CHECK(s_step > 1000.0);
    }

    SUBCASE("closed-cavity resonances and bad counts are rejected") {
        SeparableCavityModel at_pole = model;
        at_pole.alpha = pi;
        CHECK_THROWS_AS(separable_cavity_sums(at_pole, 10), SolverError);
        at_pole.alpha = 2.0 * pi;
        CHECK_THROWS_AS(separable_cavity_matrices(at_pole, 10), SolverError);
        CHECK_THROWS_AS(separable_cavity_sums(model, 0), std::invalid_argument);
        SeparableCavityModel bad = model;
        bad.length = -1.0;
        CHECK_THROWS_AS(separable_cavity_sums(bad, 10), std::invalid_argument);
    }
}

TEST_CASE("projecting onto every mode at once walks off linearly") {
    CHECK(divergent_ladder_sum(0.5, 1.0, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(divergent_ladder_sum(0.25, 0.5, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(divergent_ladder_sum(3.0, 1.0, 2) == doctest::Approx(2.5));

    const int n = 100000;
    const double ratio = divergent_ladder_sum(0.5, 1.0, n) / static_cast<double>(n);
    CHECK(std::abs(ratio + 1.0) < 0.05);
    CHECK(std::abs(ratio + 1.0) < 1e-3);

    CHECK(std::abs(divergent_ladder_sum(0.5, 1.0, 2000)) >
          std::abs(divergent_ladder_sum(0.5, 1.0, 1000)));

    CHECK_THROWS_AS(divergent_ladder_sum(3.0, 1.0, 5), SolverError);
    CHECK_THROWS_AS(divergent_ladder_sum(0.5, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(divergent_ladder_sum(0.5, 0.0, 3), std::invalid_argument);
}
