#include "fewmode/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fewmode/errors.hpp"

namespace fewmode {

namespace {

constexpr double kPi = std::numbers::pi;

int parity_start(ModeParity parity) { return parity == ModeParity::even ? 2 : 1; }
int parity_step(ModeParity parity) { return parity == ModeParity::any ? 1 : 2; }

// alpha at an integer multiple of pi puts the probe on a closed-cavity
// resonance: cot(alpha) blows up and the rung alpha/pi of every ladder sum
// divides by zero.
void require_off_resonance(double alpha) {
    const double nearest = kPi * std::round(alpha / kPi);
    if (std::abs(alpha - nearest) < 1e-12 * std::max(1.0, std::abs(alpha))) {
        throw SolverError("separable cavity probe alpha = " + std::to_string(alpha) +
                          " sits on a closed-cavity resonance (integer multiple of pi)");
    }
}

void require_model(const SeparableCavityModel& model, int count) {
    if (count < 1) {
        throw std::invalid_argument("separable cavity: mode count must be at least 1, got " +
                                    std::to_string(count));
    }
    if (!(model.length > 0.0)) {
        throw std::invalid_argument("separable cavity: length must be positive");
    }
    require_off_resonance(model.alpha);
}

// Denominator shared by every coupling: alpha*cot(alpha) - s - i*beta.
Complex coupling_denominator(const SeparableCavityModel& model, double s) {
    const double cot = std::cos(model.alpha) / std::sin(model.alpha);
    const Complex denom = Complex(model.alpha * cot - s, -model.beta);
    if (!(std::abs(denom) > 0.0)) {
        throw SolverError("separable cavity coupling denominator vanished at alpha = " +
                          std::to_string(model.alpha));
    }
    return denom;
}

double ladder_s(double alpha, int count) {
    double s = 0.0;
    for (int lam = 1; lam <= count; ++lam) {
        const double lp = static_cast<double>(lam) * kPi;
        s += 2.0 * lp * lp / (alpha * alpha - lp * lp);
    }
    return s;
}

Eigen::VectorXcd ladder_couplings(const SeparableCavityModel& model, int count,
                                  const Complex& denom) {
    Eigen::VectorXcd w(count);
    for (int lam = 1; lam <= count; ++lam) {
        const double sign = (lam % 2 == 0) ? 1.0 : -1.0;
        w(lam - 1) = model.w * std::sqrt(static_cast<double>(lam)) * sign / denom;
    }
    return w;
}

}  // namespace

std::string to_string(OrderingKind kind) {
    switch (kind) {
        case OrderingKind::symmetric_about_dominant: return "symmetric_about_dominant";
        case OrderingKind::counting_up: return "counting_up";
    }
    throw std::logic_error("unreachable ordering kind");
}

OrderingKind ordering_kind_from_string(const std::string& name) {
    if (name == "symmetric_about_dominant") return OrderingKind::symmetric_about_dominant;
    if (name == "counting_up") return OrderingKind::counting_up;
    throw std::invalid_argument("unknown ordering kind '" + name +
                                "' (expected symmetric_about_dominant or counting_up)");
}

std::string to_string(ModeParity parity) {
    switch (parity) {
        case ModeParity::any: return "any";
        case ModeParity::odd: return "odd";
        case ModeParity::even: return "even";
    }
    throw std::logic_error("unreachable mode parity");
}

ModeParity mode_parity_from_string(const std::string& name) {
    if (name == "any") return ModeParity::any;
    if (name == "odd") return ModeParity::odd;
    if (name == "even") return ModeParity::even;
    throw std::invalid_argument("unknown mode parity '" + name + "' (expected any, odd or even)");
}

std::vector<int> mode_sequence(const OrderingScheme& scheme, int count) {
    if (count < 1) {
        throw std::invalid_argument("mode_sequence: count must be at least 1, got " +
                                    std::to_string(count));
    }
    if (scheme.kind == OrderingKind::symmetric_about_dominant && scheme.dominant < 1) {
        throw std::invalid_argument("mode_sequence: dominant index must be at least 1, got " +
                                    std::to_string(scheme.dominant));
    }
    const int start = parity_start(scheme.parity);
    const int step = parity_step(scheme.parity);

    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));
    if (scheme.kind == OrderingKind::counting_up) {
        for (int i = 0; i < count; ++i) out.push_back(start + i * step);
        return out;
    }

    // Pool reaching far enough above the dominant index to supply all picks
    // even when nothing below it qualifies.
    const int top = scheme.dominant + step * (count + 1);
    std::vector<int> pool;
    for (int lam = start; lam <= top; lam += step) pool.push_back(lam);
    std::stable_sort(pool.begin(), pool.end(), [&](int lhs, int rhs) {
        const int dl = std::abs(lhs - scheme.dominant);
        const int dr = std::abs(rhs - scheme.dominant);
        return dl != dr ? dl < dr : lhs < rhs;
    });
    out.assign(pool.begin(), pool.begin() + count);
    std::sort(out.begin(), out.end());
    return out;
}

double few_mode_deviation(const Eigen::VectorXcd& few, const Eigen::VectorXcd& reference,
                          const Eigen::VectorXcd& baseline) {
    if (few.size() != reference.size() || baseline.size() != reference.size()) {
        throw std::invalid_argument("few_mode_deviation: spectra sample different grids (" +
                                    std::to_string(few.size()) + ", " +
                                    std::to_string(reference.size()) + ", " +
                                    std::to_string(baseline.size()) + " points)");
    }
    if (reference.size() == 0) {
        throw std::invalid_argument("few_mode_deviation: spectra are empty");
    }
    const double scale = (baseline - reference).squaredNorm();
    if (!(scale > 0.0)) {
        throw std::invalid_argument(
            "few_mode_deviation: baseline coincides with the reference, the deviation scale is "
            "undefined");
    }
    return (few - reference).squaredNorm() / scale;
}

double few_mode_deviation(const SpectrumResult& few, const SpectrumResult& reference,
                          const SpectrumResult& baseline) {
    const auto check_grid = [&](const SpectrumResult& other, const char* role) {
        if (other.kind != reference.kind || other.frequency_axis != reference.frequency_axis) {
            throw std::invalid_argument(std::string("few_mode_deviation: ") + role +
                                        " spectrum uses a different axis convention");
        }
        if (other.grid.size() != reference.grid.size()) {
            throw std::invalid_argument(std::string("few_mode_deviation: ") + role +
                                        " spectrum samples a different grid");
        }
        for (std::size_t i = 0; i < reference.grid.size(); ++i) {
            const double tol = 1e-12 * std::max(1.0, std::abs(reference.grid[i]));
            if (std::abs(other.grid[i] - reference.grid[i]) > tol) {
                throw std::invalid_argument(std::string("few_mode_deviation: ") + role +
                                            " spectrum samples a different grid at point " +
                                            std::to_string(i));
            }
        }
    };
    check_grid(few, "truncated");
    check_grid(baseline, "baseline");

    const auto transmissions = [](const SpectrumResult& run) {
        Eigen::VectorXcd t(run.points.size());
        for (std::size_t i = 0; i < run.points.size(); ++i) {
            t(static_cast<Eigen::Index>(i)) = run.points[i].full.transmission();
        }
        return t;
    };
    return few_mode_deviation(transmissions(few), transmissions(reference),
                              transmissions(baseline));
}

double SeparableCavityModel::gamma_tilde() const { return kPi / length; }

SeparableCavitySums separable_cavity_sums(const SeparableCavityModel& model, int count) {
    require_model(model, count);
    const double alpha = model.alpha;
    const double len = model.length;
    const double g_sq = std::norm(model.g_tilde);

    SeparableCavitySums out;
    out.s = ladder_s(alpha, count);
    for (int lam = 1; lam <= count; lam += 2) {
        const double lp = static_cast<double>(lam) * kPi;
        out.g1 += 2.0 * g_sq * len * kPi / (alpha * alpha - lp * lp);
        // sin(pi lam / 2) = +-1 on odd rungs, zero elsewhere; (-1)^lam = -1 here
        const double sign = (lam % 4 == 1) ? -1.0 : 1.0;
        out.g2 += sign * lp / (alpha * alpha - lp * lp);
    }
    out.g1_limit = -g_sq * len * kPi * std::tan(0.5 * alpha) / (2.0 * alpha);

    const Complex denom = coupling_denominator(model, out.s);
    out.couplings = ladder_couplings(model, count, denom);

    // g^T D^-1 g* with the rank-one update contracted analytically. The
    // divergent s cancels between the update's numerator and denominator,
    // leaving alpha*cot(alpha) - i*beta; only convergent ladders remain.
    const double cot = std::cos(alpha) / std::sin(alpha);
    const Complex reduced(alpha * cot, -model.beta);
    if (!(std::abs(reduced) > 0.0)) {
        throw SolverError("separable cavity contraction denominator vanished at alpha = " +
                          std::to_string(alpha));
    }
    out.interaction_sum =
        Complex(out.g1, 0.0) - 4.0 * kPi * len * g_sq * out.g2 * out.g2 / reduced;
    return out;
}

SeparableCavityMatrices separable_cavity_matrices(const SeparableCavityModel& model, int count) {
    require_model(model, count);
    const double alpha = model.alpha;
    const double len = model.length;
    const double s = ladder_s(alpha, count);
    const Complex denom = coupling_denominator(model, s);

    // a_inv is the inverse of the diagonal part; u carries the separable
    // profile sqrt(lambda) * (-1)^lambda.
    Eigen::VectorXd a_inv(count);
    Eigen::VectorXd u(count);
    for (int lam = 1; lam <= count; ++lam) {
        const double lp = static_cast<double>(lam) * kPi;
        a_inv(lam - 1) = 2.0 * lp * len / (alpha * alpha - lp * lp);
        u(lam - 1) = std::sqrt(static_cast<double>(lam)) * ((lam % 2 == 0) ? 1.0 : -1.0);
    }
    const Complex c = model.gamma_tilde() / denom;

    SeparableCavityMatrices out;
    out.couplings = ladder_couplings(model, count, denom);
    out.d = a_inv.cwiseInverse().cast<Complex>().asDiagonal();
    out.d += c * (u * u.transpose()).cast<Complex>();

    // Rank-one update of the diagonal inverse. 1 + c * u^T a_inv u folds the
    // ladder sum back into the coupling denominator, collapsing to
    // alpha*cot(alpha) - i*beta exactly as in the contraction above.
    const double cot = std::cos(alpha) / std::sin(alpha);
    const Complex reduced(alpha * cot, -model.beta);
    if (!(std::abs(reduced) > 0.0)) {
        throw SolverError("separable cavity update denominator vanished at alpha = " +
                          std::to_string(alpha));
    }
    const Eigen::VectorXd au = a_inv.cwiseProduct(u);
    out.d_inverse = a_inv.cast<Complex>().asDiagonal();
    out.d_inverse -= (model.gamma_tilde() / reduced) * (au * au.transpose()).cast<Complex>();

    Eigen::FullPivLU<Eigen::MatrixXcd> lu(out.d);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) {
        throw SolverError("separable cavity resonant denominator is singular at alpha = " +
                          std::to_string(alpha));
    }
    out.d_inverse_dense = lu.inverse();
    return out;
}

double divergent_ladder_sum(double omega, double spacing, int count) {
    if (count < 1) {
        throw std::invalid_argument("divergent_ladder_sum: count must be at least 1, got " +
                                    std::to_string(count));
    }
    if (!(spacing > 0.0)) {
        throw std::invalid_argument("divergent_ladder_sum: ladder spacing must be positive");
    }
    const double x = omega / spacing;
    const double nearest = std::round(x);
    if (nearest >= 1.0 && nearest <= static_cast<double>(count) &&
        std::abs(x - nearest) < 1e-12 * std::max(1.0, std::abs(x))) {
        throw SolverError("divergent_ladder_sum: probe sits on ladder rung " +
                          std::to_string(static_cast<int>(nearest)));
    }
    double sum = 0.0;
    for (int lam = 1; lam <= count; ++lam) {
        const double l = static_cast<double>(lam);
        sum += l / (x - l);
    }
    return sum;
}

}  // namespace fewmode
