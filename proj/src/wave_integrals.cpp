#include "fewmode/wave_integrals.hpp"

#include <cmath>
#include <stdexcept>

namespace fewmode {

namespace {

// int x sin(mu x) dx over [a, b]; series branch keeps mu -> 0 exact.
double p1s(double mu, double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(mu) * scale < 1e-4) {
        const double m2 = mu * mu;
        auto f = [&](double x) {
            const double x3 = x * x * x;
            const double x5 = x3 * x * x;
            return mu * x3 / 3.0 - mu * m2 * x5 / 30.0;
        };
        return f(b) - f(a);
    }
    auto f = [&](double x) { return std::sin(mu * x) / (mu * mu) - x * std::cos(mu * x) / mu; };
    return f(b) - f(a);
}

// int x^2 cos(mu x) dx over [a, b]
double p2c(double mu, double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (std::abs(mu) * scale < 1e-4) {
        const double m2 = mu * mu;
        auto f = [&](double x) {
            const double x3 = x * x * x;
            const double x5 = x3 * x * x;
            return x3 / 3.0 - m2 * x5 / 10.0;
        };
        return f(b) - f(a);
    }
    auto f = [&](double x) {
        return 2.0 * x * std::cos(mu * x) / (mu * mu) +
               (x * x / mu - 2.0 / (mu * mu * mu)) * std::sin(mu * x);
    };
    return f(b) - f(a);
}

// int x sin(alpha x) cos(k x) dx over [a, b]
double mixed_xsc(double alpha, double k, double a, double b) {
    return 0.5 * (p1s(alpha + k, a, b) + p1s(alpha - k, a, b));
}

// int x^2 sin(alpha x) sin(k x) dx over [a, b]
double mixed_x2ss(double alpha, double k, double a, double b) {
    return 0.5 * (p2c(alpha - k, a, b) - p2c(alpha + k, a, b));
}

bool near_resonant(double k, double nu) {
    return std::abs(k - nu) < 1e-6 * nu;
}

}  // namespace

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

Complex cis_integral(double mu, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    return (b - a) * std::exp(Complex(0.0, mu * mid)) * sinc(mu * half);
}

double cos_integral(double mu, double ref, double a, double b) {
    const double mid = 0.5 * (a + b) - ref;
    const double half = 0.5 * (b - a);
    return (b - a) * std::cos(mu * mid) * sinc(mu * half);
}

Complex exp_sine_integral(double q, double nu, double ref, double a, double b) {
    const Complex i(0.0, 1.0);
    const Complex plus = std::exp(-i * (nu * ref)) * cis_integral(q + nu, a, b);
    const Complex minus = std::exp(i * (nu * ref)) * cis_integral(q - nu, a, b);
    return (plus - minus) / (2.0 * i);
}

double sine_sine_integral(double nu1, double nu2, double ref, double a, double b) {
    return 0.5 * (cos_integral(nu1 - nu2, ref, a, b) - cos_integral(nu1 + nu2, ref, a, b));
}

double sine_response(double x, double k, double nu) {
    if (!(k > 0.0) || !(nu > 0.0)) throw std::domain_error("sine_response needs k, nu > 0");
    if (near_resonant(k, nu)) {
        const double eps = k - nu;
        const double s = std::sin(nu * x);
        const double c = std::cos(nu * x);
        const double t0 = s / nu - x * c;
        const double t1 = 0.5 * x * x * s + x * c / nu - s / (nu * nu);
        return (t0 + eps * t1) / (2.0 * nu + eps);
    }
    return (std::sin(nu * x) - (nu / k) * std::sin(k * x)) / (k * k - nu * nu);
}

double sine_response_slope(double x, double k, double nu) {
    if (!(k > 0.0) || !(nu > 0.0)) throw std::domain_error("sine_response needs k, nu > 0");
    if (near_resonant(k, nu)) {
        const double eps = k - nu;
        return nu * (x * std::sin(nu * x) + 0.5 * eps * x * x * std::cos(nu * x)) /
               (2.0 * nu + eps);
    }
    return nu * (std::cos(nu * x) - std::cos(k * x)) / (k * k - nu * nu);
}

double sine_response_overlap(double alpha, double k, double nu, double ref,
                             double a, double b) {
    if (!(k > 0.0) || !(nu > 0.0)) throw std::domain_error("sine_response needs k, nu > 0");
    const double xa = a - ref;
    const double xb = b - ref;
    const double ss_nu = sine_sine_integral(alpha, nu, 0.0, xa, xb);
    if (near_resonant(k, nu)) {
        // Numerator N(k) = ss_nu - (nu/k) * ss_k vanishes at k = nu; expand to
        // second order in eps = k - nu so the division stays accurate.
        const double eps = k - nu;
        const double m = mixed_xsc(alpha, nu, xa, xb);
        const double x2 = mixed_x2ss(alpha, nu, xa, xb);
        const double n1 = ss_nu / nu - m;
        const double n2 = -2.0 * ss_nu / (nu * nu) + 2.0 * m / nu + x2;
        return (n1 + 0.5 * eps * n2) / (2.0 * nu + eps);
    }
    const double ss_k = sine_sine_integral(alpha, k, 0.0, xa, xb);
    return (ss_nu - (nu / k) * ss_k) / (k * k - nu * nu);
}

}  // namespace fewmode
