#pragma once

#include "fewmode/geometry.hpp"

namespace fewmode {

// sin(x)/x with the removable singularity filled in.
double sinc(double x);

// int_a^b exp(i mu r) dr, exact for any real mu including mu = 0.
Complex cis_integral(double mu, double a, double b);

// int_a^b cos(mu (r - ref)) dr
double cos_integral(double mu, double ref, double a, double b);

// int_a^b exp(i q r) sin(nu (r - ref)) dr
Complex exp_sine_integral(double q, double nu, double ref, double a, double b);

// int_a^b sin(nu1 (r - ref)) sin(nu2 (r - ref)) dr, stable for nu1 ~ nu2.
double sine_sine_integral(double nu1, double nu2, double ref, double a, double b);

// S(x; k, nu): the solution of u'' + k^2 u = sin(nu x) with u(0) = u'(0) = 0,
//   S = (sin(nu x) - (nu/k) sin(k x)) / (k^2 - nu^2),
// evaluated through a series branch when k approaches nu, where the closed
// form loses all its digits.
double sine_response(double x, double k, double nu);

// dS/dx for the same function, with the same resonance handling.
double sine_response_slope(double x, double k, double nu);

// int_a^b sin(alpha (r - ref)) S(r - ref; k, nu) dr, resonance-safe in k ~ nu.
double sine_response_overlap(double alpha, double k, double nu, double ref,
                             double a, double b);

}  // namespace fewmode
