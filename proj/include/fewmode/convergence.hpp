#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fewmode/geometry.hpp"
#include "fewmode/scattering.hpp"

namespace fewmode {

// How the confined basis grows as more modes are requested.
enum class OrderingKind {
    symmetric_about_dominant,  // nearest neighbours of a chosen mode first
    counting_up,               // plain ladder from the bottom
};

enum class ModeParity { any, odd, even };

std::string to_string(OrderingKind kind);
OrderingKind ordering_kind_from_string(const std::string& name);
std::string to_string(ModeParity parity);
ModeParity mode_parity_from_string(const std::string& name);

struct OrderingScheme {
    OrderingKind kind = OrderingKind::counting_up;
    ModeParity parity = ModeParity::odd;
    int dominant = 1;  // centre of the symmetric ordering, ignored when counting up
};

// First `count` mode indices under the scheme, sorted ascending and
// duplicate-free. The symmetric ordering ranks candidates by distance from
// the dominant index; the frequency ladder is evenly spaced, so index
// distance and frequency distance give the same ranking. Ties go to the
// lower index, so the ordering grows downward first and keeps climbing
// one mode at a time once the bottom of the ladder is reached.
std::vector<int> mode_sequence(const OrderingScheme& scheme, int count);

// chi^2-style distance between a truncated spectrum and a reference,
// normalised by how far the baseline (usually the zero-mode background)
// sits from the same reference:
//   sum |t_few - t_ref|^2 / sum |t_0 - t_ref|^2
// over complex transmissions, so phase errors count. Equals 0 when the
// truncation reproduces the reference and 1 when it adds nothing over the
// baseline. A baseline that coincides with the reference leaves the scale
// undefined and is rejected.
double few_mode_deviation(const Eigen::VectorXcd& few, const Eigen::VectorXcd& reference,
                          const Eigen::VectorXcd& baseline);

// Same metric read off full-spectrum results; the three runs must share one
// grid and one axis convention.
double few_mode_deviation(const SpectrumResult& few, const SpectrumResult& reference,
                          const SpectrumResult& baseline);

struct ConvergenceReport {
    OrderingScheme ordering;
    std::vector<int> mode_counts;
    std::vector<double> deviations;  // few_mode_deviation per count, >= 0
    std::string reference_id;        // names the reference the runs were held against
};

// Half-open cavity with a hard wall at r = 0 and a delta mirror at r = L,
// probed at omega = alpha / L. The projected coupling of mode lambda has the
// separable closed form
//   W_lambda = w * sqrt(lambda) * (-1)^lambda / (alpha*cot(alpha) - s - i*beta)
// with s the ladder sum over the chosen modes, so every contraction that the
// scattering pipeline builds numerically can be cross-checked against pencil
// and paper here. alpha, beta, w move with the probe frequency but not with
// the mode count. The emitter sits at the cavity centre with scale g_tilde.
struct SeparableCavityModel {
    double length = 1.0;
    double alpha = 2.3;  // omega * length; integer multiples of pi are closed-cavity resonances
    double beta = 0.0;   // damping part of the mirror response
    Complex w = Complex(1.0, 0.0);
    Complex g_tilde = Complex(0.0, 0.0);

    double gamma_tilde() const;  // pi / length, the natural coupling scale
};

// Ladder sums at mode count N. s grows without bound as modes are added
// (each new rung contributes about -2), yet every observable contraction
// assembled from it settles: g1 and the emitter contraction converge, and
// the divergent pieces cancel inside interaction_sum. Keeping the raw sums
// visible lets tests pin that cancellation instead of trusting it.
struct SeparableCavitySums {
    Eigen::VectorXcd couplings;  // W_lambda, lambda = 1..N
    double s = 0.0;              // sum 2 l^2 pi^2 / (alpha^2 - l^2 pi^2), no finite limit
    double g1 = 0.0;             // emitter self-energy ladder, odd rungs only
    double g1_limit = 0.0;       // closed-form value of g1 at infinite mode count
    double g2 = 0.0;             // emitter-to-mirror overlap ladder
    Complex interaction_sum;     // g^T D^-1 g* contracted in closed form
};

SeparableCavitySums separable_cavity_sums(const SeparableCavityModel& model, int count);

// Resonant denominator at mode count N, inverted two ways: the rank-one
// update formula, and a dense factorization of the assembled matrix. The two
// routes share nothing past the matrix itself, so their agreement checks the
// closed forms end to end. Dense work is O(N^3); keep N modest here and use
// separable_cavity_sums when only the ladders are needed.
struct SeparableCavityMatrices {
    Eigen::MatrixXcd d;                // diag((omega^2-omega_l^2)/(2 omega_l)) plus the separable update
    Eigen::MatrixXcd d_inverse;        // rank-one update closed form
    Eigen::MatrixXcd d_inverse_dense;  // generic dense inverse of d
    Eigen::VectorXcd couplings;        // W_lambda, lambda = 1..N
};

SeparableCavityMatrices separable_cavity_matrices(const SeparableCavityModel& model, int count);

// Partial sums of sum_{l=1..N} omega_l / (omega - omega_l) on an evenly
// spaced ladder omega_l = l * spacing. This is the series a scattering
// matrix assembled from *every* interior mode at once runs into; each
// large-l term tends to -1, so the sum walks off linearly in N instead of
// settling. Kept as a negative control: it documents why the projection in
// this library works with a finite, hand-picked mode set. Throws when the
// probe lands on a rung inside the sum.
double divergent_ladder_sum(double omega, double spacing, int count);

}  // namespace fewmode
