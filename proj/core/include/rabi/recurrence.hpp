#pragma once

#include <vector>

#include "rabi/model.hpp"

namespace rabi {

inline constexpr double kPoleExclusionRadius = 1e-8;
inline constexpr int kMaxTerms = 500;
inline constexpr double kTailTolerance = 1e-14;

/// Truncation and pole-safety settings shared by every series evaluation.
struct Tolerances {
    double tail = kTailTolerance;
    int n_max = kMaxTerms;
    // Consecutive negligible terms required before the series is cut.
    int tail_run = 5;
    double pole_radius = kPoleExclusionRadius;
    // When false, series that hit n_max are returned flagged instead of throwing.
    bool require_convergence = true;
};

/// Coefficients K_0..K_N of the forward recurrence
///   n K_n = f_{n-1}(x) K_{n-1} - K_{n-2},  K_0 = 1, K_1 = f_0(x),
/// together with the weighted terms K_n g^n that enter every G-type series.
struct CoefficientTable {
    double x = 0.0;
    // Pole shift s of f_n (0 for the symmetric model, +eps / -eps per branch).
    double shift = 0.0;
    std::vector<double> values;
    std::vector<double> terms;
    bool converged = false;
    int n_used = 0;
    double tail_estimate = 0.0;
};

// f_n(x) = 2g + (n - x + delta^2 / (x - n)) / (2g), omega = 1 units.
double f_coeff(int n, double x, const NormalizedParams& params,
               double pole_radius = kPoleExclusionRadius);

// f^{+-}_n(x) = 2g + (n - x +- eps + delta^2 / (x - n +- eps)) / (2g).
double f_coeff_eps(int n, double x, const NormalizedParams& params, Branch branch,
                   double pole_radius = kPoleExclusionRadius);

CoefficientTable k_table(double x, const NormalizedParams& params, const Tolerances& tol = {});
CoefficientTable k_table_eps(double x, const NormalizedParams& params, Branch branch,
                             const Tolerances& tol = {});

// Exactly `count` coefficients K_0..K_{count-1}, no adaptive cut. Used where
// several series must share one truncation order.
CoefficientTable k_table_fixed(double x, const NormalizedParams& params, double shift, int count,
                               double pole_radius = kPoleExclusionRadius);

// Pole shift s for a branch: +eps for Plus, -eps for Minus.
double branch_shift(const NormalizedParams& params, Branch branch) noexcept;

// K_n evaluated on its own baseline x = n. Only f_n is singular there, so the
// recurrence up to index n is finite.
double k_at_baseline(int n, const NormalizedParams& params);

/// Ratios V_n = K_n / K_{n-1} of the minimal solution, from downward recursion
/// V_n = 1 / (f_n - (n+1) V_{n+1}) started at V_N = 0.
struct MinimalSolution {
    double x = 0.0;
    // ratios[n] = V_n for n >= 1; ratios[0] is 1 by convention.
    std::vector<double> ratios;
    int n_start = 0;
    int restarts = 0;

    double v1() const { return ratios.at(1); }
    // K^min_0..K^min_{count-1}, normalised to K_0 = 1.
    std::vector<double> coefficients(int count) const;
};

// Starting depth is doubled until V_1 moves by less than 1e-12 (relative).
MinimalSolution minimal_solution(double x, const NormalizedParams& params, int n_start = 100,
                                 const Tolerances& tol = {});

// f_0(x) - V^min_1(x). Vanishes on the spectrum of both parity sectors.
double schweber_residual(double x, const NormalizedParams& params, const Tolerances& tol = {});

// Finite continued fraction 1/(f_1 - 2/(f_2 - ... - n_cut * tail)) with V_{n_cut} = tail.
double continued_fraction_v1(double x, const NormalizedParams& params, int n_cut, double tail);

// V_1..V_count from the upward two-term form V_n = f_{n-1}/n - 1/(n V_{n-1}), V_1 = f_0.
std::vector<double> forward_ratios(double x, const NormalizedParams& params, int count);

}  // namespace rabi
