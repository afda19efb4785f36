#pragma once

#include <optional>

#include "rabi/model.hpp"
#include "rabi/recurrence.hpp"

namespace rabi {

// Inside this distance of a pole, sign information from G is unreliable and
// the spectrum scan switches to the pole-cleared function.
inline constexpr double kNearPoleWindow = 1e-3;

/// One evaluation of a spectral function together with its closest pole.
struct GSample {
    double x = 0.0;
    double value = 0.0;
    int nearest_pole = 0;
    double pole_position = 0.0;
    double pole_distance = 0.0;
    bool converged = false;
    bool near_pole = false;
    int n_used = 0;
};

//   G_+-(x) = sum_n K_n(x) [1 -+ delta / (x - n)] g^n      (epsilon = 0)
GSample eval_G(Parity parity, double x, const NormalizedParams& params, const Tolerances& tol = {});

//   R^+-(x)    = sum_n K^+-_n(x) g^n
//   Rbar^+-(x) = sum_n K^+-_n(x) g^n / (x - n +- eps)
double eval_R(Branch branch, double x, const NormalizedParams& params, const Tolerances& tol = {});
double eval_Rbar(Branch branch, double x, const NormalizedParams& params,
                 const Tolerances& tol = {});

//   G_eps(x) = delta^2 Rbar^+ Rbar^- - R^+ R^-
// All four series share one truncation order.
GSample eval_G_eps(double x, const NormalizedParams& params, const Tolerances& tol = {});

/// (x - n) G_+-(x), analytic on a neighbourhood of x = n including n itself.
double pole_cleared_G(Parity parity, double x, int pole, const NormalizedParams& params,
                      const Tolerances& tol = {});

/// G_eps(x) times (x - pole) for each branch pole given. Passing both
/// indices clears a pair of poles that sit inside one window.
double pole_cleared_G_eps(double x, std::optional<int> plus_pole, std::optional<int> minus_pole,
                          const NormalizedParams& params, const Tolerances& tol = {});

// Residue of G_+- at x = n, i.e. lim (x - n) G_+-(x). Proportional to K_n(n).
double residue_h(Parity parity, int n, const NormalizedParams& params, const Tolerances& tol = {});

// Large-x closed form (1 -+ delta/x) exp(-x/2) for the entire part of G_+-.
double entire_part_asymptotic(Parity parity, double x, const NormalizedParams& params);

// Nearest pole of G_+- (poles at x = 0, 1, 2, ...).
std::pair<int, double> nearest_symmetric_pole(double x) noexcept;

}  // namespace rabi
