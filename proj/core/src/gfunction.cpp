#include "rabi/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rabi/errors.hpp"
#include "rabi/summation.hpp"

namespace rabi {
namespace {

struct PoleInfo {
    int index = 0;
    double position = 0.0;
    double distance = 0.0;
};

void require_symmetric(const NormalizedParams& params) {
    if (!params.symmetric()) {
        throw InvalidArgument("G_+- is defined for epsilon = 0; use eval_G_eps");
    }
}

PoleInfo nearest_shifted_pole(double x, double shift) {
    // Poles at n - shift, n >= 0.
    const double u = x + shift;
    const int n = u <= 0.0 ? 0 : static_cast<int>(std::lround(u));
    const double pos = n - shift;
    return {n, pos, std::abs(x - pos)};
}

void check_pole(double x, const PoleInfo& pole, const Tolerances& tol) {
    if (pole.distance < tol.pole_radius) {
        throw PoleError("spectral function evaluated inside pole exclusion radius", x,
                        pole.position);
    }
}

// Coefficients L_m = t K_m with t = x - (q - shift), the distance to the q-th
// pole of the branch. L obeys the same linear recurrence as K; only the step
// through f_q uses t f_q, which is finite at t = 0.
struct ClearedSeries {
    double t = 0.0;
    int pole = 0;
    double k_at_pole = 0.0;
    std::vector<double> scaled;  // L_m g^m
};

ClearedSeries cleared_series(double x, const NormalizedParams& params, double shift, int q,
                             const Tolerances& tol) {
    if (!(params.g > 0.0)) {
        throw SingularParameterError("G-function series need g > 0");
    }
    if (q < 0) {
        throw InvalidArgument("pole index must be non-negative");
    }
    const double g = params.g;
    const double two_g = 2.0 * g;
    ClearedSeries out;
    out.pole = q;
    out.t = x - (q - shift);

    auto f_branch = [&](int n) {
        const double d = x - n + shift;
        if (std::abs(d) < tol.pole_radius) {
            throw PoleError("f_" + std::to_string(n) + " inside pole exclusion radius", x,
                            n - shift);
        }
        return two_g + (n - x + shift + params.delta2() / d) / two_g;
    };

    // K_0..K_q: regular at the q-th pole.
    std::vector<double> k(q + 1);
    k[0] = 1.0;
    for (int m = 1; m <= q; ++m) {
        const double prev2 = m >= 2 ? k[m - 2] : 0.0;
        k[m] = (f_branch(m - 1) * k[m - 1] - prev2) / m;
    }
    out.k_at_pole = k[q];

    std::vector<double> l;
    l.reserve(q + 64);
    for (int m = 0; m <= q; ++m) {
        l.push_back(out.t * k[m]);
    }
    // t f_q = t (2g + (2 shift - t) / (2g)) + delta^2 / (2g)
    const double tf = out.t * (two_g + (2.0 * shift - out.t) / two_g) + params.delta2() / two_g;
    const double prev = q >= 1 ? out.t * k[q - 1] : 0.0;
    l.push_back((tf * k[q] - prev) / (q + 1));

    out.scaled.reserve(l.capacity());
    double g_pow = 1.0;
    for (int m = 0; m < static_cast<int>(l.size()); ++m) {
        out.scaled.push_back(l[m] * g_pow);
        g_pow *= g;
    }

    // Beyond q + 1 the ordinary recurrence applies. Cut on the weighted terms,
    // scaled by max(1, |t|) so that t -> 0 does not stall the criterion.
    const double scale = std::max(1.0, std::abs(out.t));
    double max_partial = 0.0;
    CompensatedSum<double> partial;
    for (double s : out.scaled) {
        partial += s / scale;
        max_partial = std::max(max_partial, std::abs(partial.value()));
    }
    max_partial = std::max(max_partial, std::abs(out.k_at_pole) * std::pow(g, q));
    int run = 0;
    bool converged = false;
    for (int m = q + 2; m <= tol.n_max; ++m) {
        const double lm = (f_branch(m - 1) * l[m - 1] - l[m - 2]) / m;
        if (!std::isfinite(lm)) {
            throw NumericError("pole-cleared recurrence overflowed");
        }
        l.push_back(lm);
        const double term = lm * g_pow;
        g_pow *= g;
        out.scaled.push_back(term);
        partial += term / scale;
        max_partial = std::max(max_partial, std::abs(partial.value()));
        run = std::abs(term / scale) <= tol.tail * max_partial ? run + 1 : 0;
        if (run >= tol.tail_run) {
            converged = true;
            break;
        }
    }
    if (!converged && tol.require_convergence) {
        throw ConvergenceError("pole-cleared series did not converge", tol.n_max);
    }
    return out;
}

// t R(x) and t Rbar(x) from a cleared series; the m = q term of Rbar is K_q g^q.
struct ClearedPair {
    double r = 0.0;
    double rbar = 0.0;
};

ClearedPair cleared_sums(const ClearedSeries& s, double x, double shift, double g) {
    CompensatedSum<double> r;
    CompensatedSum<double> rbar;
    for (int m = 0; m < static_cast<int>(s.scaled.size()); ++m) {
        r += s.scaled[m];
        if (m == s.pole) {
            rbar += s.k_at_pole * std::pow(g, m);
        } else {
            rbar += s.scaled[m] / (x - m + shift);
        }
    }
    return {r.value(), rbar.value()};
}

struct Sums {
    double r = 0.0;
    double rbar = 0.0;
};

Sums plain_sums(const CoefficientTable& table, double x) {
    CompensatedSum<double> r;
    CompensatedSum<double> rbar;
    for (int n = 0; n < static_cast<int>(table.terms.size()); ++n) {
        r += table.terms[n];
        rbar += table.terms[n] / (x - n + table.shift);
    }
    return {r.value(), rbar.value()};
}

}  // namespace

std::pair<int, double> nearest_symmetric_pole(double x) noexcept {
    const PoleInfo p = nearest_shifted_pole(x, 0.0);
    return {p.index, p.distance};
}

GSample eval_G(Parity parity, double x, const NormalizedParams& params, const Tolerances& tol) {
    require_symmetric(params);
    const PoleInfo pole = nearest_shifted_pole(x, 0.0);
    check_pole(x, pole, tol);
    const CoefficientTable table = k_table(x, params, tol);
    const double dp = sign(parity) * params.delta;

    CompensatedSum<double> sum;
    for (int n = 0; n < static_cast<int>(table.terms.size()); ++n) {
        sum += table.terms[n] * (1.0 - dp / (x - n));
    }
    GSample s;
    s.x = x;
    s.value = sum.value();
    s.nearest_pole = pole.index;
    s.pole_position = pole.position;
    s.pole_distance = pole.distance;
    s.converged = table.converged;
    s.near_pole = pole.distance <= kNearPoleWindow;
    s.n_used = table.n_used;
    return s;
}

double eval_R(Branch branch, double x, const NormalizedParams& params, const Tolerances& tol) {
    const CoefficientTable table = k_table_eps(x, params, branch, tol);
    return plain_sums(table, x).r;
}

double eval_Rbar(Branch branch, double x, const NormalizedParams& params, const Tolerances& tol) {
    const double shift = branch_shift(params, branch);
    check_pole(x, nearest_shifted_pole(x, shift), tol);
    const CoefficientTable table = k_table_eps(x, params, branch, tol);
    return plain_sums(table, x).rbar;
}

GSample eval_G_eps(double x, const NormalizedParams& params, const Tolerances& tol) {
    const double s_plus = branch_shift(params, Branch::Plus);
    const double s_minus = branch_shift(params, Branch::Minus);
    const PoleInfo p_plus = nearest_shifted_pole(x, s_plus);
    const PoleInfo p_minus = nearest_shifted_pole(x, s_minus);
    check_pole(x, p_plus, tol);
    check_pole(x, p_minus, tol);

    const CoefficientTable plus = k_table_eps(x, params, Branch::Plus, tol);
    const CoefficientTable minus = k_table_eps(x, params, Branch::Minus, tol);
    const int shared = std::max(plus.n_used, minus.n_used) + 1;
    const Sums a = plain_sums(k_table_fixed(x, params, s_plus, shared, tol.pole_radius), x);
    const Sums b = plain_sums(k_table_fixed(x, params, s_minus, shared, tol.pole_radius), x);

    const PoleInfo& nearest = p_plus.distance <= p_minus.distance ? p_plus : p_minus;
    GSample s;
    s.x = x;
    s.value = params.delta2() * a.rbar * b.rbar - a.r * b.r;
    s.nearest_pole = nearest.index;
    s.pole_position = nearest.position;
    s.pole_distance = nearest.distance;
    s.converged = plus.converged && minus.converged;
    s.near_pole = nearest.distance <= kNearPoleWindow;
    s.n_used = shared - 1;
    return s;
}

double pole_cleared_G(Parity parity, double x, int pole, const NormalizedParams& params,
                      const Tolerances& tol) {
    require_symmetric(params);
    const ClearedSeries s = cleared_series(x, params, 0.0, pole, tol);
    const ClearedPair c = cleared_sums(s, x, 0.0, params.g);
    return c.r - sign(parity) * params.delta * c.rbar;
}

double pole_cleared_G_eps(double x, std::optional<int> plus_pole, std::optional<int> minus_pole,
                          const NormalizedParams& params, const Tolerances& tol) {
    auto branch_sums = [&](Branch branch, std::optional<int> pole) -> ClearedPair {
        const double shift = branch_shift(params, branch);
        if (pole) {
            return cleared_sums(cleared_series(x, params, shift, *pole, tol), x, shift, params.g);
        }
        check_pole(x, nearest_shifted_pole(x, shift), tol);
        const Sums s = plain_sums(k_table_eps(x, params, branch, tol), x);
        return {s.r, s.rbar};
    };
    const ClearedPair a = branch_sums(Branch::Plus, plus_pole);
    const ClearedPair b = branch_sums(Branch::Minus, minus_pole);
    return params.delta2() * a.rbar * b.rbar - a.r * b.r;
}

double residue_h(Parity parity, int n, const NormalizedParams& params, const Tolerances& tol) {
    return pole_cleared_G(parity, static_cast<double>(n), n, params, tol);
}

double entire_part_asymptotic(Parity parity, double x, const NormalizedParams& params) {
    return (1.0 - sign(parity) * params.delta / x) * std::exp(-x / 2.0);
}

}  // namespace rabi
