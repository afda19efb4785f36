#include "rabi/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rabi/errors.hpp"
#include "rabi/summation.hpp"

namespace rabi {
namespace {

constexpr double kTinyDenominator = 1e-300;
constexpr int kMaxMinimalDepth = 1 << 15;
constexpr int kMaxRestarts = 16;
constexpr double kMinimalAgreement = 1e-12;

void require_coupling(const NormalizedParams& params) {
    if (!(params.g > 0.0)) {
        throw SingularParameterError("G-function series need g > 0");
    }
}

double f_shifted(int n, double x, const NormalizedParams& params, double shift,
                 double pole_radius) {
    require_coupling(params);
    const double d = x - n + shift;
    if (std::abs(d) < pole_radius) {
        throw PoleError("f_" + std::to_string(n) + " evaluated inside pole exclusion radius", x,
                        n - shift);
    }
    const double two_g = 2.0 * params.g;
    return two_g + (n - x + shift + params.delta2() / d) / two_g;
}

CoefficientTable adaptive_table(double x, const NormalizedParams& params, double shift,
                                const Tolerances& tol) {
    require_coupling(params);
    CoefficientTable table;
    table.x = x;
    table.shift = shift;
    table.values.reserve(64);
    table.terms.reserve(64);
    table.values.push_back(1.0);
    table.terms.push_back(1.0);

    CompensatedSum<double> partial(1.0);
    double max_partial = 1.0;
    int run = 0;
    double k_prev2 = 0.0;
    double k_prev = 1.0;
    double g_pow = 1.0;

    for (int n = 1; n <= tol.n_max; ++n) {
        const double f = f_shifted(n - 1, x, params, shift, tol.pole_radius);
        const double k = (f * k_prev - k_prev2) / n;
        g_pow *= params.g;
        const double term = k * g_pow;
        if (!std::isfinite(k) || !std::isfinite(term)) {
            throw NumericError("coefficient recurrence overflowed at n = " + std::to_string(n));
        }
        table.values.push_back(k);
        table.terms.push_back(term);
        partial += term;
        max_partial = std::max(max_partial, std::abs(partial.value()));
        run = std::abs(term) < tol.tail * max_partial ? run + 1 : 0;
        if (run >= tol.tail_run) {
            table.converged = true;
            break;
        }
        k_prev2 = k_prev;
        k_prev = k;
    }

    table.n_used = static_cast<int>(table.values.size()) - 1;
    table.tail_estimate = std::abs(table.terms.back());
    if (!table.converged && tol.require_convergence) {
        throw ConvergenceError("coefficient series did not converge within n_max terms", tol.n_max);
    }
    return table;
}

}  // namespace

double branch_shift(const NormalizedParams& params, Branch branch) noexcept {
    return sign(branch) * params.epsilon;
}

double f_coeff(int n, double x, const NormalizedParams& params, double pole_radius) {
    return f_shifted(n, x, params, 0.0, pole_radius);
}

double f_coeff_eps(int n, double x, const NormalizedParams& params, Branch branch,
                   double pole_radius) {
    return f_shifted(n, x, params, branch_shift(params, branch), pole_radius);
}

CoefficientTable k_table(double x, const NormalizedParams& params, const Tolerances& tol) {
    return adaptive_table(x, params, 0.0, tol);
}

CoefficientTable k_table_eps(double x, const NormalizedParams& params, Branch branch,
                             const Tolerances& tol) {
    return adaptive_table(x, params, branch_shift(params, branch), tol);
}

CoefficientTable k_table_fixed(double x, const NormalizedParams& params, double shift, int count,
                               double pole_radius) {
    require_coupling(params);
    if (count < 1) {
        throw InvalidArgument("k_table_fixed needs at least one coefficient");
    }
    CoefficientTable table;
    table.x = x;
    table.shift = shift;
    table.values.resize(count);
    table.terms.resize(count);
    table.values[0] = 1.0;
    table.terms[0] = 1.0;
    double g_pow = 1.0;
    for (int n = 1; n < count; ++n) {
        const double f = f_shifted(n - 1, x, params, shift, pole_radius);
        const double k_prev2 = n >= 2 ? table.values[n - 2] : 0.0;
        table.values[n] = (f * table.values[n - 1] - k_prev2) / n;
        g_pow *= params.g;
        table.terms[n] = table.values[n] * g_pow;
        if (!std::isfinite(table.terms[n])) {
            throw NumericError("coefficient recurrence overflowed at n = " + std::to_string(n));
        }
    }
    table.converged = true;
    table.n_used = count - 1;
    table.tail_estimate = std::abs(table.terms.back());
    return table;
}

double k_at_baseline(int n, const NormalizedParams& params) {
    require_coupling(params);
    if (n < 0) {
        throw InvalidArgument("baseline index must be non-negative");
    }
    const double x = n;
    double k_prev2 = 0.0;
    double k_prev = 1.0;
    for (int m = 1; m <= n; ++m) {
        const double k = (f_shifted(m - 1, x, params, 0.0, 0.0) * k_prev - k_prev2) / m;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return k_prev;
}

std::vector<double> MinimalSolution::coefficients(int count) const {
    std::vector<double> k(std::max(count, 0), 0.0);
    if (count <= 0) {
        return k;
    }
    k[0] = 1.0;
    const int available = static_cast<int>(ratios.size());
    for (int n = 1; n < count && n < available; ++n) {
        k[n] = k[n - 1] * ratios[n];
    }
    return k;
}

namespace {

// One downward sweep from V_depth = 0. Returns false on an accidental
// near-zero denominator so the caller can move the starting depth.
bool downward_sweep(double x, const NormalizedParams& params, int depth, double pole_radius,
                    std::vector<double>& ratios) {
    ratios.assign(depth + 1, 0.0);
    ratios[0] = 1.0;
    double v = 0.0;
    for (int n = depth - 1; n >= 1; --n) {
        const double den = f_shifted(n, x, params, 0.0, pole_radius) - (n + 1) * v;
        if (std::abs(den) < kTinyDenominator) {
            return false;
        }
        v = 1.0 / den;
        ratios[n] = v;
    }
    return true;
}

}  // namespace

MinimalSolution minimal_solution(double x, const NormalizedParams& params, int n_start,
                                 const Tolerances& tol) {
    require_coupling(params);
    if (n_start < 2) {
        throw InvalidArgument("minimal_solution needs a starting depth of at least 2");
    }
    // Pole check for f_0 as well, so x is admissible for the Schweber comparison.
    (void)f_shifted(0, x, params, 0.0, tol.pole_radius);

    MinimalSolution out;
    out.x = x;
    auto run = [&](int depth, std::vector<double>& ratios) {
        int d = depth;
        while (!downward_sweep(x, params, d, tol.pole_radius, ratios)) {
            if (++out.restarts > kMaxRestarts) {
                throw NumericError("minimal solution: repeated zero denominators");
            }
            ++d;
        }
        return d;
    };

    std::vector<double> previous;
    std::vector<double> current;
    int depth = run(n_start, previous);
    while (true) {
        const int next = run(2 * depth, current);
        const double v_prev = previous[1];
        const double v_cur = current[1];
        if (std::abs(v_cur - v_prev) <= kMinimalAgreement * std::abs(v_cur)) {
            out.ratios = std::move(current);
            out.n_start = next;
            return out;
        }
        if (next > kMaxMinimalDepth) {
            throw ConvergenceError("minimal solution: V_1 not stable under depth doubling", next);
        }
        previous.swap(current);
        depth = next;
    }
}

double schweber_residual(double x, const NormalizedParams& params, const Tolerances& tol) {
    const double f0 = f_shifted(0, x, params, 0.0, tol.pole_radius);
    return f0 - minimal_solution(x, params, 100, tol).v1();
}

double continued_fraction_v1(double x, const NormalizedParams& params, int n_cut, double tail) {
    require_coupling(params);
    if (n_cut < 2) {
        throw InvalidArgument("continued fraction depth must be at least 2");
    }
    double v = tail;
    for (int n = n_cut - 1; n >= 1; --n) {
        const double den = f_coeff(n, x, params) - (n + 1) * v;
        if (std::abs(den) < kTinyDenominator) {
            throw NumericError("continued fraction: zero denominator at level " + std::to_string(n));
        }
        v = 1.0 / den;
    }
    return v;
}

std::vector<double> forward_ratios(double x, const NormalizedParams& params, int count) {
    require_coupling(params);
    if (count < 1) {
        throw InvalidArgument("forward_ratios needs count >= 1");
    }
    std::vector<double> v(count + 1, 0.0);
    v[0] = 1.0;
    v[1] = f_coeff(0, x, params);
    for (int n = 2; n <= count; ++n) {
        if (v[n - 1] == 0.0) {
            throw NumericError("forward ratios: K_" + std::to_string(n - 1) + " vanished");
        }
        v[n] = f_coeff(n - 1, x, params) / n - 1.0 / (n * v[n - 1]);
    }
    return v;
}

}  // namespace rabi
