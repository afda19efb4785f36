#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/errors.hpp"
#include "rabi/gfunction.hpp"

namespace rabi {
namespace {

constexpr double kExceptionalRootMerge = 1e-7;

void require_symmetric(const ModelParams& params) {
    if (!params.symmetric()) {
        throw InvalidArgument("parity-resolved spectrum requires epsilon = 0");
    }
}

void require_range(double x_min, double x_max) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw InvalidArgument("spectral range must be finite with x_min < x_max");
    }
}

void index_by_energy(std::vector<Eigenvalue>& levels) {
    std::sort(levels.begin(), levels.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) { return a.x_root < b.x_root; });
    for (int i = 0; i < static_cast<int>(levels.size()); ++i) {
        levels[i].index = i;
    }
}

// |K_n(n)| relative to the magnitudes that enter its last recurrence step,
// including the separate parts of f_{n-1}. Near zero only when that step
// cancels, which is what a Judd point is; an absolute test on K_n g^n would
// flag every high baseline.
double baseline_cancellation(int n, const NormalizedParams& np) {
    const double x = n;
    const double two_g = 2.0 * np.g;
    double k_prev2 = 0.0;
    double k_prev = 1.0;
    double scale = 1.0;
    for (int m = 1; m <= n; ++m) {
        const double d = x - (m - 1);
        const double f_size = two_g + (std::abs(d) + np.delta2() / std::abs(d)) / two_g;
        const double k = (f_coeff(m - 1, x, np) * k_prev - k_prev2) / m;
        scale = (f_size * std::abs(k_prev) + std::abs(k_prev2)) / m;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return scale > 0.0 ? std::abs(k_prev) / scale : 0.0;
}

Eigenvalue uncoupled_level(double x, std::optional<Parity> parity, const NormalizedParams& np) {
    Eigenvalue e;
    e.x_root = x;
    e.energy = np.energy_from_x(x);
    e.parity = parity;
    e.bracket_lo = e.bracket_hi = x;
    return e;
}

// g = 0: parity block p has diagonal n + p delta (-1)^n.
std::vector<Eigenvalue> uncoupled_parity_levels(Parity parity, double x_min, double x_max,
                                                const NormalizedParams& np) {
    std::vector<Eigenvalue> out;
    const int n_hi = static_cast<int>(std::ceil(x_max + std::abs(np.delta))) + 1;
    for (int n = 0; n <= n_hi; ++n) {
        const double x = n + sign(parity) * np.delta * (n % 2 == 0 ? 1.0 : -1.0);
        if (x >= x_min && x <= x_max) {
            out.push_back(uncoupled_level(x, parity, np));
        }
    }
    index_by_energy(out);
    return out;
}

std::vector<Eigenvalue> uncoupled_eps_levels(double x_min, double x_max,
                                             const NormalizedParams& np) {
    std::vector<Eigenvalue> out;
    const double split = std::hypot(np.delta, np.epsilon);
    const int n_hi = static_cast<int>(std::ceil(x_max + split)) + 1;
    for (int n = 0; n <= n_hi; ++n) {
        for (double x : {n - split, n + split}) {
            if (x >= x_min && x <= x_max) {
                out.push_back(uncoupled_level(x, std::nullopt, np));
            }
        }
    }
    index_by_energy(out);
    return out;
}

std::vector<Eigenvalue> exceptional_levels(Parity parity, double x_min, double x_max,
                                           const ModelParams& params, double threshold) {
    std::vector<Eigenvalue> out;
    const NormalizedParams np = normalize(params);
    const int n_lo = std::max(1, static_cast<int>(std::ceil(x_min)));
    for (int n = n_lo; n <= x_max; ++n) {
        const double w = baseline_cancellation(n, np);
        if (w < threshold) {
            Eigenvalue e = uncoupled_level(n, parity, np);
            e.kind = LevelKind::Exceptional;
            e.residual = w;
            out.push_back(e);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(LevelKind kind) noexcept {
    return kind == LevelKind::Regular ? "regular" : "exceptional";
}

double spectral_lower_bound(const ModelParams& params) {
    const NormalizedParams np = normalize(params);
    return -std::hypot(np.delta, np.epsilon);
}

bool is_exceptional(int n, const ModelParams& params, double threshold) {
    const NormalizedParams np = normalize(params);
    if (n < 1 || !(np.g > 0.0)) {
        return false;
    }
    return baseline_cancellation(n, np) < threshold;
}

std::vector<Eigenvalue> find_regular(Parity parity, double x_min, double x_max,
                                     const ModelParams& params, const SpectrumOptions& opts) {
    require_symmetric(params);
    require_range(x_min, x_max);
    const NormalizedParams np = normalize(params);
    if (np.g == 0.0) {
        return uncoupled_parity_levels(parity, x_min, x_max, np);
    }

    const double w = opts.scan.window;
    std::vector<PolePosition> poles;
    for (int n = std::max(0, static_cast<int>(std::floor(x_min - w)));
         n <= static_cast<int>(std::ceil(x_max + w)); ++n) {
        poles.push_back({static_cast<double>(n), n, true});
    }

    ScanProblem problem;
    problem.sites = group_poles(std::move(poles), w);
    problem.value = [&](double x) { return eval_G(parity, x, np, opts.tol).value; };
    problem.cleared = [&](double x, const PoleSite& site) {
        return pole_cleared_G(parity, x, site.plus_index, np, opts.tol);
    };

    const std::vector<ScannedRoot> roots = scan_roots(problem, x_min, x_max, opts.scan);
    std::vector<Eigenvalue> out;
    for (const ScannedRoot& r : roots) {
        Eigenvalue e;
        e.x_root = r.x;
        e.energy = np.energy_from_x(r.x);
        e.parity = parity;
        e.bracket_lo = r.lo;
        e.bracket_hi = r.hi;
        e.near_pole = r.near_pole;
        if (r.near_pole) {
            const int n = problem.sites[r.site].plus_index;
            const double dist = std::abs(r.x - n);
            // At a Judd point the cleared function vanishes on the lifted pole
            // itself; that zero is the exceptional level, not a root of G.
            if (dist < kExceptionalRootMerge && n >= 1 &&
                baseline_cancellation(n, np) < opts.exceptional_threshold) {
                continue;
            }
            e.residual = dist > opts.tol.pole_radius
                             ? std::abs(eval_G(parity, r.x, np, opts.tol).value)
                             : std::abs(pole_cleared_G(parity, r.x, n, np, opts.tol));
        } else {
            e.residual = std::abs(eval_G(parity, r.x, np, opts.tol).value);
        }
        out.push_back(e);
    }
    index_by_energy(out);
    return out;
}

std::vector<double> find_exceptional(int n, double g_min, double g_max, const ModelParams& params,
                                     int scan_cells) {
    validate(params);
    if (n < 1) {
        throw InvalidArgument("exceptional baselines start at n = 1");
    }
    if (!(g_min > 0.0) || !(g_max > g_min) || !std::isfinite(g_max)) {
        throw InvalidArgument("coupling range must satisfy 0 < g_min < g_max");
    }
    if (scan_cells < 2) {
        throw InvalidArgument("need at least two scan cells");
    }
    NormalizedParams np = normalize(params);
    np.delta = std::abs(np.delta);
    np.epsilon = 0.0;
    auto weighted_k = [&](double g) {
        NormalizedParams p = np;
        p.g = g;
        return k_at_baseline(n, p) * std::pow(g, n);
    };

    const double a = g_min / params.omega;
    const double b = g_max / params.omega;
    std::vector<double> out;
    double g_prev = a;
    double f_prev = weighted_k(a);
    for (int i = 1; i <= scan_cells; ++i) {
        const double g = i == scan_cells ? b : a + (b - a) * (static_cast<double>(i) / scan_cells);
        const double f = weighted_k(g);
        if (f_prev == 0.0) {
            out.push_back(g_prev);
        } else if ((f_prev < 0.0) != (f < 0.0) && f != 0.0) {
            const RefinedRoot r = refine_root(weighted_k, g_prev, g, f_prev, f, 1e-15);
            out.push_back(r.x);
        }
        g_prev = g;
        f_prev = f;
    }
    if (f_prev == 0.0) {
        out.push_back(g_prev);
    }
    for (double& g : out) {
        g *= params.omega;
    }
    return out;
}

std::vector<Eigenvalue> full_spectrum(const ModelParams& params, double x_max,
                                      const SpectrumOptions& opts) {
    require_symmetric(params);
    const double x_min = spectral_lower_bound(params) - 0.05;
    const NormalizedParams np = normalize(params);
    std::vector<Eigenvalue> all;
    for (Parity p : {Parity::Plus, Parity::Minus}) {
        std::vector<Eigenvalue> sector = find_regular(p, x_min, x_max, params, opts);
        if (np.g > 0.0) {
            const auto extra =
                exceptional_levels(p, x_min, x_max, params, opts.exceptional_threshold);
            sector.insert(sector.end(), extra.begin(), extra.end());
        }
        index_by_energy(sector);
        all.insert(all.end(), sector.begin(), sector.end());
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Eigenvalue& a, const Eigenvalue& b) { return a.energy < b.energy; });
    for (std::size_t i = 0; i + 1 < all.size(); ++i) {
        const double scale = std::max(1.0, std::abs(all[i].energy));
        if (std::abs(all[i + 1].energy - all[i].energy) < 1e-9 * scale) {
            all[i].degenerate = all[i + 1].degenerate = true;
        }
    }
    return all;
}

std::vector<Eigenvalue> spectrum_eps(const ModelParams& params, double x_min, double x_max,
                                     const SpectrumOptions& opts) {
    require_range(x_min, x_max);
    const NormalizedParams np = normalize(params);
    if (np.g == 0.0) {
        return uncoupled_eps_levels(x_min, x_max, np);
    }

    const double w = opts.scan.window;
    std::vector<PolePosition> poles;
    const int n_hi = static_cast<int>(std::ceil(x_max + std::abs(np.epsilon) + w)) + 1;
    for (int n = 0; n <= n_hi; ++n) {
        for (Branch b : {Branch::Plus, Branch::Minus}) {
            const double pos = n - branch_shift(np, b);
            if (pos >= x_min - 2.0 * w && pos <= x_max + 2.0 * w) {
                poles.push_back({pos, n, b == Branch::Plus});
            }
        }
    }

    ScanProblem problem;
    problem.sites = group_poles(std::move(poles), w);
    problem.value = [&](double x) { return eval_G_eps(x, np, opts.tol).value; };
    auto optional_index = [](int i) { return i >= 0 ? std::optional<int>(i) : std::nullopt; };
    problem.cleared = [&](double x, const PoleSite& site) {
        return pole_cleared_G_eps(x, optional_index(site.plus_index),
                                  optional_index(site.minus_index), np, opts.tol);
    };

    std::vector<Eigenvalue> out;
    for (const ScannedRoot& r : scan_roots(problem, x_min, x_max, opts.scan)) {
        Eigenvalue e;
        e.x_root = r.x;
        e.energy = np.energy_from_x(r.x);
        e.bracket_lo = r.lo;
        e.bracket_hi = r.hi;
        e.near_pole = r.near_pole;
        try {
            e.residual = std::abs(eval_G_eps(r.x, np, opts.tol).value);
        } catch (const PoleError&) {
            const PoleSite& s = problem.sites[r.site];
            e.residual = std::abs(pole_cleared_G_eps(r.x, optional_index(s.plus_index),
                                                     optional_index(s.minus_index), np, opts.tol));
        }
        out.push_back(e);
    }
    index_by_energy(out);
    return out;
}

std::vector<Eigenvalue> lowest_levels(Parity parity, int count, const ModelParams& params,
                                      const SpectrumOptions& opts) {
    require_symmetric(params);
    if (count < 1) {
        throw InvalidArgument("level count must be positive");
    }
    const NormalizedParams np = normalize(params);
    const double x_min = spectral_lower_bound(params) - 0.05;
    double x_max = x_min + count + 1.5;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<Eigenvalue> levels = find_regular(parity, x_min, x_max, params, opts);
        if (np.g > 0.0) {
            const auto extra =
                exceptional_levels(parity, x_min, x_max, params, opts.exceptional_threshold);
            levels.insert(levels.end(), extra.begin(), extra.end());
        }
        index_by_energy(levels);
        if (static_cast<int>(levels.size()) >= count) {
            levels.resize(count);
            return levels;
        }
        x_max += std::max(2.0, 0.5 * count);
    }
    throw ConvergenceError("could not bracket the requested number of levels", 16);
}

std::vector<Eigenvalue> lowest_levels_eps(int count, const ModelParams& params,
                                          const SpectrumOptions& opts) {
    if (count < 1) {
        throw InvalidArgument("level count must be positive");
    }
    const double x_min = spectral_lower_bound(params) - 0.05;
    double x_max = x_min + 0.5 * count + 1.5;
    for (int attempt = 0; attempt < 16; ++attempt) {
        std::vector<Eigenvalue> levels = spectrum_eps(params, x_min, x_max, opts);
        if (static_cast<int>(levels.size()) >= count) {
            levels.resize(count);
            return levels;
        }
        x_max += std::max(2.0, 0.25 * count);
    }
    throw ConvergenceError("could not bracket the requested number of levels", 16);
}

}  // namespace rabi
