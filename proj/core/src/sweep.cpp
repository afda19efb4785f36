#include "rabi/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "rabi/errors.hpp"
#include "rabi/oracle.hpp"
#include "rabi/parallel.hpp"
#include "rabi/roots.hpp"
#include "rabi/spectrum.hpp"

namespace rabi {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kFallbackTruncation = 80;

std::vector<double> make_grid(double g_min, double g_max, int steps) {
    if (steps < 2) {
        throw InvalidArgument("a sweep needs at least two grid points");
    }
    if (!(g_min >= 0.0) || !(g_max > g_min) || !std::isfinite(g_max)) {
        throw InvalidArgument("coupling range must satisfy 0 <= g_min < g_max");
    }
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) {
        grid[i] = i == steps - 1 ? g_max : g_min + (g_max - g_min) * i / (steps - 1);
    }
    return grid;
}

ModelParams at_coupling(double omega, double g, double delta, double epsilon) {
    ModelParams p;
    p.omega = omega;
    p.g = g;
    p.delta = delta;
    p.epsilon = epsilon;
    validate(p);
    return p;
}

bool small_coupling(const ModelParams& p) {
    const double gt = p.g / p.omega;
    return gt > 0.0 && gt < kOracleFallbackCoupling;
}

std::vector<double> rabi_levels(Parity parity, int count, const ModelParams& p) {
    if (small_coupling(p)) {
        const OracleModel m =
            parity == Parity::Plus ? OracleModel::ParityBlockPlus : OracleModel::ParityBlockMinus;
        std::vector<double> v = eigensolve(build(m, p, kFallbackTruncation), false).values;
        v.resize(count);
        return v;
    }
    std::vector<double> out;
    for (const Eigenvalue& e : lowest_levels(parity, count, p)) {
        out.push_back(e.energy);
    }
    return out;
}

std::vector<double> eps_levels(int count, const ModelParams& p) {
    if (small_coupling(p)) {
        return oracle_levels(OracleModel::RabiEps, p, kFallbackTruncation, count);
    }
    std::vector<double> out;
    for (const Eigenvalue& e : lowest_levels_eps(count, p)) {
        out.push_back(e.energy);
    }
    return out;
}

// Fills result.energies column by column; `column` returns one value per label.
void fill(SweepResult& result, const std::function<std::vector<double>(double)>& column) {
    const std::size_t points = result.grid.size();
    result.energies.assign(result.labels.size(), std::vector<double>(points, kNaN));
    result.point_errors.assign(points, {});
    parallel_for(points, [&](std::size_t k) {
        try {
            const std::vector<double> values = column(result.grid[k]);
            for (std::size_t l = 0; l < values.size() && l < result.labels.size(); ++l) {
                result.energies[l][k] = values[l];
            }
        } catch (const Error& e) {
            result.point_errors[k] = e.what();
        }
    });
}

struct Quadratic {
    double a = 0.0;  // y = a t^2 + b t + c with t = x - x0
    double b = 0.0;
    double c = 0.0;
    double x0 = 0.0;
};

// Least-squares quadratic through the given points.
Quadratic fit_quadratic(const std::vector<double>& x, const std::vector<double>& y, double x0) {
    std::array<double, 5> s{};
    std::array<double, 3> r{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - x0;
        double tp = 1.0;
        for (int p = 0; p < 5; ++p) {
            s[p] += tp;
            if (p < 3) {
                r[p] += tp * y[i];
            }
            tp *= t;
        }
    }
    // Normal equations [[s4 s3 s2] [s3 s2 s1] [s2 s1 s0]] (a b c) = (r2 r1 r0), by Cramer.
    const double m[3][3] = {{s[4], s[3], s[2]}, {s[3], s[2], s[1]}, {s[2], s[1], s[0]}};
    const double rhs[3] = {r[2], r[1], r[0]};
    auto det3 = [](const double q[3][3]) {
        return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) -
               q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
               q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    };
    const double det = det3(m);
    Quadratic out;
    out.x0 = x0;
    if (det == 0.0) {
        return out;
    }
    double coef[3];
    for (int col = 0; col < 3; ++col) {
        double q[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                q[i][j] = j == col ? rhs[i] : m[i][j];
            }
        }
        coef[col] = det3(q) / det;
    }
    out.a = coef[0];
    out.b = coef[1];
    out.c = coef[2];
    return out;
}

// Five grid points centred on k, shifted inward at the edges.
std::pair<std::vector<double>, std::vector<double>> window(const std::vector<double>& grid,
                                                           const std::vector<double>& y,
                                                           std::size_t k) {
    const std::size_t n = grid.size();
    const std::size_t width = std::min<std::size_t>(5, n);
    std::size_t start = k >= 2 ? k - 2 : 0;
    start = std::min(start, n - width);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = start; i < start + width; ++i) {
        if (std::isfinite(y[i])) {
            xs.push_back(grid[i]);
            ys.push_back(y[i]);
        }
    }
    return {xs, ys};
}

// Golden-section minimisation of f on [lo, hi].
std::pair<double, double> golden_minimum(const std::function<double(double)>& f, double lo,
                                         double hi, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > x_tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? std::pair{c, fc} : std::pair{d, fd};
}

bool adjacent_in_energy(const SweepResult& s, std::size_t a, std::size_t b, std::size_t k) {
    const double lo = std::min(s.energies[a][k], s.energies[b][k]);
    const double hi = std::max(s.energies[a][k], s.energies[b][k]);
    for (std::size_t c = 0; c < s.labels.size(); ++c) {
        if (c == a || c == b) {
            continue;
        }
        const double e = s.energies[c][k];
        if (e > lo && e < hi) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string_view to_string(SweepModel model) noexcept {
    switch (model) {
        case SweepModel::Rabi: return "rabi";
        case SweepModel::JaynesCummings: return "jc";
        case SweepModel::Eps: return "eps";
    }
    return "unknown";
}

std::string_view to_string(CrossingKind kind) noexcept {
    return kind == CrossingKind::TrueCrossing ? "true" : "avoided";
}

SweepResult sweep_rabi(double delta, double omega, double g_min, double g_max, int steps,
                       int levels_per_parity) {
    if (levels_per_parity < 1) {
        throw InvalidArgument("need at least one level per parity");
    }
    at_coupling(omega, g_max, delta, 0.0);
    SweepResult r;
    r.model = SweepModel::Rabi;
    r.omega = omega;
    r.delta = delta;
    r.grid = make_grid(g_min, g_max, steps);
    for (Parity p : {Parity::Plus, Parity::Minus}) {
        for (int i = 0; i < levels_per_parity; ++i) {
            r.labels.push_back({sign(p), i});
        }
    }
    const int m = levels_per_parity;
    fill(r, [=](double g) {
        const ModelParams p = at_coupling(omega, g, delta, 0.0);
        std::vector<double> col = rabi_levels(Parity::Plus, m, p);
        const std::vector<double> odd = rabi_levels(Parity::Minus, m, p);
        col.insert(col.end(), odd.begin(), odd.end());
        return col;
    });
    const std::vector<LevelLabel> labels = r.labels;
    r.evaluate = [=](std::size_t label, double g) {
        const LevelLabel l = labels.at(label);
        const Parity parity = l.sector > 0 ? Parity::Plus : Parity::Minus;
        return rabi_levels(parity, l.index + 1, at_coupling(omega, g, delta, 0.0)).back();
    };
    return r;
}

SweepResult sweep_jc(double delta, double omega, double g_min, double g_max, int steps,
                     int c_max) {
    if (c_max < 0) {
        throw InvalidArgument("c_max must be non-negative");
    }
    at_coupling(omega, g_max, delta, 0.0);
    SweepResult r;
    r.model = SweepModel::JaynesCummings;
    r.omega = omega;
    r.delta = delta;
    r.grid = make_grid(g_min, g_max, steps);
    for (const JcLevel& l : jc_spectrum(at_coupling(omega, 0.0, delta, 0.0), c_max)) {
        r.labels.push_back({l.c, l.rung});
    }
    fill(r, [=](double g) {
        std::vector<double> col;
        for (const JcLevel& l : jc_spectrum(at_coupling(omega, g, delta, 0.0), c_max)) {
            col.push_back(l.energy);
        }
        return col;
    });
    r.evaluate = [=](std::size_t label, double g) {
        return jc_spectrum(at_coupling(omega, g, delta, 0.0), c_max).at(label).energy;
    };
    return r;
}

SweepResult sweep_eps(double delta, double epsilon, double omega, double g_min, double g_max,
                      int steps, int levels) {
    if (epsilon == 0.0) {
        throw InvalidArgument("the broken-parity sweep needs epsilon != 0");
    }
    if (levels < 1) {
        throw InvalidArgument("need at least one level");
    }
    at_coupling(omega, g_max, delta, epsilon);
    SweepResult r;
    r.model = SweepModel::Eps;
    r.omega = omega;
    r.delta = delta;
    r.epsilon = epsilon;
    r.sectored = false;
    r.grid = make_grid(g_min, g_max, steps);
    const double halves = 2.0 * epsilon / omega;
    if (std::abs(halves - std::round(halves)) < 1e-12) {
        r.no_crossing_expected = false;
        r.notes.push_back("epsilon is a multiple of omega/2: outside validity of no-crossing expectation");
    }
    for (int i = 0; i < levels; ++i) {
        r.labels.push_back({0, i});
    }
    fill(r, [=](double g) { return eps_levels(levels, at_coupling(omega, g, delta, epsilon)); });
    r.evaluate = [=](std::size_t label, double g) {
        return eps_levels(static_cast<int>(label) + 1, at_coupling(omega, g, delta, epsilon)).back();
    };
    return r;
}

std::vector<CrossingEvent> detect_crossings(const SweepResult& s, std::optional<double> threshold) {
    const double thr = threshold.value_or(1e-6 * s.omega);
    const std::size_t points = s.grid.size();
    if (points < 3) {
        throw InvalidArgument("crossing detection needs at least three grid points");
    }
    std::vector<CrossingEvent> events;
    const std::size_t n_labels = s.labels.size();
    for (std::size_t a = 0; a < n_labels; ++a) {
        for (std::size_t b = a + 1; b < n_labels; ++b) {
            std::vector<double> d(points);
            for (std::size_t k = 0; k < points; ++k) {
                d[k] = s.energies[a][k] - s.energies[b][k];
            }
            const bool within = s.sectored && s.labels[a].sector == s.labels[b].sector;
            auto signed_gap = [&](double g) { return s.evaluate(a, g) - s.evaluate(b, g); };
            auto make = [&](double g_star, double gap, bool limited) {
                CrossingEvent e;
                e.g_star = g_star;
                e.a = s.labels[a];
                e.b = s.labels[b];
                e.gap_min = gap;
                e.kind = gap < thr ? CrossingKind::TrueCrossing : CrossingKind::AvoidedCrossing;
                e.within_sector = within;
                e.resolution_limited = limited;
                events.push_back(e);
            };

            for (std::size_t k = 0; k + 1 < points; ++k) {
                if (!std::isfinite(d[k]) || !std::isfinite(d[k + 1])) {
                    continue;
                }
                if (d[k] == 0.0) {
                    make(s.grid[k], 0.0, false);
                    continue;
                }
                if (d[k] * d[k + 1] >= 0.0) {
                    continue;
                }
                bool refined = false;
                if (s.evaluate) {
                    try {
                        const RefinedRoot root = refine_root(signed_gap, s.grid[k], s.grid[k + 1],
                                                             d[k], d[k + 1], 1e-12);
                        make(root.x, std::abs(signed_gap(root.x)), false);
                        refined = true;
                    } catch (const Error&) {
                    }
                }
                if (!refined) {
                    auto [xs, ys] = window(s.grid, d, k);
                    const Quadratic q = fit_quadratic(xs, ys, s.grid[k]);
                    // Root of the fitted gap inside the bracket, linear fallback.
                    double t = -d[k] * (s.grid[k + 1] - s.grid[k]) / (d[k + 1] - d[k]);
                    if (q.a != 0.0) {
                        const double disc = q.b * q.b - 4.0 * q.a * q.c;
                        if (disc >= 0.0) {
                            for (double root : {(-q.b + std::sqrt(disc)) / (2.0 * q.a),
                                                (-q.b - std::sqrt(disc)) / (2.0 * q.a)}) {
                                if (root >= 0.0 && root <= s.grid[k + 1] - s.grid[k]) {
                                    t = root;
                                }
                            }
                        }
                    }
                    make(s.grid[k] + t, 0.0, true);
                }
            }

            for (std::size_t k = 1; k + 1 < points; ++k) {
                const double l = d[k - 1];
                const double c = d[k];
                const double r = d[k + 1];
                if (!std::isfinite(l) || !std::isfinite(c) || !std::isfinite(r)) {
                    continue;
                }
                if (!(l * c > 0.0 && c * r > 0.0)) {
                    continue;
                }
                if (!(std::abs(c) <= std::abs(l) && std::abs(c) < std::abs(r))) {
                    continue;
                }
                if (!adjacent_in_energy(s, a, b, k)) {
                    continue;
                }
                const double jump = std::max(std::abs(l - c), std::abs(r - c));
                if (s.evaluate && std::abs(c) <= jump) {
                    try {
                        auto [g_star, gap] = golden_minimum(
                            [&](double g) { return std::abs(signed_gap(g)); }, s.grid[k - 1],
                            s.grid[k + 1], 1e-9 * std::max(1.0, s.grid[k + 1]));
                        make(g_star, gap, false);
                        continue;
                    } catch (const Error&) {
                    }
                }
                // Vertex of the parabola through the three samples of |d|.
                const double h = s.grid[k + 1] - s.grid[k];
                const double al = std::abs(l);
                const double ac = std::abs(c);
                const double ar = std::abs(r);
                const double curv = al - 2.0 * ac + ar;
                double shift = 0.0;
                double gap = ac;
                if (curv > 0.0) {
                    shift = 0.5 * h * (al - ar) / curv;
                    gap = std::max(0.0, ac - (al - ar) * (al - ar) / (8.0 * curv));
                }
                make(s.grid[k] + shift, gap, !s.evaluate || ac <= jump);
            }
        }
    }
    std::sort(events.begin(), events.end(), [](const CrossingEvent& x, const CrossingEvent& y) {
        if (x.g_star != y.g_star) {
            return x.g_star < y.g_star;
        }
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    return events;
}

IntegrabilityReport integrability_report(const SweepResult& s,
                                         const std::vector<CrossingEvent>& events,
                                         std::optional<double> threshold) {
    const double thr = threshold.value_or(1e-6 * s.omega);
    IntegrabilityReport rep;
    std::set<int> crossing_sectors;
    std::map<int, int> rungs;
    for (const LevelLabel& l : s.labels) {
        ++rungs[l.sector];
    }
    rep.smallest_gap = std::numeric_limits<double>::infinity();
    for (const CrossingEvent& e : events) {
        if (e.kind == CrossingKind::TrueCrossing) {
            ++rep.true_crossings;
            if (e.within_sector) {
                ++rep.within_sector_anomalies;
            } else {
                crossing_sectors.insert(e.a.sector);
                crossing_sectors.insert(e.b.sector);
            }
            if (e.resolution_limited) {
                ++rep.unresolved_events;
            }
        } else {
            rep.smallest_gap = std::min(rep.smallest_gap, e.gap_min);
            if (e.gap_min < 100.0 * thr) {
                ++rep.unresolved_events;
            }
        }
    }
    if (!s.no_crossing_expected) {
        rep.caveat = "epsilon is a multiple of omega/2; no claim is made about crossings";
    }
    if (rep.within_sector_anomalies > 0 || rep.unresolved_events > 0) {
        rep.ladders = 0;
        rep.verdict = "inconclusive at this resolution";
        return rep;
    }

    if (!s.sectored) {
        if (rep.true_crossings == 0) {
            rep.ladders = 1;
            rep.consistent_labeling = true;
            rep.verdict = "1 ladder, no crossings: levels classified only by energy "
                          "(non-integrable signature)";
        } else {
            rep.verdict = "inconclusive at this resolution";
        }
        return rep;
    }

    rep.consistent_labeling = true;
    const int n_sectors = static_cast<int>(rungs.size());
    int max_rungs = 0;
    for (const auto& [sector, count] : rungs) {
        max_rungs = std::max(max_rungs, count);
    }
    if (n_sectors > 2 && max_rungs <= 2) {
        rep.ladders = n_sectors;
        rep.verdict = std::to_string(n_sectors) +
                      " two-rung ladders: enhanced-symmetry signature (JC-like)";
        return rep;
    }
    rep.ladders = static_cast<int>(crossing_sectors.size());
    if (rep.ladders == 2) {
        rep.verdict = "2 ladders: integrable signature (f = 2 quantum numbers)";
    } else if (rep.ladders == 0) {
        rep.verdict = "inconclusive at this resolution";
        rep.consistent_labeling = false;
    } else {
        rep.verdict = std::to_string(rep.ladders) + " ladders";
    }
    return rep;
}

}  // namespace rabi
