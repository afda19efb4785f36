#include "rabi/roots.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {
namespace {

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

struct Cell {
    double lo, hi, f_lo, f_hi;
};

struct GridScan {
    std::vector<Cell> brackets;
    std::vector<double> exact_zeros;

    std::size_t count() const { return brackets.size() + exact_zeros.size(); }
};

GridScan grid_scan(const std::function<double(double)>& f, double a, double b, int cells) {
    GridScan out;
    double x_prev = a;
    double f_prev = f(a);
    if (f_prev == 0.0) {
        out.exact_zeros.push_back(a);
    }
    for (int i = 1; i <= cells; ++i) {
        const double x = i == cells ? b : a + (b - a) * (static_cast<double>(i) / cells);
        const double fx = f(x);
        if (!std::isfinite(fx)) {
            throw NumericError("spectral function is not finite on the scan grid");
        }
        if (fx == 0.0) {
            out.exact_zeros.push_back(x);
        } else if (sign_of(f_prev) * sign_of(fx) < 0) {
            out.brackets.push_back({x_prev, x, f_prev, fx});
        }
        x_prev = x;
        f_prev = fx;
    }
    return out;
}

// Halve the grid until two successive passes agree on the number of roots.
GridScan stable_scan(const std::function<double(double)>& f, double a, double b, int cells,
                     int max_refinements) {
    GridScan previous = grid_scan(f, a, b, cells);
    for (int r = 0; r <= max_refinements; ++r) {
        cells *= 2;
        GridScan current = grid_scan(f, a, b, cells);
        if (current.count() == previous.count()) {
            return current;
        }
        previous = std::move(current);
    }
    return previous;
}

void collect(const std::function<double(double)>& f, const GridScan& scan, double x_tol,
             bool near_pole, int site, std::vector<ScannedRoot>& out) {
    for (const Cell& c : scan.brackets) {
        const RefinedRoot r = refine_root(f, c.lo, c.hi, c.f_lo, c.f_hi, x_tol);
        out.push_back({r.x, r.lo, r.hi, near_pole, site});
    }
    for (double z : scan.exact_zeros) {
        out.push_back({z, z, z, near_pole, site});
    }
}

}  // namespace

RefinedRoot refine_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                        double f_hi, double x_tol, int max_iterations) {
    if (!(lo < hi)) {
        throw InvalidArgument("refine_root: empty bracket");
    }
    if (sign_of(f_lo) * sign_of(f_hi) > 0) {
        throw InvalidArgument("refine_root: endpoints do not bracket a sign change");
    }
    RefinedRoot out{lo, lo, hi, 0};
    if (f_lo == 0.0) {
        out.hi = lo;
        return out;
    }
    if (f_hi == 0.0) {
        out.x = hi;
        out.lo = hi;
        return out;
    }

    double a = lo, b = hi, fa = f_lo, fb = f_hi;
    int retained = 0;  // +1: a kept twice, -1: b kept twice (Illinois bookkeeping)
    double width_two_ago = b - a;
    double width_one_ago = b - a;
    int it = 0;
    while (b - a > x_tol && it < max_iterations) {
        ++it;
        double c = (a * fb - b * fa) / (fb - fa);
        const bool stalled = (b - a) > 0.5 * width_two_ago;
        if (!(c > a && c < b) || (it % 3 == 0 && stalled)) {
            c = 0.5 * (a + b);
        }
        const double fc = f(c);
        if (fc == 0.0) {
            out = {c, c, c, it};
            return out;
        }
        if (sign_of(fc) == sign_of(fa)) {
            a = c;
            fa = fc;
            if (retained == -1) {
                fb *= 0.5;
            }
            retained = -1;
        } else {
            b = c;
            fb = fc;
            if (retained == 1) {
                fa *= 0.5;
            }
            retained = 1;
        }
        width_two_ago = width_one_ago;
        width_one_ago = b - a;
    }
    if (b - a > x_tol) {
        throw ConvergenceError("refine_root: bracket did not shrink to tolerance", it);
    }
    out.x = 0.5 * (a + b);
    out.lo = a;
    out.hi = b;
    out.iterations = it;
    return out;
}

std::vector<PoleSite> group_poles(std::vector<PolePosition> poles, double window) {
    std::sort(poles.begin(), poles.end(),
              [](const PolePosition& l, const PolePosition& r) { return l.position < r.position; });
    std::vector<PoleSite> sites;
    for (const PolePosition& p : poles) {
        if (!sites.empty() && p.position - sites.back().hi < 2.0 * window) {
            PoleSite& s = sites.back();
            s.hi = p.position;
            (p.plus_branch ? s.plus_index : s.minus_index) = p.index;
            continue;
        }
        PoleSite s;
        s.lo = s.hi = p.position;
        (p.plus_branch ? s.plus_index : s.minus_index) = p.index;
        sites.push_back(s);
    }
    return sites;
}

std::vector<ScannedRoot> scan_roots(const ScanProblem& problem, double x_min, double x_max,
                                    const ScanSettings& settings) {
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw InvalidArgument("scan range must be finite with x_min < x_max");
    }
    if (!(settings.step > 0.0)) {
        throw InvalidArgument("scan step must be positive");
    }
    const double w = settings.window;
    std::vector<ScannedRoot> roots;

    auto scan_segment = [&](double a, double b) {
        if (b - a <= 0.0) {
            return;
        }
        const int cells = std::max(2, static_cast<int>(std::ceil((b - a) / settings.step)));
        const GridScan scan = stable_scan(problem.value, a, b, cells, settings.max_refinements);
        collect(problem.value, scan, settings.x_tolerance, false, -1, roots);
    };

    double cursor = x_min;
    for (int i = 0; i < static_cast<int>(problem.sites.size()); ++i) {
        const PoleSite& site = problem.sites[i];
        const double wa = site.lo - w;
        const double wb = site.hi + w;
        if (wb <= x_min) {
            continue;
        }
        if (wa >= x_max) {
            break;
        }
        scan_segment(cursor, std::max(cursor, wa));
        const double a = std::max(wa, x_min);
        const double b = std::min(wb, x_max);
        if (b > a) {
            auto cleared = [&](double x) { return problem.cleared(x, site); };
            const GridScan scan =
                stable_scan(cleared, a, b, settings.window_cells, settings.max_refinements);
            collect(cleared, scan, settings.x_tolerance, true, i, roots);
        }
        cursor = std::max(cursor, b);
    }
    scan_segment(cursor, x_max);

    std::sort(roots.begin(), roots.end(),
              [](const ScannedRoot& l, const ScannedRoot& r) { return l.x < r.x; });
    // A zero sitting exactly on a segment/window boundary is seen from both sides.
    std::vector<ScannedRoot> unique;
    for (const ScannedRoot& r : roots) {
        if (!unique.empty() && r.x - unique.back().x < settings.x_tolerance) {
            continue;
        }
        unique.push_back(r);
    }
    return unique;
}

}  // namespace rabi
