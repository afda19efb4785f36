#pragma once

#include <functional>
#include <vector>

namespace rabi {

/// Result of bracketed refinement; [lo, hi] still brackets a sign change.
struct RefinedRoot {
    double x = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
};

// Illinois-type false position with a bisection safeguard. Iterates never
// leave [lo, hi]; f(lo) and f(hi) must have opposite signs.
RefinedRoot refine_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                        double f_hi, double x_tol = 1e-12, int max_iterations = 400);

/// Poles (one, or two that sit closer than one window) excluded from a scan.
struct PoleSite {
    double lo = 0.0;  // leftmost pole position in the site
    double hi = 0.0;  // rightmost pole position in the site
    int plus_index = -1;
    int minus_index = -1;
};

struct ScanProblem {
    // Spectral function, evaluated only outside every site window.
    std::function<double(double)> value;
    // Pole-cleared counterpart, continuous across the poles of `site`.
    std::function<double(double, const PoleSite&)> cleared;
    std::vector<PoleSite> sites;  // sorted by position
};

struct ScanSettings {
    double step = 1.0 / 200.0;
    double window = 1e-3;
    double x_tolerance = 1e-12;
    // Extra grid halvings allowed when two passes disagree on the root count.
    int max_refinements = 4;
    int window_cells = 8;
};

struct ScannedRoot {
    double x = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool near_pole = false;
    int site = -1;  // index into ScanProblem::sites for near-pole roots
};

// Sign-change scan of [x_min, x_max] with one confirming pass at half the
// step; windows around poles are scanned with the cleared function instead.
std::vector<ScannedRoot> scan_roots(const ScanProblem& problem, double x_min, double x_max,
                                    const ScanSettings& settings);

// Groups sorted pole positions into sites; poles closer than 2 * window share a site.
struct PolePosition {
    double position = 0.0;
    int index = 0;
    bool plus_branch = true;
};
std::vector<PoleSite> group_poles(std::vector<PolePosition> poles, double window);

}  // namespace rabi
