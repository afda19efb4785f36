#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/recurrence.hpp"
#include "rabi/roots.hpp"

namespace rabi {

enum class LevelKind { Regular, Exceptional };
std::string_view to_string(LevelKind kind) noexcept;

/// One certified spectral point. `x_root` and the bracket are in omega = 1
/// units; `energy` is in user units.
struct Eigenvalue {
    double x_root = 0.0;
    double energy = 0.0;
    std::optional<Parity> parity;  // empty for the broken-parity model
    int index = 0;                 // position within its sector, ascending
    LevelKind kind = LevelKind::Regular;
    double residual = 0.0;  // |G(x_root)|, or the relative size of K_n(n) for exceptional points
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool near_pole = false;
    bool degenerate = false;
};

struct SpectrumOptions {
    ScanSettings scan;
    Tolerances tol;
    // |K_n(n)| relative to the terms of its last recurrence step; below this
    // baseline n carries an exceptional (Judd) level.
    double exceptional_threshold = 1e-10;
};

// Zeros of G_parity in [x_min, x_max] (omega = 1 units), ascending, indexed
// from 0. Requires epsilon = 0. For g = 0 the uncoupled levels are returned.
std::vector<Eigenvalue> find_regular(Parity parity, double x_min, double x_max,
                                     const ModelParams& params, const SpectrumOptions& opts = {});

// Couplings g in [g_min, g_max] (user units) where baseline n carries a doubly
// degenerate exceptional level, i.e. K_n(n) = 0 at fixed |delta|.
std::vector<double> find_exceptional(int n, double g_min, double g_max, const ModelParams& params,
                                     int scan_cells = 4000);

// Is baseline n exceptional for these parameters?
bool is_exceptional(int n, const ModelParams& params, double threshold = 1e-10);

// Both parity sectors plus exceptional points with x <= x_max, sorted by energy.
std::vector<Eigenvalue> full_spectrum(const ModelParams& params, double x_max,
                                      const SpectrumOptions& opts = {});

// Zeros of G_eps in [x_min, x_max]; parity is left empty.
std::vector<Eigenvalue> spectrum_eps(const ModelParams& params, double x_min, double x_max,
                                     const SpectrumOptions& opts = {});

// First `count` levels of one parity sector, exceptional levels included.
std::vector<Eigenvalue> lowest_levels(Parity parity, int count, const ModelParams& params,
                                      const SpectrumOptions& opts = {});

// First `count` levels of the broken-parity model.
std::vector<Eigenvalue> lowest_levels_eps(int count, const ModelParams& params,
                                          const SpectrumOptions& opts = {});

// No eigenvalue has x below this value: H >= -g^2 - sqrt(delta^2 + eps^2).
double spectral_lower_bound(const ModelParams& params);

}  // namespace rabi
