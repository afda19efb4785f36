#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

enum class SweepModel { Rabi, JaynesCummings, Eps };
std::string_view to_string(SweepModel model) noexcept;

/// Rabi: (parity sign, index within parity). JC: (C, rung) with rung -1/+1
/// and 0 for C = 0. Broken-parity model: (0, index).
struct LevelLabel {
    int sector = 0;
    int index = 0;
    auto operator<=>(const LevelLabel&) const = default;
};

// Below this reduced coupling the sweeps take levels from the matrix oracle.
inline constexpr double kOracleFallbackCoupling = 0.01;

struct SweepResult {
    SweepModel model = SweepModel::Rabi;
    double omega = 1.0;
    double delta = 0.0;
    double epsilon = 0.0;
    std::vector<double> grid;  // couplings g, user units
    std::vector<LevelLabel> labels;
    std::vector<std::vector<double>> energies;  // energies[label][grid point]; NaN where a point failed
    std::vector<std::string> point_errors;      // one entry per grid point, empty when fine
    bool sectored = true;
    // False when epsilon is a multiple of omega / 2, where crossings may occur.
    bool no_crossing_expected = true;
    std::vector<std::string> notes;
    // Energy of labels[label] at an arbitrary coupling; used to refine events.
    std::function<double(std::size_t label, double g)> evaluate;
};

SweepResult sweep_rabi(double delta, double omega, double g_min, double g_max, int steps,
                       int levels_per_parity);
SweepResult sweep_jc(double delta, double omega, double g_min, double g_max, int steps, int c_max);
SweepResult sweep_eps(double delta, double epsilon, double omega, double g_min, double g_max,
                      int steps, int levels);

enum class CrossingKind { TrueCrossing, AvoidedCrossing };
std::string_view to_string(CrossingKind kind) noexcept;

struct CrossingEvent {
    double g_star = 0.0;
    LevelLabel a;
    LevelLabel b;
    double gap_min = 0.0;
    CrossingKind kind = CrossingKind::AvoidedCrossing;
    bool within_sector = false;
    // The minimum could not be refined off-grid; gap_min is a quadratic-fit estimate.
    bool resolution_limited = false;
};

// Threshold defaults to 1e-6 omega.
std::vector<CrossingEvent> detect_crossings(const SweepResult& sweep,
                                            std::optional<double> threshold = std::nullopt);

struct IntegrabilityReport {
    int ladders = 0;
    bool consistent_labeling = false;
    int true_crossings = 0;
    int within_sector_anomalies = 0;
    int unresolved_events = 0;
    double smallest_gap = 0.0;  // smallest gap_min among avoided crossings
    std::string verdict;
    std::string caveat;
};

IntegrabilityReport integrability_report(const SweepResult& sweep,
                                         const std::vector<CrossingEvent>& events,
                                         std::optional<double> threshold = std::nullopt);

}  // namespace rabi
