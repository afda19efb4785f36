#pragma once

#include <string_view>

namespace rabi {

// Eigenvalue of the parity operator sigma_z * (-1)^(a^dagger a).
enum class Parity : int { Plus = 1, Minus = -1 };

constexpr int sign(Parity p) noexcept { return static_cast<int>(p); }
constexpr Parity opposite(Parity p) noexcept {
    return p == Parity::Plus ? Parity::Minus : Parity::Plus;
}
std::string_view to_string(Parity p) noexcept;

// Series branch of the broken-parity model; Plus places the poles at n - eps.
enum class Branch : int { Plus = 1, Minus = -1 };

constexpr int sign(Branch b) noexcept { return static_cast<int>(b); }
std::string_view to_string(Branch b) noexcept;

/// Model parameters in user energy units (hbar = 1).
///
/// H = omega a^dagger a + g sigma_x (a + a^dagger) + epsilon sigma_x + delta sigma_z.
/// epsilon == 0 is the parity-symmetric Rabi model.
struct ModelParams {
    double omega = 1.0;
    double g = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;

    bool symmetric() const noexcept { return epsilon == 0.0; }
};

/// Same model expressed in omega = 1 units. `omega` keeps the original
/// frequency so results can be mapped back to user units.
struct NormalizedParams {
    double g = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double omega = 1.0;

    bool symmetric() const noexcept { return epsilon == 0.0; }
    double delta2() const noexcept { return delta * delta; }

    // x = E/omega + g^2 is the spectral variable of the G-functions.
    double energy_from_x(double x) const noexcept { return omega * (x - g * g); }
    double x_from_energy(double energy) const noexcept { return energy / omega + g * g; }
};

// Throws InvalidArgument unless omega > 0, g >= 0 and every field is finite.
void validate(const ModelParams& params);

NormalizedParams normalize(const ModelParams& params);

// Inverse of normalize(): user-unit record with the stored omega.
ModelParams denormalize(const NormalizedParams& params) noexcept;

// Every energy field multiplied by c (c > 0); spectra scale by the same c.
ModelParams scaled(const ModelParams& params, double c);

// E^e_n = n omega - g^2 / omega, the n-th baseline.
double baseline_energy(int n, const ModelParams& params);

}  // namespace rabi
