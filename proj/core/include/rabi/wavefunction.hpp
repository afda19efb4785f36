#pragma once

#include <complex>
#include <vector>

#include "rabi/model.hpp"
#include "rabi/recurrence.hpp"

namespace rabi {

enum class SeriesRoute { Phi2, Phi1 };

/// Taylor coefficients of psi(z) = sum_m c_m z^m in Bargmann space.
struct BargmannSeries {
    std::vector<double> taylor;
    SeriesRoute source = SeriesRoute::Phi2;
    Parity parity = Parity::Plus;
    double x_root = 0.0;  // omega = 1 units
    double tail_ratio = 0.0;  // |A_M| / max |A_m| for the Fock amplitudes A_m = c_m sqrt(m!)
};

// Order 0 picks a default from the size of the minimal solution.
//   psi(z) = exp(g z) sum_n K_n (g - z)^n
BargmannSeries psi_from_phi2(double x_root, Parity parity, const ModelParams& params, int order = 0,
                             double tail_tolerance = 1e-12);
//   psi(z) = exp(-g z) sum_n K_n delta_p (z + g)^n / (x - n),  delta_p = +-delta
BargmannSeries psi_from_phi1(double x_root, Parity parity, const ModelParams& params, int order = 0,
                             double tail_tolerance = 1e-12);

// Evaluate a Taylor series at z (Horner).
std::complex<double> evaluate(const BargmannSeries& series, std::complex<double> z);

struct ConsistencyReport {
    double max_difference = 0.0;  // max |phi2(-z) - phi1(z)| over the samples
    double scale = 0.0;           // max |phi2(-z)| over the samples
    int terms = 0;
};

// Sums both representations directly with the forward recurrence. Every
// sample must satisfy |z| < g.
ConsistencyReport consistency_check(double x, Parity parity, const ModelParams& params,
                                    const std::vector<std::complex<double>>& z_samples);

// n points on the circle |z| = radius, starting on the positive real axis.
std::vector<std::complex<double>> circle_samples(double radius, int n);

/// Normalised Fock-space state in the sigma_z basis.
struct FockVector {
    std::vector<double> up;
    std::vector<double> down;

    // Interleaved product-basis layout, index 2n + (up ? 0 : 1).
    std::vector<double> product_basis(int n_tr) const;
    // Amplitudes in the parity-block basis {|s_k, k>} of the given parity.
    std::vector<double> parity_block(Parity parity, int n_tr) const;
};

FockVector fock_amplitudes(const BargmannSeries& series, const ModelParams& params);

}  // namespace rabi
