#include "rabi/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rabi/errors.hpp"
#include "rabi/summation.hpp"

namespace rabi {
namespace {

constexpr int kMaxOrder = 160;
constexpr int kMaxDirectTerms = 20000;

struct RootData {
    NormalizedParams np;
    std::vector<double> k;  // minimal solution, K_0 = 1
};

RootData prepare(double x_root, const ModelParams& params) {
    if (!params.symmetric()) {
        throw InvalidArgument("wavefunction series need epsilon = 0");
    }
    RootData data{normalize(params), {}};
    if (!(data.np.g > 0.0)) {
        throw SingularParameterError("wavefunction series need g > 0");
    }
    const MinimalSolution min = minimal_solution(x_root, data.np);
    std::vector<double> k = min.coefficients(static_cast<int>(min.ratios.size()));
    // Drop the part of the minimal solution that no longer contributes.
    double peak = 0.0;
    double weight = 1.0;
    std::size_t used = k.size();
    for (std::size_t n = 0; n < k.size(); ++n) {
        const double w = std::abs(k[n]) * weight;
        peak = std::max(peak, w);
        if (n > 4 && w < 1e-20 * peak) {
            used = n + 1;
            break;
        }
        weight *= 1.0 + 2.0 * data.np.g;
    }
    k.resize(used);
    data.k = std::move(k);
    return data;
}

int default_order(const RootData& data) {
    return std::clamp(2 * static_cast<int>(data.k.size()), 40, kMaxOrder);
}

// Coefficients of sum_n w_n (s z + g)^n in powers of z, s = +-1.
std::vector<double> shifted_power_series(const std::vector<double>& w, double g, int s) {
    const std::size_t n_terms = w.size();
    std::vector<double> out(n_terms, 0.0);
    for (std::size_t k = 0; k < n_terms; ++k) {
        CompensatedSum<double> acc;
        double binom = 1.0;  // C(n, k)
        double gp = 1.0;     // g^(n - k)
        for (std::size_t n = k; n < n_terms; ++n) {
            acc += binom * w[n] * gp;
            binom = binom * static_cast<double>(n + 1) / static_cast<double>(n + 1 - k);
            gp *= g;
        }
        out[k] = (s < 0 && k % 2 == 1) ? -acc.value() : acc.value();
    }
    return out;
}

// Taylor coefficients of exp(a z) * p(z) up to `order`.
std::vector<double> times_exponential(const std::vector<double>& p, double a, int order) {
    std::vector<double> out(order + 1, 0.0);
    for (int m = 0; m <= order; ++m) {
        CompensatedSum<double> acc;
        const int k_max = std::min<int>(m, static_cast<int>(p.size()) - 1);
        for (int k = 0; k <= k_max; ++k) {
            const int j = m - k;
            acc += p[k] * std::pow(a, j) / std::tgamma(j + 1.0);
        }
        out[m] = acc.value();
    }
    return out;
}

double fock_tail_ratio(const std::vector<double>& c) {
    double peak = 0.0;
    double last = 0.0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        const double a = std::abs(c[m]) * std::exp(0.5 * std::lgamma(m + 1.0));
        peak = std::max(peak, a);
        last = a;
    }
    return peak > 0.0 ? last / peak : 0.0;
}

BargmannSeries finish(std::vector<double> taylor, SeriesRoute route, Parity parity, double x_root,
                      double tail_tolerance) {
    BargmannSeries s;
    s.taylor = std::move(taylor);
    s.source = route;
    s.parity = parity;
    s.x_root = x_root;
    s.tail_ratio = fock_tail_ratio(s.taylor);
    if (!(s.tail_ratio <= tail_tolerance)) {
        throw ConvergenceError("Taylor order too small: Fock tail not below tolerance",
                               static_cast<int>(s.taylor.size()));
    }
    return s;
}

void require_order(int order) {
    if (order < 0 || order > kMaxOrder) {
        throw InvalidArgument("Taylor order must lie in [1, 160] (0 selects the default)");
    }
}

}  // namespace

BargmannSeries psi_from_phi2(double x_root, Parity parity, const ModelParams& params, int order,
                             double tail_tolerance) {
    require_order(order);
    const RootData data = prepare(x_root, params);
    const int m = order == 0 ? default_order(data) : order;
    const double g = data.np.g;
    const std::vector<double> poly = shifted_power_series(data.k, g, -1);
    return finish(times_exponential(poly, g, m), SeriesRoute::Phi2, parity, x_root,
                  tail_tolerance);
}

BargmannSeries psi_from_phi1(double x_root, Parity parity, const ModelParams& params, int order,
                             double tail_tolerance) {
    require_order(order);
    const RootData data = prepare(x_root, params);
    const int m = order == 0 ? default_order(data) : order;
    const double g = data.np.g;
    const double delta_p = sign(parity) * data.np.delta;
    std::vector<double> w(data.k.size());
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double d = x_root - static_cast<double>(n);
        if (std::abs(d) <= kPoleExclusionRadius) {
            throw PoleError("phi1 weights are singular on a baseline", x_root,
                            static_cast<double>(n));
        }
        w[n] = data.k[n] * delta_p / d;
    }
    const std::vector<double> poly = shifted_power_series(w, g, 1);
    return finish(times_exponential(poly, -g, m), SeriesRoute::Phi1, parity, x_root,
                  tail_tolerance);
}

std::complex<double> evaluate(const BargmannSeries& series, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (auto it = series.taylor.rbegin(); it != series.taylor.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

ConsistencyReport consistency_check(double x, Parity parity, const ModelParams& params,
                                    const std::vector<std::complex<double>>& z_samples) {
    if (!params.symmetric()) {
        throw InvalidArgument("consistency check needs epsilon = 0");
    }
    const NormalizedParams np = normalize(params);
    if (!(np.g > 0.0)) {
        throw SingularParameterError("consistency check needs g > 0");
    }
    if (z_samples.empty()) {
        throw InvalidArgument("no z samples given");
    }
    double r_max = 0.0;
    for (const auto& z : z_samples) {
        if (!(std::abs(z) < np.g)) {
            throw InvalidArgument("z samples must lie inside |z| < g");
        }
        r_max = std::max(r_max, std::abs(z));
    }
    // Forward K_n g^n decays like 2^-n; the sample factor grows like ((g+|z|)/g)^n.
    const double decay = std::log((np.g + r_max) / (2.0 * np.g));
    const int terms = std::min(
        kMaxDirectTerms, static_cast<int>(std::ceil(std::log(1e-17) / decay)) + 20);
    const CoefficientTable table = k_table_fixed(x, np, 0.0, terms);
    const double delta_p = sign(parity) * np.delta;

    ConsistencyReport report;
    report.terms = terms;
    for (const auto& z : z_samples) {
        const std::complex<double> u = (np.g - z) / np.g;
        const std::complex<double> v = (z + np.g) / np.g;
        CompensatedSum<double> re2, im2, re1, im1;
        std::complex<double> pu = 1.0;
        std::complex<double> pv = 1.0;
        for (int n = 0; n < terms; ++n) {
            const std::complex<double> t2 = table.terms[n] * pu;
            const std::complex<double> t1 = table.terms[n] * delta_p / (x - n) * pv;
            re2 += t2.real();
            im2 += t2.imag();
            re1 += t1.real();
            im1 += t1.imag();
            pu *= u;
            pv *= v;
        }
        const std::complex<double> phi2 =
            std::exp(np.g * z) * std::complex<double>(re2.value(), im2.value());
        const std::complex<double> phi1 =
            std::exp(-np.g * z) * std::complex<double>(re1.value(), im1.value());
        report.max_difference = std::max(report.max_difference, std::abs(phi2 - phi1));
        report.scale = std::max(report.scale, std::abs(phi2));
    }
    return report;
}

std::vector<std::complex<double>> circle_samples(double radius, int n) {
    if (n < 1 || !(radius >= 0.0)) {
        throw InvalidArgument("circle sampling needs n >= 1 and radius >= 0");
    }
    std::vector<std::complex<double>> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        out.push_back(std::polar(radius, 2.0 * std::numbers::pi * k / n));
    }
    return out;
}

FockVector fock_amplitudes(const BargmannSeries& series, const ModelParams& /*params*/) {
    if (!(series.tail_ratio <= 1e-8)) {
        throw NumericError("series tail too large for a normalisable Fock vector");
    }
    // (psi(z), psi(-z)) lives in the sigma_x frame; rotating back with
    // (|up> +- |down>)/sqrt(2) gives up(z) = psi(z) + p psi(-z), down(z) = psi(z) - p psi(-z).
    const int p = sign(series.parity);
    const std::size_t m_count = series.taylor.size();
    FockVector v;
    v.up.resize(m_count);
    v.down.resize(m_count);
    CompensatedSum<double> norm2;
    for (std::size_t m = 0; m < m_count; ++m) {
        const double a = series.taylor[m] * std::exp(0.5 * std::lgamma(m + 1.0));
        const int reflect = (m % 2 == 0) ? p : -p;
        v.up[m] = 0.5 * (1 + reflect) * a;
        v.down[m] = 0.5 * (1 - reflect) * a;
        norm2 += a * a;
    }
    const double norm = std::sqrt(norm2.value());
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NumericError("Fock vector is not normalisable");
    }
    for (std::size_t m = 0; m < m_count; ++m) {
        v.up[m] /= norm;
        v.down[m] /= norm;
    }
    return v;
}

std::vector<double> FockVector::product_basis(int n_tr) const {
    std::vector<double> out(2 * static_cast<std::size_t>(n_tr), 0.0);
    const std::size_t n_max = std::min<std::size_t>(n_tr, up.size());
    for (std::size_t n = 0; n < n_max; ++n) {
        out[2 * n] = up[n];
        out[2 * n + 1] = down[n];
    }
    return out;
}

std::vector<double> FockVector::parity_block(Parity parity, int n_tr) const {
    std::vector<double> out(n_tr, 0.0);
    const int p = sign(parity);
    const std::size_t n_max = std::min<std::size_t>(n_tr, up.size());
    for (std::size_t n = 0; n < n_max; ++n) {
        const bool spin_up = ((n % 2 == 0) ? p : -p) > 0;
        out[n] = spin_up ? up[n] : down[n];
    }
    return out;
}

}  // namespace rabi
