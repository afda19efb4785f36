#pragma once

// Straight re-evaluation of the series formulas in 50-digit decimal
// arithmetic. Nothing here shares code with the library.

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <vector>

namespace rabi::testing {

using mp = boost::multiprecision::cpp_dec_float_50;

inline mp mp_f(int n, const mp& x, const mp& g, const mp& delta, const mp& shift = 0) {
    const mp d = x - n + shift;
    return 2 * g + (mp(n) - x + shift + delta * delta / d) / (2 * g);
}

inline std::vector<mp> mp_k(const mp& x, const mp& g, const mp& delta, int count,
                            const mp& shift = 0) {
    std::vector<mp> k(count);
    k[0] = 1;
    if (count > 1) {
        k[1] = mp_f(0, x, g, delta, shift);
    }
    for (int n = 2; n < count; ++n) {
        k[n] = (mp_f(n - 1, x, g, delta, shift) * k[n - 1] - k[n - 2]) / n;
    }
    return k;
}

// parity = +1 or -1
inline mp mp_G(int parity, const mp& x, const mp& g, const mp& delta, int count = 400) {
    const std::vector<mp> k = mp_k(x, g, delta, count);
    mp sum = 0;
    mp gp = 1;
    for (int n = 0; n < count; ++n) {
        sum += k[n] * (1 - parity * delta / (x - n)) * gp;
        gp *= g;
    }
    return sum;
}

// branch = +1 or -1; the shift is branch * eps.
inline mp mp_R(int branch, const mp& x, const mp& g, const mp& delta, const mp& eps,
               int count = 400) {
    const std::vector<mp> k = mp_k(x, g, delta, count, branch * eps);
    mp sum = 0;
    mp gp = 1;
    for (int n = 0; n < count; ++n) {
        sum += k[n] * gp;
        gp *= g;
    }
    return sum;
}

inline mp mp_Rbar(int branch, const mp& x, const mp& g, const mp& delta, const mp& eps,
                  int count = 400) {
    const std::vector<mp> k = mp_k(x, g, delta, count, branch * eps);
    mp sum = 0;
    mp gp = 1;
    for (int n = 0; n < count; ++n) {
        sum += k[n] * gp / (x - n + branch * eps);
        gp *= g;
    }
    return sum;
}

inline mp mp_G_eps(const mp& x, const mp& g, const mp& delta, const mp& eps, int count = 400) {
    return delta * delta * mp_Rbar(1, x, g, delta, eps, count) * mp_Rbar(-1, x, g, delta, eps, count) -
           mp_R(1, x, g, delta, eps, count) * mp_R(-1, x, g, delta, eps, count);
}

// (x - n) G(x) at x = n +- h, averaged; the odd part of the approach cancels.
inline mp mp_residue(int parity, int n, const mp& g, const mp& delta) {
    const mp h("1e-22");
    const mp a = h * mp_G(parity, mp(n) + h, g, delta);
    const mp b = -h * mp_G(parity, mp(n) - h, g, delta);
    return (a + b) / 2;
}

// V_1 of the minimal solution by backward recursion from depth n_start.
inline mp mp_minimal_v1(const mp& x, const mp& g, const mp& delta, int n_start = 400) {
    mp v = 0;
    for (int n = n_start; n >= 1; --n) {
        v = 1 / (mp_f(n, x, g, delta) - (n + 1) * v);
    }
    return v;
}

}  // namespace rabi::testing
