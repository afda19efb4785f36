#include "rabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rabi/errors.hpp"

namespace rabi {
namespace {

constexpr int kMaxQlSweepsPerValue = 60;

void require_truncation(int n_tr) {
    if (n_tr < 2) {
        throw InvalidArgument("truncation must be at least 2");
    }
    if (n_tr > kMaxTruncation) {
        throw InvalidArgument("truncation " + std::to_string(n_tr) + " exceeds the cap of " +
                              std::to_string(kMaxTruncation));
    }
}

int full_index(int spin, int n) { return 2 * n + (spin > 0 ? 0 : 1); }

// Householder reduction of the symmetric matrix held in v to tridiagonal form.
// On return d holds the diagonal, e the subdiagonal in e[1..n-1], and v the
// accumulated orthogonal transformation.
void tred2(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(v.rows());
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
    }
    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (int k = 0; k < i; ++k) {
            scale += std::abs(d[k]);
        }
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) {
                e[j] = 0.0;
            }
            for (int j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) {
                e[j] -= hh * d[j];
            }
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) {
                    v(k, j) -= (f * e[k] + g * d[k]);
                }
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (int i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) {
                d[k] = v(k, i + 1) / h;
            }
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) {
                    g += v(k, i + 1) * v(k, j);
                }
                for (int k = 0; k <= i; ++k) {
                    v(k, j) -= g * d[k];
                }
            }
        }
        for (int k = 0; k <= i; ++k) {
            v(k, i + 1) = 0.0;
        }
    }
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit QL with Wilkinson-type shifts. e uses the tred2 layout (e[i] couples
// rows i-1 and i). Rotations are applied to v when it is non-empty.
int tql2(std::vector<double>& d, std::vector<double>& e, DenseMatrix* v) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    double f = 0.0;
    double tst1 = 0.0;
    int total = 0;
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n) {
            if (std::abs(e[m]) <= eps * tst1) {
                break;
            }
            ++m;
        }
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > kMaxQlSweepsPerValue) {
                    throw ConvergenceError("QL iteration did not converge", total + iter);
                }
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                double c = 1.0;
                double c2 = c;
                double c3 = c;
                const double el1 = e[l + 1];
                double s = 0.0;
                double s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (v != nullptr) {
                        for (int k = 0; k < n; ++k) {
                            h = (*v)(k, i + 1);
                            (*v)(k, i + 1) = s * (*v)(k, i) + c * h;
                            (*v)(k, i) = c * (*v)(k, i) - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
            total += iter;
        }
        d[l] += f;
        e[l] = 0.0;
    }
    return total;
}

EigenSystem sorted(std::vector<double> d, const DenseMatrix* v, int iterations) {
    const std::size_t n = d.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    EigenSystem out;
    out.iterations = iterations;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
    }
    if (v != nullptr) {
        out.vectors = DenseMatrix(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                out.vectors(i, j) = (*v)(i, order[j]);
            }
        }
    }
    return out;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = (*this)(i, j);
    }
    return out;
}

std::vector<double> DenseMatrix::apply(const std::vector<double>& v) const {
    if (v.size() != cols_) {
        throw InvalidArgument("matrix-vector size mismatch");
    }
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            acc += (*this)(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

double DenseMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            row += std::abs((*this)(i, j));
        }
        best = std::max(best, row);
    }
    return best;
}

std::string_view to_string(OracleModel model) noexcept {
    switch (model) {
        case OracleModel::Rabi: return "rabi";
        case OracleModel::RabiEps: return "rabi-eps";
        case OracleModel::ParityBlockPlus: return "parity-plus";
        case OracleModel::ParityBlockMinus: return "parity-minus";
        case OracleModel::JaynesCummings: return "jc";
    }
    return "unknown";
}

TruncatedHamiltonian build(OracleModel model, const ModelParams& params, int n_tr) {
    validate(params);
    require_truncation(n_tr);
    const double w = params.omega;
    const double g = params.g;
    const double delta = params.delta;

    TruncatedHamiltonian h;
    h.model = model;

    if (model == OracleModel::ParityBlockPlus || model == OracleModel::ParityBlockMinus) {
        if (!params.symmetric()) {
            throw InvalidArgument("parity blocks require epsilon = 0");
        }
        const int p = model == OracleModel::ParityBlockPlus ? 1 : -1;
        h.dimension = n_tr;
        h.entries = DenseMatrix(n_tr, n_tr);
        for (int n = 0; n < n_tr; ++n) {
            const int spin = (n % 2 == 0) ? p : -p;
            h.basis.push_back({spin, n});
            h.entries(n, n) = w * n + delta * spin;
            if (n + 1 < n_tr) {
                h.entries(n, n + 1) = h.entries(n + 1, n) = g * std::sqrt(n + 1.0);
            }
        }
        return h;
    }

    if (model == OracleModel::Rabi && !params.symmetric()) {
        throw InvalidArgument("the symmetric model requires epsilon = 0; use RabiEps");
    }
    const int dim = 2 * n_tr;
    if (dim > kMaxDenseDimension) {
        throw InvalidArgument("dense dimension " + std::to_string(dim) + " exceeds the cap");
    }
    h.dimension = dim;
    h.entries = DenseMatrix(dim, dim);
    for (int n = 0; n < n_tr; ++n) {
        h.basis.push_back({1, n});
        h.basis.push_back({-1, n});
    }
    for (int n = 0; n < n_tr; ++n) {
        const int up = full_index(1, n);
        const int dn = full_index(-1, n);
        h.entries(up, up) = w * n + delta;
        h.entries(dn, dn) = w * n - delta;
        if (model == OracleModel::RabiEps) {
            h.entries(up, dn) = h.entries(dn, up) = params.epsilon;
        }
        if (n + 1 < n_tr) {
            const double c = g * std::sqrt(n + 1.0);
            const int dn1 = full_index(-1, n + 1);
            h.entries(up, dn1) = h.entries(dn1, up) = c;
            if (model != OracleModel::JaynesCummings) {
                const int up1 = full_index(1, n + 1);
                h.entries(dn, up1) = h.entries(up1, dn) = c;
            }
        }
    }
    return h;
}

std::pair<TruncatedHamiltonian, TruncatedHamiltonian> parity_blocks(const ModelParams& params,
                                                                    int n_tr) {
    if (!params.symmetric()) {
        throw InvalidArgument("parity blocks require epsilon = 0");
    }
    return {build(OracleModel::ParityBlockPlus, params, n_tr),
            build(OracleModel::ParityBlockMinus, params, n_tr)};
}

EigenSystem eigensolve(const DenseMatrix& h, bool want_vectors) {
    const std::size_t n = h.rows();
    if (n == 0 || h.cols() != n) {
        throw InvalidArgument("eigensolve needs a non-empty square matrix");
    }
    const double tol = 1e-12 * std::max(1.0, h.norm_inf());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (!std::isfinite(h(i, j)) || std::abs(h(i, j) - h(j, i)) > tol) {
                throw InvalidArgument("eigensolve needs a finite symmetric matrix");
            }
        }
    }
    DenseMatrix v = h;
    std::vector<double> d(n);
    std::vector<double> e(n);
    tred2(v, d, e);
    const int iterations = tql2(d, e, want_vectors ? &v : nullptr);
    return sorted(std::move(d), want_vectors ? &v : nullptr, iterations);
}

EigenSystem eigensolve(const TruncatedHamiltonian& h, bool want_vectors) {
    const bool tridiagonal =
        h.model == OracleModel::ParityBlockPlus || h.model == OracleModel::ParityBlockMinus;
    if (!tridiagonal) {
        return eigensolve(h.entries, want_vectors);
    }
    std::vector<double> diag(h.dimension);
    std::vector<double> off(h.dimension > 0 ? h.dimension - 1 : 0);
    for (int i = 0; i < h.dimension; ++i) {
        diag[i] = h.entries(i, i);
        if (i + 1 < h.dimension) {
            off[i] = h.entries(i + 1, i);
        }
    }
    return eigensolve_tridiagonal(std::move(diag), std::move(off), want_vectors);
}

EigenSystem eigensolve_tridiagonal(std::vector<double> diagonal, std::vector<double> off_diagonal,
                                   bool want_vectors) {
    const std::size_t n = diagonal.size();
    if (n == 0 || off_diagonal.size() + 1 != n) {
        throw InvalidArgument("tridiagonal input needs n diagonal and n-1 off-diagonal entries");
    }
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        e[i] = off_diagonal[i - 1];
    }
    DenseMatrix v;
    if (want_vectors) {
        v = DenseMatrix::identity(n);
    }
    const int iterations = tql2(diagonal, e, want_vectors ? &v : nullptr);
    return sorted(std::move(diagonal), want_vectors ? &v : nullptr, iterations);
}

std::vector<JcLevel> jc_spectrum(const ModelParams& params, int c_max) {
    validate(params);
    if (c_max < 0) {
        throw InvalidArgument("c_max must be non-negative");
    }
    const double w = params.omega;
    std::vector<JcLevel> out;
    out.push_back({0, 0, -params.delta});
    for (int c = 1; c <= c_max; ++c) {
        const int n = c - 1;
        const double centre = w * (n + 0.5);
        const double detuning = 0.5 * w - params.delta;
        const double split = std::sqrt(detuning * detuning + params.g * params.g * c);
        out.push_back({c, -1, centre - split});
        out.push_back({c, 1, centre + split});
    }
    return out;
}

std::vector<double> oracle_levels(OracleModel model, const ModelParams& params, int n_tr,
                                  int count) {
    if (count < 1) {
        throw InvalidArgument("level count must be positive");
    }
    std::vector<double> levels;
    if (model == OracleModel::Rabi) {
        // The full matrix is the direct sum of the two tridiagonal parity blocks.
        auto [plus, minus] = parity_blocks(params, n_tr);
        levels = eigensolve(plus, false).values;
        const auto odd = eigensolve(minus, false).values;
        levels.insert(levels.end(), odd.begin(), odd.end());
        std::sort(levels.begin(), levels.end());
    } else {
        levels = eigensolve(build(model, params, n_tr), false).values;
    }
    if (static_cast<int>(levels.size()) < count) {
        throw InvalidArgument("truncation too small for the requested level count");
    }
    levels.resize(count);
    return levels;
}

ConvergedSpectrum converged_spectrum(OracleModel model, const ModelParams& params, int count,
                                     double tol) {
    if (count < 1) {
        throw InvalidArgument("level count must be positive");
    }
    if (!(tol > 0.0)) {
        throw InvalidArgument("tolerance must be positive");
    }
    int previous_n = 100;
    std::vector<double> previous = oracle_levels(model, params, previous_n, count);
    int n_tr = 200;
    int tried = 1;
    while (n_tr <= kMaxTruncation) {
        std::vector<double> current = oracle_levels(model, params, n_tr, count);
        ++tried;
        double change = 0.0;
        for (int i = 0; i < count; ++i) {
            change = std::max(change, std::abs(current[i] - previous[i]));
        }
        if (change < tol) {
            return {std::move(current), previous_n, n_tr, change};
        }
        previous = std::move(current);
        previous_n = n_tr;
        n_tr += 50;
    }
    throw ConvergenceError("oracle levels not converged below the truncation cap", tried);
}

}  // namespace rabi
