#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

/// Row-major dense real matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::vector<double> column(std::size_t j) const;
    std::vector<double> apply(const std::vector<double>& v) const;
    // Largest absolute row sum.
    double norm_inf() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

enum class OracleModel { Rabi, RabiEps, ParityBlockPlus, ParityBlockMinus, JaynesCummings };
std::string_view to_string(OracleModel model) noexcept;

/// |spin, n> with spin = +1 for up, -1 for down (sigma_z eigenbasis).
struct BasisLabel {
    int spin = 1;
    int n = 0;
};

inline constexpr int kMaxTruncation = 2000;
inline constexpr int kMaxDenseDimension = 4096;

struct TruncatedHamiltonian {
    OracleModel model = OracleModel::Rabi;
    int dimension = 0;
    DenseMatrix entries;  // user energy units
    std::vector<BasisLabel> basis;
};

// Full models use basis index 2n + (spin == up ? 0 : 1); parity blocks use
// index n with the spin fixed by the block.
TruncatedHamiltonian build(OracleModel model, const ModelParams& params, int n_tr);

// (even, odd) blocks of H_R for the parity operator sigma_z (-1)^(a^dagger a).
std::pair<TruncatedHamiltonian, TruncatedHamiltonian> parity_blocks(const ModelParams& params,
                                                                    int n_tr);

struct EigenSystem {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // column j belongs to values[j]; empty if not requested
    int iterations = 0;
};

// Householder tridiagonalisation followed by implicit-shift QL.
EigenSystem eigensolve(const DenseMatrix& h, bool want_vectors = true);
EigenSystem eigensolve(const TruncatedHamiltonian& h, bool want_vectors = true);
// Implicit QL on a symmetric tridiagonal matrix given by its diagonal and
// its n - 1 off-diagonal entries.
EigenSystem eigensolve_tridiagonal(std::vector<double> diagonal, std::vector<double> off_diagonal,
                                   bool want_vectors = false);

/// Closed-form Jaynes-Cummings level. Sector c >= 1 holds the 2x2 block over
/// {|up, c-1>, |down, c>}; rung is -1 (lower) or +1 (upper), and 0 for c = 0.
struct JcLevel {
    int c = 0;
    int rung = 0;
    double energy = 0.0;
};

std::vector<JcLevel> jc_spectrum(const ModelParams& params, int c_max);

struct ConvergedSpectrum {
    std::vector<double> levels;  // from the largest truncation tried
    int n_tr = 0;                // smallest truncation already within tol of the next one
    int n_tr_checked = 0;        // truncation that certified it
    double max_change = 0.0;
};

// Truncations 100, 200, 250, 300, ... up to kMaxTruncation.
ConvergedSpectrum converged_spectrum(OracleModel model, const ModelParams& params, int count,
                                     double tol = 1e-10);

// Lowest `count` eigenvalues at a fixed truncation.
std::vector<double> oracle_levels(OracleModel model, const ModelParams& params, int n_tr,
                                  int count);

}  // namespace rabi
