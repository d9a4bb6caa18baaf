#pragma once
// Symmetric eigensolvers: dense (Householder + implicit QL) and a
// thick-restart Lanczos for extreme eigenvalues of an implicit operator.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lieexp::eigen {

/// All eigenvalues of the dense symmetric n×n matrix `a` (row-major,
/// destroyed), sorted descending.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n);

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi.
/// Returns eigenvalues ascending; `vectors` receives columns (row-major n×n).
std::vector<double> jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& vectors);

/// y = Op(x)
using LinearOp = std::function<void(std::span<const double> x, std::span<double> y)>;

struct LanczosOptions {
    double tol = 1e-7;             // residual ‖Av − θv‖ for both extremes
    std::size_t basis = 40;        // Krylov basis size between restarts
    std::size_t keep_per_end = 8;  // Ritz vectors kept from each end on restart
    std::size_t max_restarts = 5000;
    std::uint64_t seed = 12345;
};

struct LanczosResult {
    double largest = 0, smallest = 0;
    double residual_largest = 0, residual_smallest = 0;
    std::size_t matvecs = 0, restarts = 0;
    bool converged = false;
};

/// Largest and smallest eigenvalue of the symmetric operator restricted to
/// the orthogonal complement of `deflate`. Throws NonConvergence when
/// max_restarts is reached.
LanczosResult lanczos_extremes(const LinearOp& op, std::size_t n, const std::vector<std::vector<double>>& deflate,
                               const LanczosOptions& opts = {});

}  // namespace lieexp::eigen
