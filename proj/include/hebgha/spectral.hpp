#pragma once

#include <cstdint>
#include <vector>

#include "hebgha/core.hpp"
#include "hebgha/learning.hpp"

namespace hebgha {

/// Sample autocorrelation matrix Q = (1/T) sum x x^T. Exactly symmetric:
/// only the lower triangle is accumulated, then mirrored.
struct AutocorrelationMatrix {
    std::size_t n = 0;
    Matrix q;
};

/// Eigenpairs sorted by decreasing eigenvalue; row i of eigenvectors is
/// the unit eigenvector for eigenvalues[i]. Sign convention: the
/// largest-magnitude component of each eigenvector is positive (ties
/// resolved toward the first such index).
struct EigenBasis {
    Vector eigenvalues;
    Matrix eigenvectors;
};

AutocorrelationMatrix autocorrelation(const std::vector<Vector>& inputs);

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops
/// below 1e-12 times the Frobenius norm of the input, at most 100 sweeps.
EigenBasis jacobi_eigendecompose(const Matrix& symmetric);
EigenBasis jacobi_eigendecompose(const AutocorrelationMatrix& q);

/// |cos angle| between row i of C and oracle eigenvector i. A zero row
/// reports alignment 0 and sets its degenerate flag.
struct RowAlignment {
    Vector values;
    std::vector<std::uint8_t> degenerate;
};

RowAlignment row_alignment(const WeightMatrix& cw, const EigenBasis& basis);

/// 100 * mean over samples of ||x - C^T C x||^2 / ||x||^2, skipping
/// zero-norm samples. This is the project's declared definition of
/// "error rate".
double reconstruction_error(const WeightMatrix& cw, const std::vector<Vector>& inputs);

/// Per-output second moment of y_i = c_i . x over the inputs (mean not
/// removed, matching the autocorrelation convention for centered data).
Vector component_variances(const WeightMatrix& cw, const std::vector<Vector>& inputs);

}  // namespace hebgha
