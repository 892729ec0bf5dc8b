#include "hebgha/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hebgha {

AutocorrelationMatrix autocorrelation(const std::vector<Vector>& inputs) {
    if (inputs.empty()) {
        throw EmptyDatasetError("autocorrelation: empty input sequence");
    }
    const std::size_t n = inputs.front().size();
    if (n == 0) {
        throw ValueError("autocorrelation: zero-dimensional inputs");
    }
    for (const Vector& x : inputs) {
        if (x.size() != n) {
            throw ShapeError("autocorrelation: inputs have unequal lengths");
        }
    }
    Matrix q(n, n, 0.0);
    for (const Vector& x : inputs) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                q(i, j) += x[i] * x[j];
            }
        }
    }
    const double inv_t = 1.0 / static_cast<double>(inputs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            q(i, j) *= inv_t;
            q(j, i) = q(i, j);
        }
    }
    return AutocorrelationMatrix{n, std::move(q)};
}

namespace {

double offdiagonal_mass(const Matrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                sum += a(i, j) * a(i, j);
            }
        }
    }
    return std::sqrt(sum);
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (const double v : a.data()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

void fix_sign(std::span<double> row) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (std::abs(row[j]) > best) {
            best = std::abs(row[j]);
            arg = j;
        }
    }
    if (row[arg] < 0.0) {
        for (double& v : row) {
            v = -v;
        }
    }
}

}  // namespace

EigenBasis jacobi_eigendecompose(const Matrix& symmetric) {
    if (symmetric.rows() != symmetric.cols()) {
        throw ShapeError("jacobi_eigendecompose: matrix must be square");
    }
    const std::size_t n = symmetric.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(symmetric(i, j) - symmetric(j, i)) > 1e-12 * (1.0 + std::abs(symmetric(i, j)))) {
                throw ValueError("jacobi_eigendecompose: matrix is not symmetric");
            }
        }
    }

    Matrix a = symmetric;
    Matrix v = Matrix::identity(n);  // columns accumulate the rotations
    const double threshold = 1e-12 * frobenius_norm(symmetric);

    bool converged = false;
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiagonal_mass(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p);
                const double aqq = a(q, q);
                a(p, p) = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                a(q, q) = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) {
                        continue;
                    }
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(p, k) = a(k, p);
                    a(k, q) = s * akp + c * akq;
                    a(q, k) = a(k, q);
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && offdiagonal_mass(a) > threshold) {
        throw NumericError("jacobi_eigendecompose: no convergence in 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t lhs, std::size_t rhs) { return a(lhs, lhs) > a(rhs, rhs); });

    EigenBasis basis;
    basis.eigenvalues.resize(n);
    basis.eigenvectors = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        basis.eigenvalues[i] = a(src, src);
        for (std::size_t k = 0; k < n; ++k) {
            basis.eigenvectors(i, k) = v(k, src);
        }
        fix_sign(basis.eigenvectors.row(i));
    }
    return basis;
}

EigenBasis jacobi_eigendecompose(const AutocorrelationMatrix& q) {
    return jacobi_eigendecompose(q.q);
}

RowAlignment row_alignment(const WeightMatrix& cw, const EigenBasis& basis) {
    if (cw.n_inputs != basis.eigenvectors.cols()) {
        throw ShapeError("row_alignment: dimension mismatch with basis");
    }
    if (cw.m_outputs > basis.eigenvectors.rows()) {
        throw ShapeError("row_alignment: more rows than oracle eigenvectors");
    }
    RowAlignment out;
    out.values.resize(cw.m_outputs);
    out.degenerate.assign(cw.m_outputs, 0);
    for (std::size_t i = 0; i < cw.m_outputs; ++i) {
        const auto ci = cw.c.row(i);
        const auto vi = basis.eigenvectors.row(i);
        const double nc = std::sqrt(dot(ci, ci));
        const double nv = std::sqrt(dot(vi, vi));
        if (nc == 0.0 || nv == 0.0) {
            out.values[i] = 0.0;
            out.degenerate[i] = 1;
            continue;
        }
        out.values[i] = std::abs(dot(ci, vi)) / (nc * nv);
    }
    return out;
}

namespace {

// ||x - C^T C x||^2 and ||x||^2 for one sample.
std::pair<double, double> reconstruction_residual(const WeightMatrix& cw, const Vector& x) {
    const std::size_t m = cw.m_outputs;
    const std::size_t n = cw.n_inputs;
    Vector y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = dot(cw.c.row(i), x);
    }
    double err = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double xhat = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            xhat += cw.c(i, j) * y[i];
        }
        const double d = x[j] - xhat;
        err += d * d;
        norm += x[j] * x[j];
    }
    return {err, norm};
}

}  // namespace

double reconstruction_error(const WeightMatrix& cw, const std::vector<Vector>& inputs) {
    if (inputs.empty()) {
        throw EmptyDatasetError("reconstruction_error: empty input sequence");
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (const Vector& x : inputs) {
        if (x.size() != cw.n_inputs) {
            throw ShapeError("reconstruction_error: input length does not match N");
        }
        const auto [err, norm] = reconstruction_residual(cw, x);
        if (norm == 0.0) {
            continue;
        }
        sum += err / norm;
        ++used;
    }
    if (used == 0) {
        throw UndefinedMetricError("reconstruction_error: all samples have zero norm");
    }
    return 100.0 * sum / static_cast<double>(used);
}

Vector component_variances(const WeightMatrix& cw, const std::vector<Vector>& inputs) {
    if (inputs.empty()) {
        throw EmptyDatasetError("component_variances: empty input sequence");
    }
    Vector sums(cw.m_outputs, 0.0);
    for (const Vector& x : inputs) {
        if (x.size() != cw.n_inputs) {
            throw ShapeError("component_variances: input length does not match N");
        }
        for (std::size_t i = 0; i < cw.m_outputs; ++i) {
            const double y = dot(cw.c.row(i), x);
            sums[i] += y * y;
        }
    }
    for (double& s : sums) {
        s /= static_cast<double>(inputs.size());
    }
    return sums;
}

}  // namespace hebgha
