#include "dualmark/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dualmark::linalg {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()));
    }
}

double dot(std::span<const double> x, std::span<const double> y) {
    return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

constexpr double kRotationTolerance = 1e-12;
constexpr int kMaxSweeps = 60;

// Orthogonalizes the columns of a tall matrix in place. Columns are held as
// rows of `cols` (n x m) and the accumulated right rotations as rows of `vt`.
void jacobi_sweeps(Matrix& cols, Matrix& vt) {
    const std::size_t n = cols.rows();
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                auto ap = cols.row(p);
                auto aq = cols.row(q);
                const double alpha = dot(ap, ap);
                const double beta = dot(aq, aq);
                const double gamma = dot(ap, aq);
                if (alpha == 0.0 || beta == 0.0) continue;
                if (std::abs(gamma) <= kRotationTolerance * std::sqrt(alpha * beta)) continue;

                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
                const double c = 1.0 / std::hypot(1.0, t);
                const double s = c * t;
                for (std::size_t i = 0; i < ap.size(); ++i) {
                    const double x = ap[i];
                    const double y = aq[i];
                    ap[i] = c * x - s * y;
                    aq[i] = s * x + c * y;
                }
                auto vp = vt.row(p);
                auto vq = vt.row(q);
                for (std::size_t i = 0; i < vp.size(); ++i) {
                    const double x = vp[i];
                    const double y = vq[i];
                    vp[i] = c * x - s * y;
                    vq[i] = s * x + c * y;
                }
                rotated = true;
            }
        }
        if (!rotated) return;
    }
}

// Fills u column `col` with a unit vector orthogonal to the columns already
// marked in `filled`, trying standard basis vectors in order.
void complete_column(Matrix& u, std::size_t col, const std::vector<bool>& filled) {
    const std::size_t m = u.rows();
    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::fill(w.begin(), w.end(), 0.0);
        w[k] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < u.cols(); ++j) {
                if (!filled[j]) continue;
                double proj = 0.0;
                for (std::size_t i = 0; i < m; ++i) proj += u(i, j) * w[i];
                for (std::size_t i = 0; i < m; ++i) w[i] -= proj * u(i, j);
            }
        }
        const double norm = std::sqrt(dot(w, w));
        if (norm > 0.5) {
            for (std::size_t i = 0; i < m; ++i) u(i, col) = w[i] / norm;
            return;
        }
    }
    throw std::logic_error("svd: failed to complete orthonormal basis");
}

// Thin SVD of a matrix with rows >= cols, before sign normalization.
SvdFactors tall_svd(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    Matrix cols = transpose(a);
    Matrix vt = Matrix::identity(n);
    jacobi_sweeps(cols, vt);

    std::vector<double> norms(n);
    for (std::size_t j = 0; j < n; ++j) norms[j] = std::sqrt(dot(cols.row(j), cols.row(j)));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SvdFactors f{Matrix(m, n), std::vector<double>(n), Matrix(n, n)};
    const double negligible = norms[order[0]] * static_cast<double>(m) *
                              std::numeric_limits<double>::epsilon();
    std::vector<bool> filled(n, false);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        f.s[k] = norms[j];
        for (std::size_t i = 0; i < n; ++i) f.v(i, k) = vt(j, i);
        if (norms[j] > negligible && norms[j] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) f.u(i, k) = cols(j, i) / norms[j];
            filled[k] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        if (!filled[k]) {
            complete_column(f.u, k, filled);
            filled[k] = true;
        }
    }
    return f;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
    data_.assign(rows * cols, 0.0);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("Matrix: dimensions must be positive");
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: data length " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    if (!std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); })) {
        throw std::invalid_argument("Matrix: entries must be finite");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out = a;
    auto o = out.data();
    auto y = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += y[i];
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix out = a;
    auto o = out.data();
    auto y = b.data();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] -= y[i];
    return out;
}

Matrix scale(const Matrix& a, double factor) {
    Matrix out = a;
    for (double& x : out.data()) x *= factor;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("multiply: inner dimensions differ (" +
                                    std::to_string(a.cols()) + " vs " +
                                    std::to_string(b.rows()) + ")");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto orow = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto brow = b.row(k);
            for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    for (double x : a.data()) sum += x * x;
    return std::sqrt(sum);
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    for (double x : a.data()) best = std::max(best, std::abs(x));
    return best;
}

SvdFactors svd(const Matrix& a) {
    SvdFactors f = [&] {
        if (a.rows() >= a.cols()) return tall_svd(a);
        SvdFactors t = tall_svd(transpose(a));
        return SvdFactors{std::move(t.v), std::move(t.s), std::move(t.u)};
    }();

    for (std::size_t k = 0; k < f.s.size(); ++k) {
        std::size_t arg = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < f.u.rows(); ++i) {
            if (std::abs(f.u(i, k)) > best) {
                best = std::abs(f.u(i, k));
                arg = i;
            }
        }
        if (f.u(arg, k) < 0.0) {
            for (std::size_t i = 0; i < f.u.rows(); ++i) f.u(i, k) = -f.u(i, k);
            for (std::size_t i = 0; i < f.v.rows(); ++i) f.v(i, k) = -f.v(i, k);
        }
    }
    return f;
}

std::vector<double> singular_values(const Matrix& a) { return svd(a).s; }

Matrix reconstruct(const SvdFactors& f) {
    const std::size_t r = f.s.size();
    if (r == 0 || f.u.cols() != r || f.v.cols() != r) {
        throw std::invalid_argument("reconstruct: factor shapes inconsistent with " +
                                    std::to_string(r) + " singular values");
    }
    Matrix us = f.u;
    for (std::size_t i = 0; i < us.rows(); ++i)
        for (std::size_t k = 0; k < r; ++k) us(i, k) *= f.s[k];
    return multiply(us, transpose(f.v));
}

double orthogonality_defect(const Matrix& q) {
    double worst = 0.0;
    for (std::size_t i = 0; i < q.cols(); ++i) {
        for (std::size_t j = i; j < q.cols(); ++j) {
            double d = 0.0;
            for (std::size_t r = 0; r < q.rows(); ++r) d += q(r, i) * q(r, j);
            if (i == j) d -= 1.0;
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

}  // namespace dualmark::linalg
