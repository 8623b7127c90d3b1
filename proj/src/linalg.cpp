#include "cocopf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cocopf::linalg {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    return std::sqrt(dot(a, a));
}

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a)
        m = std::max(m, std::abs(v));
    return m;
}

void mat_vec(std::span<const double> a, std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = a.data() + i * n;
        for (std::size_t j = 0; j < n; ++j)
            s += row[j] * x[j];
        out[i] = s;
    }
}

std::vector<double> identity(int n) {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        m[static_cast<std::size_t>(i) * n + i] = 1.0;
    return m;
}

std::vector<double> random_orthogonal(int n, Rng& rng) {
    std::vector<double> q(static_cast<std::size_t>(n) * n);
    // Column j lives at q[i*n + j]. Orthonormalize columns left to right.
    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int attempt = 0; attempt < 16; ++attempt) {
            for (int i = 0; i < n; ++i)
                q[static_cast<std::size_t>(i) * n + j] = rng.normal();
            for (int p = 0; p < j; ++p) {
                double proj = 0.0;
                for (int i = 0; i < n; ++i)
                    proj += q[static_cast<std::size_t>(i) * n + p] * q[static_cast<std::size_t>(i) * n + j];
                for (int i = 0; i < n; ++i)
                    q[static_cast<std::size_t>(i) * n + j] -= proj * q[static_cast<std::size_t>(i) * n + p];
            }
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double v = q[static_cast<std::size_t>(i) * n + j];
                s += v * v;
            }
            norm = std::sqrt(s);
            if (norm > 1e-8)
                break;
        }
        for (int i = 0; i < n; ++i)
            q[static_cast<std::size_t>(i) * n + j] /= norm;
    }
    return q;
}

double orthogonality_error(std::span<const double> a, int n) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int r = 0; r < n; ++r)
                s += a[static_cast<std::size_t>(r) * n + i] * a[static_cast<std::size_t>(r) * n + j];
            worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

bool jacobi_eigen(std::span<const double> a, int n,
                  std::vector<double>& eigvals, std::vector<double>& eigvecs) {
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    std::vector<double> m(a.begin(), a.end());
    for (double v : m)
        if (!std::isfinite(v))
            return false;

    eigvecs = identity(n);
    auto at = [&](std::vector<double>& mat, int r, int c) -> double& {
        return mat[static_cast<std::size_t>(r) * n + c];
    };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                off += at(m, p, q) * at(m, p, q);
        if (off < 1e-24 * nn)
            break;
        if (sweep == 63)
            return false;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(m, p, q);
                if (apq == 0.0)
                    continue;
                const double theta = (at(m, q, q) - at(m, p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int r = 0; r < n; ++r) {
                    const double mrp = at(m, r, p);
                    const double mrq = at(m, r, q);
                    at(m, r, p) = c * mrp - s * mrq;
                    at(m, r, q) = s * mrp + c * mrq;
                }
                for (int r = 0; r < n; ++r) {
                    const double mpr = at(m, p, r);
                    const double mqr = at(m, q, r);
                    at(m, p, r) = c * mpr - s * mqr;
                    at(m, q, r) = s * mpr + c * mqr;
                }
                for (int r = 0; r < n; ++r) {
                    const double vrp = at(eigvecs, r, p);
                    const double vrq = at(eigvecs, r, q);
                    at(eigvecs, r, p) = c * vrp - s * vrq;
                    at(eigvecs, r, q) = s * vrp + c * vrq;
                }
            }
        }
    }

    eigvals.resize(n);
    for (int i = 0; i < n; ++i)
        eigvals[i] = at(m, i, i);

    // Sort ascending, permuting eigenvector columns to match.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return eigvals[x] < eigvals[y]; });
    std::vector<double> vals(n);
    std::vector<double> vecs(nn);
    for (int j = 0; j < n; ++j) {
        vals[j] = eigvals[order[j]];
        for (int i = 0; i < n; ++i)
            vecs[static_cast<std::size_t>(i) * n + j] = eigvecs[static_cast<std::size_t>(i) * n + order[j]];
    }
    eigvals = std::move(vals);
    eigvecs = std::move(vecs);
    for (double v : eigvals)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace cocopf::linalg
