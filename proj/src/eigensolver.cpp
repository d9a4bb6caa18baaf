#include "lieexp/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lieexp/error.hpp"

namespace lieexp::eigen {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Implicit QL with Wilkinson shifts on the tridiagonal (d, e), e[i] = T(i, i+1).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw InternalError("tridiagonal QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    const double f = s * e[i], b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

std::vector<double> symmetric_eigenvalues(std::vector<double> a, std::size_t n) {
    if (a.size() != n * n) throw InvalidArgument("matrix size does not match n");
    std::vector<double> d(n), e(n, 0.0), v(n), p(n);
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        double xnorm = 0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = A(k + 1 + i, k);
            xnorm += v[i] * v[i];
        }
        xnorm = std::sqrt(xnorm);
        d[k] = A(k, k);
        if (xnorm == 0.0) {
            e[k] = 0.0;
            continue;
        }
        const double alpha = v[0] > 0 ? -xnorm : xnorm;
        e[k] = alpha;
        v[0] -= alpha;
        const double vn = norm2({v.data(), len});
        if (vn == 0.0) continue;
        for (std::size_t i = 0; i < len; ++i) v[i] /= vn;
        // A22 ← H A22 H with H = I − 2vvᵀ: A22 −= 2(v wᵀ + w vᵀ), w = A22 v − (vᵀA22 v) v
        for (std::size_t i = 0; i < len; ++i) {
            const double* row = &A(k + 1 + i, k + 1);
            double s = 0;
            for (std::size_t j = 0; j < len; ++j) s += row[j] * v[j];
            p[i] = s;
        }
        const double c = dot({v.data(), len}, {p.data(), len});
        for (std::size_t i = 0; i < len; ++i) p[i] -= c * v[i];
        for (std::size_t i = 0; i < len; ++i) {
            double* row = &A(k + 1 + i, k + 1);
            const double vi = v[i], pi = p[i];
            for (std::size_t j = 0; j < len; ++j) row[j] -= 2.0 * (vi * p[j] + pi * v[j]);
        }
    }
    if (n >= 2) {
        d[n - 2] = A(n - 2, n - 2);
        e[n - 2] = A(n - 1, n - 2);
    }
    if (n >= 1) d[n - 1] = A(n - 1, n - 1);
    tridiagonal_ql(d, e);
    std::sort(d.rbegin(), d.rend());
    return d;
}

std::vector<double> jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& vectors) {
    vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
    auto A = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    double scale = 0;
    for (double x : a) scale += x * x;
    scale = std::sqrt(scale);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        if (std::sqrt(off) <= 1e-15 * std::max(scale, 1e-300)) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors[k * n + p], vkq = vectors[k * n + q];
                    vectors[k * n + p] = c * vkp - s * vkq;
                    vectors[k * n + q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return A(x, x) < A(y, y); });
    std::vector<double> vals(n), vecs(n * n);
    for (std::size_t c = 0; c < n; ++c) {
        vals[c] = A(order[c], order[c]);
        for (std::size_t r = 0; r < n; ++r) vecs[r * n + c] = vectors[r * n + order[c]];
    }
    vectors = std::move(vecs);
    return vals;
}

LanczosResult lanczos_extremes(const LinearOp& op, std::size_t n, const std::vector<std::vector<double>>& deflate,
                               const LanczosOptions& opts) {
    // orthonormal deflation basis
    std::vector<std::vector<double>> Q;
    for (const auto& d : deflate) {
        if (d.size() != n) throw InvalidArgument("deflation vector has wrong length");
        std::vector<double> q = d;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : Q) axpy(-dot(b, q), b, q);
        const double nq = norm2(q);
        if (nq < 1e-10 * std::max(1.0, norm2(d))) continue;
        for (auto& x : q) x /= nq;
        Q.push_back(std::move(q));
    }
    if (Q.size() >= n) throw InvalidArgument("deflation space is the whole space");
    auto project = [&](std::span<double> x) {
        for (const auto& b : Q) axpy(-dot(b, x), b, x);
    };

    const std::size_t m = std::min(opts.basis, n - Q.size());
    const std::size_t keep = std::min(opts.keep_per_end, m > 2 ? (m - 1) / 2 : std::size_t{0});
    std::vector<std::vector<double>> V(m + 1, std::vector<double>(n));
    std::vector<double> T(m * m, 0.0), Y, w(n), h(m + 1);

    std::mt19937_64 rng(opts.seed);
    for (auto& x : V[0]) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
    project(V[0]);
    project(V[0]);
    {
        const double nv = norm2(V[0]);
        for (auto& x : V[0]) x /= nv;
    }

    LanczosResult res;
    std::size_t nk = 0;
    for (std::size_t restart = 0;; ++restart) {
        std::size_t meff = m;
        double beta = 0;
        bool breakdown = false;
        for (std::size_t j = nk; j < m; ++j) {
            op(V[j], w);
            ++res.matvecs;
            project(w);
            std::fill(h.begin(), h.end(), 0.0);
            for (int pass = 0; pass < 2; ++pass)
                for (std::size_t i = 0; i <= j; ++i) {
                    const double c = dot(V[i], w);
                    h[i] += c;
                    axpy(-c, V[i], w);
                }
            project(w);
            for (std::size_t i = 0; i <= j; ++i) T[i * m + j] = T[j * m + i] = h[i];
            beta = norm2(w);
            if (beta < 1e-12) {
                meff = j + 1;
                breakdown = true;
                break;
            }
            for (std::size_t k = 0; k < n; ++k) V[j + 1][k] = w[k] / beta;
        }

        std::vector<double> Tm(meff * meff);
        for (std::size_t i = 0; i < meff; ++i)
            for (std::size_t j = 0; j < meff; ++j) Tm[i * meff + j] = T[i * m + j];
        const auto theta = jacobi_eigen(Tm, meff, Y);
        auto resid = [&](std::size_t c) { return breakdown ? 0.0 : std::abs(beta * Y[(meff - 1) * meff + c]); };
        res.largest = theta[meff - 1];
        res.smallest = theta[0];
        res.residual_largest = resid(meff - 1);
        res.residual_smallest = resid(0);
        res.restarts = restart;
        if (breakdown || (res.residual_largest <= opts.tol && res.residual_smallest <= opts.tol)) {
            res.converged = true;
            return res;
        }
        if (restart >= opts.max_restarts)
            throw NonConvergence("Lanczos did not converge after " + std::to_string(restart) + " restarts",
                                 std::max(res.residual_largest, res.residual_smallest));

        // thick restart: keep Ritz vectors from both ends
        std::vector<std::size_t> kept;
        for (std::size_t c = 0; c < keep; ++c) kept.push_back(c);
        for (std::size_t c = meff - keep; c < meff; ++c) kept.push_back(c);
        if (keep == 0) kept = {0, meff - 1};
        const std::size_t nk_new = kept.size();
        std::vector<double> tmp(meff);
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = 0; r < meff; ++r) tmp[r] = V[r][p];
            for (std::size_t i = 0; i < nk_new; ++i) {
                double s = 0;
                for (std::size_t r = 0; r < meff; ++r) s += Y[r * meff + kept[i]] * tmp[r];
                V[i][p] = s;
            }
        }
        std::swap(V[nk_new], V[meff]);
        std::fill(T.begin(), T.end(), 0.0);
        for (std::size_t i = 0; i < nk_new; ++i) {
            T[i * m + i] = theta[kept[i]];
            T[i * m + nk_new] = T[nk_new * m + i] = beta * Y[(meff - 1) * meff + kept[i]];
        }
        nk = nk_new;
    }
}

}  // namespace lieexp::eigen
