#include "lieexp/spectra.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "lieexp/error.hpp"

namespace lieexp::spectra {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void sort_rows(CayleyGraph& g) {
    for (std::size_t i = 0; i < g.n; ++i) std::sort(g.adj.begin() + i * g.k, g.adj.begin() + (i + 1) * g.k);
}

std::vector<Mat> connection_set(const GroupEnum& G, const std::vector<Mat>& S) {
    if (S.empty()) throw InvalidArgument("empty generating set");
    std::vector<Mat> given, conn;
    for (const auto& s : S) {
        Mat ns = G.normalize(s);
        if (std::find(given.begin(), given.end(), ns) != given.end())
            throw InvalidArgument("two generators are the same group element");
        given.push_back(ns);
    }
    for (const auto& s : given) {
        Mat inv = G.normalize(s.inverse());
        if (std::find(conn.begin(), conn.end(), s) == conn.end()) conn.push_back(s);
        if (std::find(conn.begin(), conn.end(), inv) == conn.end()) conn.push_back(inv);
    }
    return conn;
}

CayleyGraph build(const GroupEnum& G, std::vector<Mat> conn) {
    if (!G.complete()) throw InvalidArgument("group enumeration is incomplete");
    CayleyGraph g;
    g.n = G.size();
    g.k = conn.size();
    g.adj.resize(g.n * g.k);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.k; ++j) {
            auto idx = G.right_mul(i, conn[j]);
            if (!idx) throw InvalidArgument("generator is not an element of the group");
            g.adj[i * g.k + j] = *idx;
        }
    sort_rows(g);
    g.connection = std::move(conn);
    if (!g.connected()) {
        std::vector<char> seen(g.n, 0);
        std::vector<std::uint32_t> queue{0};
        seen[0] = 1;
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (auto v : g.row(queue[h]))
                if (!seen[v]) seen[v] = 1, queue.push_back(v);
        std::ostringstream msg;
        msg << "generators do not generate the group: reached " << queue.size() << "/" << g.n;
        throw InvalidArgument(msg.str());
    }
    return g;
}

void normalize(std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    for (double& x : v) x /= s;
}

TrivialEigen constant_vector(std::size_t n) {
    return {1.0, std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
}

std::vector<TrivialEigen> trivial_from_classes(const GroupEnum& G, const CayleyGraph& g, const std::vector<Mat>& S) {
    std::vector<TrivialEigen> out{constant_vector(g.n)};
    const std::uint32_t m = matgrp::det_class_modulus(G.dim(), *G.field());
    if (m == 1 || S.empty()) return out;
    const std::uint32_t c = matgrp::det_class(G.normalize(S.front()));
    for (const auto& s : S)
        if (matgrp::det_class(G.normalize(s)) != c) return out;
    if (c == 0) return out;
    const std::uint32_t ord = m / std::gcd(c, m);
    std::vector<std::uint32_t> level(m, 0);  // class a·c ↦ a
    for (std::uint32_t a = 0; a < ord; ++a) level[(std::uint64_t{a} * c) % m] = a;
    std::vector<std::uint32_t> a_of(g.n);
    for (std::size_t i = 0; i < g.n; ++i) a_of[i] = level[matgrp::det_class(G.element(i))];
    std::vector<std::uint32_t> a_conn;
    for (const auto& x : g.connection) a_conn.push_back(level[matgrp::det_class(x)]);
    for (std::uint32_t j = 1; 2 * j <= ord; ++j) {
        const double w = 2.0 * std::numbers::pi * j / ord;
        double value = 0;
        for (auto a : a_conn) value += std::cos(w * a);
        value /= static_cast<double>(g.k);
        TrivialEigen cv{value, std::vector<double>(g.n)};
        for (std::size_t i = 0; i < g.n; ++i) cv.vector[i] = std::cos(w * a_of[i]);
        normalize(cv.vector);
        out.push_back(std::move(cv));
        if (2 * j == ord) continue;
        TrivialEigen sv{value, std::vector<double>(g.n)};
        for (std::size_t i = 0; i < g.n; ++i) sv.vector[i] = std::sin(w * a_of[i]);
        normalize(sv.vector);
        out.push_back(std::move(sv));
    }
    return out;
}

std::vector<Mat> mats_of(const std::vector<ProjMatrix>& S) {
    std::vector<Mat> out;
    for (const auto& s : S) out.push_back(s.mat());
    return out;
}

}  // namespace

CayleyGraph CayleyGraph::from_adjacency(std::size_t n, std::size_t k, std::vector<std::uint32_t> adj) {
    if (adj.size() != n * k) throw InvalidArgument("regularity: adjacency size is not n·k");
    CayleyGraph g;
    g.n = n;
    g.k = k;
    g.adj = std::move(adj);
    for (auto v : g.adj)
        if (v >= n) throw InvalidArgument("range: neighbour index out of range");
    sort_rows(g);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = g.row(i);
        for (std::size_t a = 0; a < k;) {
            const std::uint32_t j = r[a];
            std::size_t b = a;
            while (b < k && r[b] == j) ++b;
            auto rj = g.row(j);
            const auto cnt = std::count(rj.begin(), rj.end(), static_cast<std::uint32_t>(i));
            if (static_cast<std::size_t>(cnt) != b - a) throw InvalidArgument("symmetry: adjacency is not symmetric");
            a = b;
        }
    }
    return g;
}

CayleyGraph CayleyGraph::from_edge_list(std::istream& in) {
    std::string line;
    std::size_t n = 0, k = 0;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        char hash = 0;
        if (ls >> hash && hash == '#' && ls >> n >> k) {
            header = true;
            break;
        }
        throw InvalidArgument("format: missing '# n k' header");
    }
    if (!header) throw InvalidArgument("format: missing '# n k' header");
    std::vector<std::vector<std::uint32_t>> rows(n);
    std::size_t u, v;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!(ls >> u >> v)) throw InvalidArgument("format: bad edge line '" + line + "'");
        if (u >= n || v >= n) throw InvalidArgument("range: vertex out of range in '" + line + "'");
        rows[u].push_back(static_cast<std::uint32_t>(v));
        if (u != v) rows[v].push_back(static_cast<std::uint32_t>(u));
    }
    std::vector<std::uint32_t> adj;
    adj.reserve(n * k);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != k) {
            std::ostringstream msg;
            msg << "regularity: vertex " << i << " has degree " << rows[i].size() << ", expected " << k;
            throw InvalidArgument(msg.str());
        }
        adj.insert(adj.end(), rows[i].begin(), rows[i].end());
    }
    return from_adjacency(n, k, std::move(adj));
}

bool CayleyGraph::connected() const {
    if (n == 0) return true;
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> queue{0};
    seen[0] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h)
        for (auto v : row(queue[h]))
            if (!seen[v]) seen[v] = 1, queue.push_back(v);
    return queue.size() == n;
}

std::optional<std::vector<int>> CayleyGraph::bipartition() const {
    std::vector<int> colour(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
        if (colour[s] >= 0) continue;
        colour[s] = 0;
        std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
        for (std::size_t h = 0; h < queue.size(); ++h) {
            const auto u = queue[h];
            for (auto v : row(u)) {
                if (colour[v] < 0) {
                    colour[v] = 1 - colour[u];
                    queue.push_back(v);
                } else if (colour[v] == colour[u]) {
                    return std::nullopt;
                }
            }
        }
    }
    return colour;
}

void CayleyGraph::matvec(std::span<const double> x, std::span<double> y) const {
    const double inv_k = 1.0 / static_cast<double>(k);
    const std::uint32_t* a = adj.data();
    for (std::size_t i = 0; i < n; ++i, a += k) {
        double s = 0;
        for (std::size_t j = 0; j < k; ++j) s += x[a[j]];
        y[i] = s * inv_k;
    }
}

CayleyGraph cayley_graph(const GroupEnum& G, const std::vector<Mat>& S) { return build(G, connection_set(G, S)); }

CayleyGraph cayley_graph(const GroupEnum& G, const std::vector<ProjMatrix>& S) { return cayley_graph(G, mats_of(S)); }

CayleyGraph cayley_graph_multiset(const GroupEnum& G, const std::vector<Mat>& connection) {
    if (connection.empty()) throw InvalidArgument("empty connection multiset");
    std::vector<Mat> conn, inverses;
    for (const auto& c : connection) {
        conn.push_back(G.normalize(c));
        inverses.push_back(G.normalize(c.inverse()));
    }
    auto key = [](const Mat& a, const Mat& b) { return a.codes() < b.codes(); };
    std::vector<Mat> a = conn, b = inverses;
    std::sort(a.begin(), a.end(), key);
    std::sort(b.begin(), b.end(), key);
    if (a != b) throw InvalidArgument("connection multiset is not closed under inversion");
    return build(G, std::move(conn));
}

void write_edge_list(const CayleyGraph& g, std::ostream& out) {
    out << "# " << g.n << " " << g.k << "\n";
    for (std::size_t u = 0; u < g.n; ++u)
        for (auto v : g.row(u))
            if (v >= u) out << u << " " << v << "\n";
}

std::vector<TrivialEigen> trivial_eigendata(const GroupEnum& G, const CayleyGraph& g, const std::vector<Mat>& S) {
    return trivial_from_classes(G, g, S);
}

std::vector<TrivialEigen> trivial_eigendata(const GroupEnum& G, const CayleyGraph& g,
                                            const std::vector<ProjMatrix>& S) {
    return trivial_from_classes(G, g, mats_of(S));
}

std::vector<TrivialEigen> trivial_eigendata(const CayleyGraph& g) {
    std::vector<TrivialEigen> out{constant_vector(g.n)};
    if (auto col = g.bipartition(); col && g.n > 1) {
        TrivialEigen s{-1.0, std::vector<double>(g.n)};
        for (std::size_t i = 0; i < g.n; ++i) s.vector[i] = (*col)[i] ? -1.0 : 1.0;
        normalize(s.vector);
        out.push_back(std::move(s));
    }
    return out;
}

SpectralReport full_spectrum_dense(const CayleyGraph& g, std::size_t dense_cap) {
    if (g.n > dense_cap)
        throw InvalidArgument("n = " + std::to_string(g.n) + " exceeds the dense cap; use the iterative path");
    const auto t0 = Clock::now();
    std::vector<double> a(g.n * g.n, 0.0);
    const double w = 1.0 / static_cast<double>(g.k);
    for (std::size_t i = 0; i < g.n; ++i)
        for (auto j : g.row(i)) a[i * g.n + j] += w;
    SpectralReport r;
    r.n = g.n;
    r.k = g.k;
    r.method = "dense";
    r.spectrum = eigen::symmetric_eigenvalues(std::move(a), g.n);
    r.lambda_min = r.spectrum.empty() ? 0 : r.spectrum.back();
    r.lambda2 = r.lambda_min;
    for (double x : r.spectrum)
        if (x < 1.0 - r.tol) {
            r.lambda2 = x;
            break;
        }
    r.runtime_ms = ms_since(t0);
    return r;
}

Extremes lambda_extremes_iterative(const CayleyGraph& g, const std::vector<std::vector<double>>& deflate, double tol,
                                   const eigen::LanczosOptions& base) {
    eigen::LanczosOptions opts = base;
    opts.tol = tol;
    auto res = eigen::lanczos_extremes([&](std::span<const double> x, std::span<double> y) { g.matvec(x, y); }, g.n,
                                       deflate, opts);
    return {res.largest, res.smallest, std::max(res.residual_largest, res.residual_smallest), res.matvecs};
}

double lambda_nontrivial(SpectralReport& report, const std::vector<double>& trivial_values) {
    std::vector<double> rest = report.spectrum;
    for (double t : trivial_values) {
        auto it = std::min_element(rest.begin(), rest.end(),
                                   [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
        if (it == rest.end() || std::abs(*it - t) > report.tol)
            throw InternalError("trivial eigenvalue " + std::to_string(t) + " is missing from the spectrum");
        rest.erase(it);
    }
    report.trivial = trivial_values;
    if (rest.empty()) {
        report.nontrivial_max = report.nontrivial_min = report.lambda_x = 0;
        return 0;
    }
    report.nontrivial_max = *std::max_element(rest.begin(), rest.end());
    report.nontrivial_min = *std::min_element(rest.begin(), rest.end());
    report.lambda_x = std::max(std::abs(report.nontrivial_max), std::abs(report.nontrivial_min));
    return report.lambda_x;
}

SpectralReport analyze(const CayleyGraph& g, const std::vector<TrivialEigen>& trivial, const SpectralOptions& opt) {
    const auto t0 = Clock::now();
    std::vector<double> values;
    for (const auto& t : trivial) values.push_back(t.value);
    SpectralReport r;
    if (g.n <= opt.dense_cap) {
        r = full_spectrum_dense(g, opt.dense_cap);
        r.tol = opt.tol;
        lambda_nontrivial(r, values);
    } else {
        std::vector<double> y(g.n);
        std::vector<std::vector<double>> deflate;
        for (const auto& t : trivial) {
            g.matvec(t.vector, y);
            double res = 0;
            for (std::size_t i = 0; i < g.n; ++i) res += (y[i] - t.value * t.vector[i]) * (y[i] - t.value * t.vector[i]);
            if (std::sqrt(res) > 1e-8)
                throw InternalError("trivial eigenvector for " + std::to_string(t.value) + " fails Δv = λv");
            deflate.push_back(t.vector);
        }
        const auto ex = lambda_extremes_iterative(g, deflate, opt.lanczos_tol, opt.lanczos);
        r.n = g.n;
        r.k = g.k;
        r.method = "iterative";
        r.tol = opt.tol;
        r.lambda2 = ex.lambda2;
        r.lambda_min = ex.lambda_min;
        r.residual = ex.residual;
        r.matvecs = ex.matvecs;
        r.trivial = values;
        r.nontrivial_max = ex.lambda2;
        r.nontrivial_min = ex.lambda_min;
        r.lambda_x = std::max(std::abs(ex.lambda2), std::abs(ex.lambda_min));
    }
    r.runtime_ms = ms_since(t0);
    return r;
}

double ramanujan_bound(std::uint64_t q) { return 2.0 * std::sqrt(static_cast<double>(q)) / (q + 1.0); }

double general_bound(std::uint64_t q, unsigned d) {
    const double qd = static_cast<double>(q);
    return d * std::pow(qd, (d - 1) / 2.0) / ((std::pow(qd, d) - 1.0) / (qd - 1.0));
}

void add_bound_verdicts(SpectralReport& r, std::uint64_t q, unsigned d) {
    if (d == 2) {
        const double b = ramanujan_bound(q);
        r.verdicts.push_back({"ramanujan", r.lambda_x, b, r.lambda_x <= b + r.tol});
    }
    std::vector<double> Ed;
    for (unsigned j = 0; j < d; ++j) Ed.push_back(std::cos(2.0 * std::numbers::pi * j / d));
    const double b = general_bound(q, d);
    auto ok = [&](double lam) {
        if (std::abs(lam) <= b + r.tol) return true;
        return std::any_of(Ed.begin(), Ed.end(), [&](double e) { return std::abs(lam - e) <= r.tol; });
    };
    bool pass = true;
    if (!r.spectrum.empty()) {
        // every nontrivial eigenvalue: drop one copy of each trivial value first
        std::vector<double> rest = r.spectrum;
        for (double t : r.trivial) {
            auto it = std::min_element(rest.begin(), rest.end(),
                                       [&](double a, double c) { return std::abs(a - t) < std::abs(c - t); });
            if (it != rest.end()) rest.erase(it);
        }
        for (double lam : rest) pass = pass && ok(lam);
    } else {
        pass = ok(r.nontrivial_max) && ok(r.nontrivial_min);
    }
    r.verdicts.push_back({"general_d", r.lambda_x, b, pass});
    r.verdicts.push_back({"uniform_19_20", r.lambda_x, kUniformBound, r.lambda_x <= kUniformBound + r.tol});
}

nlohmann::json SpectralReport::to_json() const {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : verdicts) v.push_back({{"name", x.name}, {"value", x.value}, {"bound", x.bound}, {"pass", x.pass}});
    nlohmann::json j = {{"n", n},
                        {"k", k},
                        {"method", method},
                        {"lambda2", lambda2},
                        {"lambda_min", lambda_min},
                        {"lambda_x", lambda_x},
                        {"nontrivial_max", nontrivial_max},
                        {"nontrivial_min", nontrivial_min},
                        {"trivial", trivial},
                        {"tol", tol},
                        {"verdicts", v}};
    if (method == "iterative") {
        j["residual"] = residual;
        j["matvecs"] = matvecs;
    }
    return j;
}

bool SpectralReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

namespace {

std::vector<std::uint32_t> neighbour_masks(const CayleyGraph& g) {
    if (g.n > 24) throw InvalidArgument("brute-force expansion needs n <= 24");
    std::vector<std::uint32_t> nb(g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (auto v : g.row(i)) nb[i] |= 1u << v;
    return nb;
}

std::vector<std::uint32_t> members(std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; mask; ++v, mask >>= 1)
        if (mask & 1) out.push_back(v);
    return out;
}

}  // namespace

Expansion vertex_expansion_bruteforce(const CayleyGraph& g) {
    const auto nb = neighbour_masks(g);
    Expansion best{std::numeric_limits<double>::infinity(), {}};
    const std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
    for (std::uint32_t A = 1; A <= full; ++A) {
        const int sz = std::popcount(A);
        if (2 * static_cast<std::size_t>(sz) > g.n) continue;
        std::uint32_t reach = 0;
        for (std::uint32_t m = A; m; m &= m - 1) reach |= nb[std::countr_zero(m)];
        const double ratio = static_cast<double>(std::popcount(reach & ~A)) / sz;
        if (ratio < best.value) best = {ratio, members(A)};
    }
    return best;
}

Expansion edge_expansion_bruteforce(const CayleyGraph& g) {
    neighbour_masks(g);
    Expansion best{std::numeric_limits<double>::infinity(), {}};
    const std::uint64_t full = (std::uint64_t{1} << g.n) - 1;
    for (std::uint32_t A = 1; A <= full; ++A) {
        const int sz = std::popcount(A);
        if (2 * static_cast<std::size_t>(sz) > g.n) continue;
        std::size_t cut = 0;
        for (std::uint32_t m = A; m; m &= m - 1)
            for (auto v : g.row(std::countr_zero(m)))
                if (!((A >> v) & 1)) ++cut;
        const double ratio = static_cast<double>(cut) / (static_cast<double>(g.k) * sz);
        if (ratio < best.value) best = {ratio, members(A)};
    }
    return best;
}

std::pair<double, double> cheeger_bounds(double lambda2) {
    const double gap = std::max(0.0, 1.0 - lambda2);
    return {gap / 2.0, std::sqrt(2.0 * gap)};
}

std::vector<double> mixing_profile(const CayleyGraph& g, std::size_t t_max, std::uint32_t start) {
    if (start >= g.n) throw InvalidArgument("start vertex out of range");
    std::vector<double> p(g.n, 0.0), q(g.n), out;
    p[start] = 1.0;
    const double u = 1.0 / static_cast<double>(g.n);
    auto tv = [&] {
        double s = 0;
        for (double x : p) s += std::abs(x - u);
        return s / 2.0;
    };
    out.push_back(tv());
    for (std::size_t t = 0; t < t_max; ++t) {
        g.matvec(p, q);
        for (std::size_t i = 0; i < g.n; ++i) p[i] = 0.5 * (p[i] + q[i]);
        out.push_back(tv());
    }
    return out;
}

double mixing_tv(const CayleyGraph& g, std::size_t t, std::uint32_t start) { return mixing_profile(g, t, start).back(); }

void write_spectrum_csv(const SpectralReport& r, std::ostream& out) {
    out << "index,eigenvalue\n";
    out.precision(17);
    for (std::size_t i = 0; i < r.spectrum.size(); ++i) out << i << "," << r.spectrum[i] << "\n";
}

}  // namespace lieexp::spectra
