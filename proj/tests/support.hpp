#pragma once

// Instance generators and independent oracles shared by the test binaries.

#include "imlab/lab.hpp"
#include "imlab/mdp.hpp"
#include "imlab/rng.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace imlab::testing {

inline TabularMdp fuzz_mdp(Seed seed, int S, int A, double gamma, double alpha = 1.0) {
    lab::MdpFamily f;
    f.n_states = S;
    f.n_actions = A;
    f.gamma = gamma;
    f.dirichlet_alpha = alpha;
    return lab::random_mdp(f, seed);
}

inline Policy fuzz_policy(Seed seed, int S, int A, double alpha = 1.0) {
    Rng rng(seed);
    return lab::random_policy(S, A, alpha, rng);
}

inline Vector fuzz_distribution(Seed seed, int n, double alpha = 1.0) {
    Rng rng(seed);
    return lab::random_distribution(n, alpha, rng);
}

/// (1 - gamma) sum_{t <= T} gamma^t (P^T)^t d0 with T = ceil(log(1e-10) / log gamma).
inline Vector geometric_series_occupancy(const TabularMdp& mdp, const Policy& pi) {
    const Matrix P = policy_transition_matrix(mdp, pi);
    const double g = mdp.gamma();
    Vector term = mdp.init_dist();
    Vector total = term;
    if (g > 0.0) {
        const int T = static_cast<int>(std::ceil(std::log(1e-10) / std::log(g)));
        double w = 1.0;
        for (int t = 1; t <= T; ++t) {
            term = P.transpose() * term;
            w *= g;
            total += w * term;
        }
    }
    return (1.0 - g) * total;
}

/// Value by truncated rollout of the expected reward: sum_t gamma^t <d_t, r_pi>.
inline double series_value(const TabularMdp& mdp, const Policy& pi) {
    const Matrix P = policy_transition_matrix(mdp, pi);
    const Vector r_pi = pi.table().cwiseProduct(mdp.reward()).rowwise().sum();
    const double g = mdp.gamma();
    Vector dist = mdp.init_dist();
    double total = dist.dot(r_pi);
    if (g > 0.0) {
        const int T = static_cast<int>(std::ceil(std::log(1e-13) / std::log(g)));
        double w = 1.0;
        for (int t = 1; t <= T; ++t) {
            dist = P.transpose() * dist;
            w *= g;
            total += w * dist.dot(r_pi);
        }
    }
    return total;
}

/// Central finite differences of f at x, entry by entry.
inline Matrix finite_difference(const std::function<double(const Matrix&)>& f, const Matrix& x, double h = 1e-5) {
    Matrix grad(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Matrix plus = x;
        Matrix minus = x;
        plus.data()[i] += h;
        minus.data()[i] -= h;
        grad.data()[i] = (f(plus) - f(minus)) / (2.0 * h);
    }
    return grad;
}

/// Min-cost transport by successive shortest paths with Bellman-Ford on the
/// residual bipartite network. Independent of the simplex code.
inline double min_cost_flow_transport(const Matrix& cost, const Vector& mu, const Vector& nu) {
    const int n = static_cast<int>(mu.size());
    // nodes: 0 source, 1..n left, n+1..2n right, 2n+1 sink
    const int N = 2 * n + 2;
    const int src = 0;
    const int sink = 2 * n + 1;
    struct Arc {
        int to;
        double cap;
        double cost;
        int rev;
    };
    std::vector<std::vector<Arc>> g(static_cast<std::size_t>(N));
    auto add_arc = [&](int u, int v, double cap, double c) {
        g[static_cast<std::size_t>(u)].push_back({v, cap, c, static_cast<int>(g[static_cast<std::size_t>(v)].size())});
        g[static_cast<std::size_t>(v)].push_back({u, 0.0, -c, static_cast<int>(g[static_cast<std::size_t>(u)].size()) - 1});
    };
    for (int i = 0; i < n; ++i) add_arc(src, 1 + i, mu[i], 0.0);
    for (int j = 0; j < n; ++j) add_arc(n + 1 + j, sink, nu[j], 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) add_arc(1 + i, n + 1 + j, std::numeric_limits<double>::infinity(), cost(i, j));

    double total_cost = 0.0;
    double remaining = mu.sum();
    const double eps = 1e-15;
    while (remaining > 1e-13) {
        std::vector<double> dist(static_cast<std::size_t>(N), std::numeric_limits<double>::infinity());
        std::vector<int> prev_node(static_cast<std::size_t>(N), -1);
        std::vector<int> prev_arc(static_cast<std::size_t>(N), -1);
        dist[static_cast<std::size_t>(src)] = 0.0;
        for (int iter = 0; iter < N; ++iter) {
            bool changed = false;
            for (int u = 0; u < N; ++u) {
                if (!std::isfinite(dist[static_cast<std::size_t>(u)])) continue;
                const auto& arcs = g[static_cast<std::size_t>(u)];
                for (int k = 0; k < static_cast<int>(arcs.size()); ++k) {
                    const Arc& a = arcs[static_cast<std::size_t>(k)];
                    if (a.cap <= eps) continue;
                    const double nd = dist[static_cast<std::size_t>(u)] + a.cost;
                    if (nd < dist[static_cast<std::size_t>(a.to)] - 1e-14) {
                        dist[static_cast<std::size_t>(a.to)] = nd;
                        prev_node[static_cast<std::size_t>(a.to)] = u;
                        prev_arc[static_cast<std::size_t>(a.to)] = k;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (!std::isfinite(dist[static_cast<std::size_t>(sink)])) break;
        double push = std::numeric_limits<double>::infinity();
        for (int v = sink; v != src; v = prev_node[static_cast<std::size_t>(v)]) {
            const Arc& a = g[static_cast<std::size_t>(prev_node[static_cast<std::size_t>(v)])]
                            [static_cast<std::size_t>(prev_arc[static_cast<std::size_t>(v)])];
            push = std::min(push, a.cap);
        }
        for (int v = sink; v != src; v = prev_node[static_cast<std::size_t>(v)]) {
            Arc& a = g[static_cast<std::size_t>(prev_node[static_cast<std::size_t>(v)])]
                      [static_cast<std::size_t>(prev_arc[static_cast<std::size_t>(v)])];
            a.cap -= push;
            g[static_cast<std::size_t>(v)][static_cast<std::size_t>(a.rev)].cap += push;
        }
        total_cost += push * dist[static_cast<std::size_t>(sink)];
        remaining -= push;
    }
    return total_cost;
}

/// Direct enumeration of E_sigma sup_D (1/m) sum sigma_i D(z_i) by bit
/// patterns, recomputing every sum from scratch.
inline double brute_force_rademacher(const std::vector<Vector>& members, const std::vector<int>& points) {
    const std::size_t m = points.size();
    const std::uint64_t patterns = std::uint64_t{1} << m;
    double acc = 0.0;
    for (std::uint64_t bits = 0; bits < patterns; ++bits) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& d : members) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += ((bits >> i) & 1U ? 1.0 : -1.0) * d[points[i]];
            best = std::max(best, s);
        }
        acc += best;
    }
    return acc / static_cast<double>(patterns) / static_cast<double>(m);
}

} // namespace imlab::testing
