#include "beliefdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beliefdyn {

int DirectedGraph::edge_count() const {
    int c = 0;
    for (auto b : adj) c += b;
    return c;
}

int DirectedGraph::out_degree(int i) const {
    int c = 0;
    for (int j = 0; j < n; ++j) c += adj[static_cast<std::size_t>(i) * n + j];
    return c;
}

namespace {

// BFS distances from src along forward edges; -1 = unreachable.
std::vector<int> bfs_distances(const DirectedGraph& g, int src) {
    std::vector<int> dist(g.n, -1);
    std::vector<int> queue;
    queue.reserve(g.n);
    dist[src] = 0;
    queue.push_back(src);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        int u = queue[head];
        for (int v = 0; v < g.n; ++v) {
            if (g.edge(u, v) && dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

void finalize(DirectedGraph& g) {
    g.in_nbrs.assign(g.n, {});
    for (int j = 0; j < g.n; ++j)
        for (int i = 0; i < g.n; ++i)
            if (g.edge(i, j)) g.in_nbrs[j].push_back(i);
}

void validate_strongly_connected(const DirectedGraph& g) {
    auto fwd = bfs_distances(g, 0);
    for (int j = 0; j < g.n; ++j)
        if (fwd[j] < 0) throw NotStronglyConnected(0, j);
    // Reverse reachability: j reaches 0 iff 0 reaches j in the transpose.
    DirectedGraph rev;
    rev.n = g.n;
    rev.adj.assign(g.adj.size(), 0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            rev.adj[static_cast<std::size_t>(j) * g.n + i] = g.adj[static_cast<std::size_t>(i) * g.n + j];
    auto bwd = bfs_distances(rev, 0);
    for (int j = 0; j < g.n; ++j)
        if (bwd[j] < 0) throw NotStronglyConnected(j, 0);
}

}  // namespace

int DirectedGraph::diameter() const {
    int d = 0;
    for (int i = 0; i < n; ++i) {
        auto dist = bfs_distances(*this, i);
        for (int j = 0; j < n; ++j) d = std::max(d, dist[j]);
    }
    return d;
}

DirectedGraph build_graph(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 2) throw Error("node count must be at least 2, got " + std::to_string(n));
    DirectedGraph g;
    g.n = n;
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    for (auto [i, j] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw Error("edge (" + std::to_string(i) + "," + std::to_string(j) +
                        ") is out of range for " + std::to_string(n) + " nodes");
        g.adj[static_cast<std::size_t>(i) * n + j] = 1;
    }
    // The model requires a self-loop at every node; insert silently.
    for (int i = 0; i < n; ++i) g.adj[static_cast<std::size_t>(i) * n + i] = 1;
    validate_strongly_connected(g);
    finalize(g);
    return g;
}

DirectedGraph build_ab_graph(int a, int b) {
    if (a < 1 || b < 1) throw Error("ab-graph parameters must be positive");
    const int c = std::max(a, b);
    const int n = 2 * c;
    DirectedGraph g;
    g.n = n;
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    auto set = [&](int i, int j) { g.adj[static_cast<std::size_t>(i) * n + j] = 1; };
    for (int i = 0; i < c; ++i) {
        for (int j = 0; j < c; ++j) {
            int d = ((j - i) % c + c) % c;
            if (d < a) {
                set(i, j);          // x_i -> x_j
                set(c + i, c + j);  // y_i -> y_j
            }
            if (d < b) {
                set(i, c + j);      // x_i -> y_j
                set(c + i, j);      // y_i -> x_j
            }
        }
    }
    validate_strongly_connected(g);
    finalize(g);
    return g;
}

DirectedGraph cycle_graph(int n, bool undirected) {
    if (n < 3) throw Error("cycle graph needs at least 3 nodes");
    DirectedGraph g;
    g.n = n;
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        g.adj[static_cast<std::size_t>(i) * n + i] = 1;
        g.adj[static_cast<std::size_t>(i) * n + (i + 1) % n] = 1;
        if (undirected) g.adj[static_cast<std::size_t>(i) * n + (i + n - 1) % n] = 1;
    }
    validate_strongly_connected(g);
    finalize(g);
    return g;
}

DirectedGraph complete_graph(int n) {
    if (n < 2) throw Error("node count must be at least 2, got " + std::to_string(n));
    DirectedGraph g;
    g.n = n;
    g.adj.assign(static_cast<std::size_t>(n) * n, 1);
    finalize(g);
    return g;
}

PathCountMatrix path_counts(const DirectedGraph& g, int t) {
    if (t < 0) throw Error("path length must be nonnegative");
    const int n = g.n;
    PathCountMatrix p;
    p.t = t;
    p.n = n;
    p.counts.assign(static_cast<std::size_t>(n) * n, BigInt(0));
    for (int i = 0; i < n; ++i) p.counts[static_cast<std::size_t>(i) * n + i] = 1;
    std::vector<BigInt> next(static_cast<std::size_t>(n) * n);
    for (int step = 0; step < t; ++step) {
        // P^(t+1) = P^(t) * A; column j gathers the in-neighborhood of j.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                BigInt acc = 0;
                for (int k : g.in_nbrs[j]) acc += p.counts[static_cast<std::size_t>(i) * n + k];
                next[static_cast<std::size_t>(i) * n + j] = std::move(acc);
            }
        }
        p.counts.swap(next);
    }
    return p;
}

unsigned PathCountMatrix::max_bits() const {
    unsigned bits = 0;
    for (const auto& c : counts)
        if (c > 0) bits = std::max(bits, static_cast<unsigned>(boost::multiprecision::msb(c)) + 1);
    return bits;
}

namespace {

// y = A^T x when transpose, else y = A x.
void mat_vec(const DirectedGraph& g, const std::vector<double>& x, std::vector<double>& y,
             bool transpose) {
    const int n = g.n;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            bool hit = transpose ? g.edge(j, i) : g.edge(i, j);
            if (hit) acc += x[j];
        }
        y[i] = acc;
    }
}

}  // namespace

CentralityData perron(const DirectedGraph& g, double tol, int max_iter) {
    if (tol <= 0) throw Error("tolerance must be positive");
    const int n = g.n;
    std::vector<double> v(n, 1.0 / n), w(n, 1.0 / n), av(n), atw(n);
    double residual = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        mat_vec(g, v, av, false);
        mat_vec(g, w, atw, true);
        double rv = std::accumulate(av.begin(), av.end(), 0.0);
        double rw = std::accumulate(atw.begin(), atw.end(), 0.0);
        double r = 0.5 * (rv + rw);
        double res = 0.0;
        for (int i = 0; i < n; ++i) {
            res = std::max(res, std::abs(av[i] - r * v[i]));
            res = std::max(res, std::abs(atw[i] - r * w[i]));
        }
        residual = res;
        if (res <= tol) {
            CentralityData c;
            c.r = r;
            c.v = v;
            c.w = w;
            c.residual = res;
            c.iterations = it;
            return c;
        }
        for (int i = 0; i < n; ++i) v[i] = av[i] / rv;
        for (int i = 0; i < n; ++i) w[i] = atw[i] / rw;
    }
    throw NoConvergence(residual, max_iter);
}

double perron_projection_error(const DirectedGraph& g, const CentralityData& c, int t) {
    if (t < 1) throw Error("projection error requires t >= 1");
    const int n = g.n;
    // M = A^t / r^t, rescaled every step to stay in range.
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0), next(m.size());
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int step = 0; step < t; ++step) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k : g.in_nbrs[j]) acc += m[static_cast<std::size_t>(i) * n + k];
                next[static_cast<std::size_t>(i) * n + j] = acc / c.r;
            }
        }
        m.swap(next);
    }
    double wv = 0.0;
    for (int i = 0; i < n; ++i) wv += c.w[i] * c.v[i];
    double err = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(m[static_cast<std::size_t>(i) * n + j] -
                                         c.v[i] * c.w[j] / wv));
    return err;
}

}  // namespace beliefdyn
