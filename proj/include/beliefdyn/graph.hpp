#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "beliefdyn/errors.hpp"

namespace beliefdyn {

using BigInt = boost::multiprecision::cpp_int;

/// Directed social network with mandatory self-loops, validated strongly
/// connected. Immutable after construction; copy freely.
struct DirectedGraph {
    int n = 0;
    std::vector<std::uint8_t> adj;          // row-major n*n, adj[i*n+j] = 1 iff edge i->j
    std::vector<std::vector<int>> in_nbrs;  // in_nbrs[i] = { j : edge j->i }, sorted

    bool edge(int i, int j) const { return adj[static_cast<std::size_t>(i) * n + j] != 0; }
    int edge_count() const;
    int out_degree(int i) const;
    int in_degree(int i) const { return static_cast<int>(in_nbrs[i].size()); }

    /// Longest shortest-path distance over all ordered pairs. Because every
    /// node has a self-loop, all path-count matrices of length >= diameter()
    /// are entrywise positive.
    int diameter() const;
};

/// Exact number of paths of length t between every ordered pair of nodes.
/// counts(i,j) is the number of walks i -> j of length exactly t; at t = 0
/// this is the identity. Entries grow like r^t, hence arbitrary precision.
struct PathCountMatrix {
    int t = 0;
    int n = 0;
    std::vector<BigInt> counts;  // row-major

    const BigInt& operator()(int i, int j) const {
        return counts[static_cast<std::size_t>(i) * n + j];
    }
    /// Largest bit width over all entries.
    unsigned max_bits() const;
    /// False once any entry exceeds 2^512; double conversion then loses the
    /// low bits and consumers should treat derived exponents as approximate.
    bool within_exact_range() const { return max_bits() <= 512; }
};

/// Spectral data of the adjacency matrix: spectral radius and the positive
/// left/right eigenvectors, each normalized to sum 1.
struct CentralityData {
    double r = 0.0;              // spectral radius, > 1 for every valid graph
    std::vector<double> v;       // right eigenvector; v[i] is agent i's centrality
    std::vector<double> w;       // left eigenvector
    double residual = 0.0;       // max-norm eigen residual at convergence
    int iterations = 0;
};

/// Builds a graph from an edge list, inserting missing self-loops, and
/// validates strong connectivity. Duplicate edges are idempotent.
DirectedGraph build_graph(int n, const std::vector<std::pair<int, int>>& edges);

/// Two-team construction simulating a weighted two-agent network with
/// self-weight a and cross-weight b. With c = max(a, b) the graph has 2c
/// nodes, x_1..x_c first and then y_1..y_c; x_i -> x_j and y_i -> y_j iff
/// (j - i) mod c < a, and x_i -> y_j, y_i -> x_j iff (j - i) mod c < b.
/// Every node has out- and in-degree a + b.
DirectedGraph build_ab_graph(int a, int b);

/// Ring of n >= 3 nodes with self-loops: edges i -> i+1 (mod n), plus
/// i -> i-1 when undirected.
DirectedGraph cycle_graph(int n, bool undirected);

/// All ordered pairs, self-loops included.
DirectedGraph complete_graph(int n);

/// Exact path counts of length t via repeated multiplication by the
/// adjacency matrix.
PathCountMatrix path_counts(const DirectedGraph& g, int t);

/// Power iteration with l1 renormalization on A and A^T from the uniform
/// start vector until the max-norm eigen residual of both vectors drops to
/// tol. Throws NoConvergence when max_iter is exhausted.
CentralityData perron(const DirectedGraph& g, double tol = 1e-12, int max_iter = 100000);

/// Max-norm distance between A^t / r^t and the rank-one limit
/// v w^T / (w^T v). Decays geometrically with ratio |lambda_2| / r.
double perron_projection_error(const DirectedGraph& g, const CentralityData& c, int t);

}  // namespace beliefdyn
