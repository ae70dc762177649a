#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace qwalk {

struct GraphError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Node indices are 0-based in memory. The JSON exchange format is 1-based.
struct Edge {
    int i = 0;
    int j = 0;
    double w = 1.0;
    bool operator==(const Edge&) const = default;
};

struct Graph {
    int n = 0;
    std::vector<Edge> edges;  // i < j, sorted lexicographically
    std::vector<std::array<double, 3>> coords;
    std::string family;
    nlohmann::json params = nlohmann::json::object();
    std::optional<std::uint64_t> seed;

    std::vector<int> degrees() const;
    std::vector<double> strengths() const;
    std::vector<std::vector<int>> adjacency() const;
    bool has_edge(int a, int b) const;
    // throws GraphError on self-loops, duplicates, bad weights or indices
    void validate() const;
};

// Sorts edges and validates. Builders funnel through here.
Graph finalize(Graph g);

// deterministic families
Graph ring(int n);
Graph line(int n);
Graph lattice2d(int nx, int ny, bool periodic_x, bool periodic_y);
Graph star(int n);  // core is node 0
Graph complete(int n);
Graph dendrimer(int generations, int f = 3);  // core is node 0, breadth-first numbering
Graph husimi_cactus(int generations);         // line graph of the f=3 dendrimer
Graph glued_cayley(int generations);
Graph dsg(int generation);  // corners are 0, (N-1)/2, N-1
Graph vicsek(int f, int generation);  // central node is 0
Graph apollonian(int generation);
Graph hypercycle(int n, int d);

// canonical corner list of dsg(g) and vicsek(f,g)
std::vector<int> dsg_corners(int generation);

// random families (deterministic per seed)
Graph small_world(int n, int extra_bonds, std::uint64_t seed);
Graph erdos_renyi(int n, double p, std::uint64_t seed);
Graph watts_strogatz(int n, double p_rewire, std::uint64_t seed);
Graph scale_free(int n, std::uint64_t seed);

// weighted families; exponent = +inf gives the nearest-neighbour ring
Graph long_range_ring(int n, double exponent, int r_max = -1);
Graph m_neighbor_ring(int n, int m);
Graph long_range_chain(int n, double nu, int r_max = -1);
Graph random_geometric(int n, std::uint64_t seed, double box = -1.0);
Graph geometric_from_coords(const std::vector<std::array<double, 3>>& coords);

// JSON-driven dispatch: {"family": "...", ...parameters}
Graph build_graph(const nlohmann::json& spec);
Graph build_random_graph(const nlohmann::json& spec, std::uint64_t seed);
Graph build_weighted(const nlohmann::json& spec);

// Laplacian-type coupling: diagonal = gamma * incident weight, off-diagonal = -gamma * w.
Eigen::MatrixXd coupling_matrix(const Graph& g, double gamma = 1.0);

struct ClusterPartition {
    std::vector<std::vector<int>> clusters;
    std::vector<int> d;  // cluster sizes
    std::vector<int> b;  // bonds between cluster k and k+1
};

ClusterPartition glued_cayley_partition(int generations);
// Collapsed matrix on normalized uniform cluster states.
// Errors if degrees differ inside a cluster, or (when required) if non-consecutive clusters touch.
Eigen::MatrixXd collapse_clusters(const Graph& g, ClusterPartition& p, bool require_tridiagonal = true);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

}  // namespace qwalk
