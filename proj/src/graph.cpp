#include "qwalk/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

namespace qwalk {

namespace {

void add_edge(Graph& g, int a, int b, double w = 1.0) {
    if (a > b) std::swap(a, b);
    g.edges.push_back({a, b, w});
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw GraphError(msg);
}

}  // namespace

std::vector<int> Graph::degrees() const {
    std::vector<int> d(n, 0);
    for (const auto& e : edges) {
        ++d[e.i];
        ++d[e.j];
    }
    return d;
}

std::vector<double> Graph::strengths() const {
    std::vector<double> s(n, 0.0);
    for (const auto& e : edges) {
        s[e.i] += e.w;
        s[e.j] += e.w;
    }
    return s;
}

std::vector<std::vector<int>> Graph::adjacency() const {
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        adj[e.i].push_back(e.j);
        adj[e.j].push_back(e.i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    return adj;
}

bool Graph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), Edge{a, b, 0.0},
                              [](const Edge& x, const Edge& y) {
                                  return std::pair(x.i, x.j) < std::pair(y.i, y.j);
                              });
}

void Graph::validate() const {
    require(n > 0, "graph must have at least one node");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        require(e.i >= 0 && e.j < n && e.i < e.j, "edge index out of range or not ordered");
        require(std::isfinite(e.w) && e.w > 0.0, "edge weight must be positive");
        if (k > 0) {
            const auto& p = edges[k - 1];
            require(std::pair(p.i, p.j) < std::pair(e.i, e.j), "duplicate or unsorted edge");
        }
    }
    require(coords.empty() || static_cast<int>(coords.size()) == n, "coordinates must cover every node");
}

Graph finalize(Graph g) {
    for (auto& e : g.edges)
        if (e.i > e.j) std::swap(e.i, e.j);
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& x, const Edge& y) { return std::pair(x.i, x.j) < std::pair(y.i, y.j); });
    g.validate();
    return g;
}

Graph ring(int n) {
    require(n >= 1, "ring needs n >= 1");
    Graph g;
    g.n = n;
    g.family = "ring";
    g.params = {{"n", n}};
    if (n == 2) add_edge(g, 0, 1);
    if (n >= 3)
        for (int i = 0; i < n; ++i) add_edge(g, i, (i + 1) % n);
    return finalize(std::move(g));
}

Graph line(int n) {
    require(n >= 1, "line needs n >= 1");
    Graph g;
    g.n = n;
    g.family = "line";
    g.params = {{"n", n}};
    for (int i = 0; i + 1 < n; ++i) add_edge(g, i, i + 1);
    return finalize(std::move(g));
}

Graph lattice2d(int nx, int ny, bool periodic_x, bool periodic_y) {
    require(nx >= 1 && ny >= 1, "lattice sides must be positive");
    require(!(periodic_x && nx < 3) && !(periodic_y && ny < 3), "periodic side needs length >= 3");
    Graph g;
    g.n = nx * ny;
    g.family = "lattice2d";
    g.params = {{"nx", nx}, {"ny", ny}, {"periodic_x", periodic_x}, {"periodic_y", periodic_y}};
    auto id = [nx](int x, int y) { return x + nx * y; };
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            if (x + 1 < nx) add_edge(g, id(x, y), id(x + 1, y));
            else if (periodic_x) add_edge(g, id(x, y), id(0, y));
            if (y + 1 < ny) add_edge(g, id(x, y), id(x, y + 1));
            else if (periodic_y) add_edge(g, id(x, y), id(x, 0));
        }
    }
    return finalize(std::move(g));
}

Graph star(int n) {
    require(n >= 2, "star needs n >= 2");
    Graph g;
    g.n = n;
    g.family = "star";
    g.params = {{"n", n}};
    for (int i = 1; i < n; ++i) add_edge(g, 0, i);
    return finalize(std::move(g));
}

Graph complete(int n) {
    require(n >= 1, "complete graph needs n >= 1");
    Graph g;
    g.n = n;
    g.family = "complete";
    g.params = {{"n", n}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) add_edge(g, i, j);
    return finalize(std::move(g));
}

Graph dendrimer(int generations, int f) {
    require(f >= 3, "dendrimer functionality must be >= 3");
    require(generations >= 1, "dendrimer needs G >= 1");
    Graph g;
    g.family = "dendrimer";
    g.params = {{"G", generations}, {"f", f}};
    int count = 1;
    std::vector<int> front{0};
    for (int gen = 1; gen <= generations; ++gen) {
        std::vector<int> next;
        const int branch = gen == 1 ? f : f - 1;
        for (int p : front) {
            for (int b = 0; b < branch; ++b) {
                add_edge(g, p, count);
                next.push_back(count++);
            }
        }
        front = std::move(next);
    }
    g.n = count;
    return finalize(std::move(g));
}

Graph husimi_cactus(int generations) {
    // one node per dendrimer bond, in bond creation order
    const Graph d = dendrimer(generations, 3);
    std::vector<std::vector<int>> incident(d.n);
    int k = 0;
    // edges of d are sorted by (parent, child), which is the creation order
    for (const auto& e : d.edges) {
        incident[e.i].push_back(k);
        incident[e.j].push_back(k);
        ++k;
    }
    Graph g;
    g.n = static_cast<int>(d.edges.size());
    g.family = "husimi_cactus";
    g.params = {{"G", generations}};
    for (const auto& inc : incident)
        for (std::size_t a = 0; a < inc.size(); ++a)
            for (std::size_t b = a + 1; b < inc.size(); ++b) add_edge(g, inc[a], inc[b]);
    return finalize(std::move(g));
}

Graph glued_cayley(int generations) {
    require(generations >= 1, "glued trees need G >= 1");
    const int G = generations;
    const int top = (1 << (G + 1)) - 1;      // complete binary tree of depth G
    const int bottom_internal = (1 << G) - 1;
    Graph g;
    g.n = top + bottom_internal;
    g.family = "glued_cayley";
    g.params = {{"G", G}};
    for (int v = 0; 2 * v + 2 < top; ++v) {
        add_edge(g, v, 2 * v + 1);
        add_edge(g, v, 2 * v + 2);
    }
    // bottom tree: internal node v maps to top + v, leaves are shared one-to-one
    auto bottom = [&](int v) { return v < bottom_internal ? top + v : v; };
    for (int v = 0; v < bottom_internal; ++v) {
        add_edge(g, bottom(v), bottom(2 * v + 1));
        add_edge(g, bottom(v), bottom(2 * v + 2));
    }
    return finalize(std::move(g));
}

ClusterPartition glued_cayley_partition(int generations) {
    const int G = generations;
    require(G >= 1, "glued trees need G >= 1");
    const int top = (1 << (G + 1)) - 1;
    auto level = [](int depth) { return std::pair((1 << depth) - 1, 1 << depth); };  // first index, count
    ClusterPartition p;
    std::vector<std::vector<int>> left, right;
    for (int depth = G; depth >= 1; --depth) {
        auto [first, cnt] = level(depth);
        std::vector<int> l, r;
        for (int a = 0; a < cnt; ++a) {
            const int v = first + a;
            (a < cnt / 2 ? l : r).push_back(v);
            if (depth < G) (a < cnt / 2 ? l : r).push_back(top + v);
        }
        std::sort(l.begin(), l.end());
        std::sort(r.begin(), r.end());
        left.push_back(l);
        right.push_back(r);
    }
    p.clusters = left;
    p.clusters.push_back({0, top});
    for (auto it = right.rbegin(); it != right.rend(); ++it) p.clusters.push_back(*it);
    return p;
}

std::vector<int> dsg_corners(int generation) {
    require(generation >= 1, "dsg needs g >= 1");
    int n = 3;
    std::vector<int> c{0, 1, 2};
    for (int gen = 2; gen <= generation; ++gen) {
        c = {c[0], c[1] + n, c[2] + 2 * n};
        n *= 3;
    }
    return c;
}

Graph dsg(int generation) {
    require(generation >= 1, "dsg needs g >= 1");
    Graph g;
    g.n = 3;
    g.edges = {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
    std::vector<int> c{0, 1, 2};
    for (int gen = 2; gen <= generation; ++gen) {
        const int n = g.n;
        std::vector<Edge> e;
        for (int k = 0; k < 3; ++k)
            for (const auto& x : g.edges) e.push_back({x.i + k * n, x.j + k * n, 1.0});
        // copy k keeps its corner k outside; the other corners link pairwise
        e.push_back({c[1], c[0] + n, 1.0});
        e.push_back({c[2], c[0] + 2 * n, 1.0});
        e.push_back({c[2] + n, c[1] + 2 * n, 1.0});
        g.edges = std::move(e);
        c = {c[0], c[1] + n, c[2] + 2 * n};
        g.n = 3 * n;
    }
    g.family = "dsg";
    g.params = {{"g", generation}};
    return finalize(std::move(g));
}

Graph vicsek(int f, int generation) {
    require(f >= 2, "vicsek needs f >= 2");
    require(generation >= 1, "vicsek needs g >= 1");
    Graph g;
    g.n = f + 1;
    std::vector<int> corners;
    for (int i = 1; i <= f; ++i) {
        g.edges.push_back({0, i, 1.0});
        corners.push_back(i);
    }
    for (int gen = 2; gen <= generation; ++gen) {
        const int n = g.n;
        std::vector<Edge> e;
        for (int k = 0; k <= f; ++k)
            for (const auto& x : g.edges) e.push_back({x.i + k * n, x.j + k * n, 1.0});
        std::vector<int> next(f);
        for (int i = 0; i < f; ++i) {
            const int k = i + 1;
            const int facing = (i + f / 2) % f;
            e.push_back({corners[i], corners[facing] + k * n, 1.0});
            next[i] = corners[i] + k * n;
        }
        g.edges = std::move(e);
        corners = std::move(next);
        g.n = (f + 1) * n;
    }
    g.family = "vicsek";
    g.params = {{"f", f}, {"g", generation}};
    return finalize(std::move(g));
}

Graph apollonian(int generation) {
    require(generation >= 0, "apollonian needs G >= 0");
    Graph g;
    g.family = "apollonian";
    g.params = {{"G", generation}};
    add_edge(g, 0, 1);
    add_edge(g, 0, 2);
    add_edge(g, 1, 2);
    int n = 3;
    std::vector<std::array<int, 3>> tris{{0, 1, 2}};
    for (int gen = 1; gen <= generation; ++gen) {
        std::vector<std::array<int, 3>> next;
        for (const auto& t : tris) {
            const int v = n++;
            for (int a : t) add_edge(g, a, v);
            next.push_back({t[0], t[1], v});
            next.push_back({t[0], t[2], v});
            next.push_back({t[1], t[2], v});
        }
        tris = std::move(next);
    }
    g.n = n;
    return finalize(std::move(g));
}

Graph hypercycle(int n, int d) {
    require(n >= 3 && d >= 1, "hypercycle needs n >= 3 and d >= 1");
    int total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    Graph g;
    g.n = total;
    g.family = "hypercycle";
    g.params = {{"n", n}, {"d", d}};
    for (int v = 0; v < total; ++v) {
        int stride = 1;
        for (int a = 0; a < d; ++a) {
            const int xa = (v / stride) % n;
            const int w = v + (((xa + 1) % n) - xa) * stride;
            add_edge(g, v, w);
            stride *= n;
        }
    }
    return finalize(std::move(g));
}

Graph long_range_ring(int n, double exponent, int r_max) {
    require(n >= 3, "long-range ring needs n >= 3");
    require(exponent >= 2.0, "exponent must be >= 2");
    if (r_max < 0) r_max = n / 2;
    Graph g;
    g.n = n;
    g.family = "long_range_ring";
    g.params = {{"n", n}, {"exponent", std::isinf(exponent) ? -1.0 : exponent}, {"r_max", r_max}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int R = std::min(j - i, n - (j - i));
            if (R > r_max) continue;
            if (std::isinf(exponent)) {
                if (R == 1) add_edge(g, i, j);
            } else {
                add_edge(g, i, j, std::pow(static_cast<double>(R), -exponent));
            }
        }
    }
    return finalize(std::move(g));
}

Graph m_neighbor_ring(int n, int m) {
    require(m >= 1 && 2 * m < n, "m-neighbour ring needs 1 <= m < n/2");
    Graph g;
    g.n = n;
    g.family = "m_neighbor_ring";
    g.params = {{"n", n}, {"m", m}};
    for (int i = 0; i < n; ++i)
        for (int r = 1; r <= m; ++r) add_edge(g, i, (i + r) % n);
    return finalize(std::move(g));
}

Graph long_range_chain(int n, double nu, int r_max) {
    require(n >= 2, "chain needs n >= 2");
    require(nu >= 2.0, "exponent must be >= 2");
    if (r_max < 0) r_max = n - 1;
    Graph g;
    g.n = n;
    g.family = "long_range_chain";
    g.params = {{"n", n}, {"nu", std::isinf(nu) ? -1.0 : nu}, {"r_max", r_max}};
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n && j - i <= r_max; ++j) {
            if (std::isinf(nu)) {
                if (j - i == 1) add_edge(g, i, j);
            } else {
                add_edge(g, i, j, std::pow(static_cast<double>(j - i), -nu));
            }
        }
    }
    return finalize(std::move(g));
}

Graph geometric_from_coords(const std::vector<std::array<double, 3>>& coords) {
    Graph g;
    g.n = static_cast<int>(coords.size());
    require(g.n >= 1, "need at least one point");
    g.coords = coords;
    g.family = "random_geometric";
    for (int i = 0; i < g.n; ++i) {
        for (int j = i + 1; j < g.n; ++j) {
            double r2 = 0.0;
            for (int a = 0; a < 3; ++a) r2 += (coords[i][a] - coords[j][a]) * (coords[i][a] - coords[j][a]);
            require(r2 > 0.0, "coincident points");
            add_edge(g, i, j, std::pow(r2, -1.5));
        }
    }
    return finalize(std::move(g));
}

Eigen::MatrixXd coupling_matrix(const Graph& g, double gamma) {
    require(gamma > 0.0, "coupling rate must be positive");
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.n, g.n);
    for (const auto& e : g.edges) {
        A(e.i, e.j) -= gamma * e.w;
        A(e.j, e.i) -= gamma * e.w;
        A(e.i, e.i) += gamma * e.w;
        A(e.j, e.j) += gamma * e.w;
    }
    return A;
}

Eigen::MatrixXd collapse_clusters(const Graph& g, ClusterPartition& p, bool require_tridiagonal) {
    const int K = static_cast<int>(p.clusters.size());
    std::vector<int> owner(g.n, -1);
    for (int k = 0; k < K; ++k) {
        for (int v : p.clusters[k]) {
            require(v >= 0 && v < g.n && owner[v] < 0, "clusters must partition the nodes");
            owner[v] = k;
        }
    }
    require(std::find(owner.begin(), owner.end(), -1) == owner.end(), "clusters must cover every node");
    const auto s = g.strengths();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(K, K);
    std::vector<double> internal(K, 0.0);
    for (const auto& e : g.edges) {
        const int a = owner[e.i], b = owner[e.j];
        if (a == b) {
            internal[a] += e.w;
        } else {
            B(a, b) += e.w;
            B(b, a) += e.w;
        }
    }
    p.d.assign(K, 0);
    for (int k = 0; k < K; ++k) {
        p.d[k] = static_cast<int>(p.clusters[k].size());
        for (int v : p.clusters[k])
            require(std::abs(s[v] - s[p.clusters[k][0]]) < 1e-12, "mixed functionality inside a cluster");
    }
    p.b.assign(K > 0 ? K - 1 : 0, 0);
    for (int k = 0; k + 1 < K; ++k) p.b[k] = static_cast<int>(std::lround(B(k, k + 1)));
    Eigen::MatrixXd At = Eigen::MatrixXd::Zero(K, K);
    for (int k = 0; k < K; ++k) {
        At(k, k) = s[p.clusters[k][0]] - 2.0 * internal[k] / p.d[k];
        for (int l = 0; l < K; ++l) {
            if (l == k || B(k, l) == 0.0) continue;
            require(!require_tridiagonal || std::abs(k - l) == 1, "collapsed matrix is not tridiagonal");
            At(k, l) = -B(k, l) / std::sqrt(static_cast<double>(p.d[k]) * p.d[l]);
        }
    }
    return At;
}

nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges) edges.push_back({e.i + 1, e.j + 1, e.w});
    j["edges"] = edges;
    if (!g.coords.empty()) j["coords"] = g.coords;
    j["family"] = g.family;
    j["params"] = g.params;
    if (g.seed) j["seed"] = *g.seed;
    return j;
}

Graph graph_from_json(const nlohmann::json& j) {
    Graph g;
    g.n = j.at("n").get<int>();
    for (const auto& e : j.at("edges")) {
        const double w = e.size() > 2 ? e[2].get<double>() : 1.0;
        add_edge(g, e[0].get<int>() - 1, e[1].get<int>() - 1, w);
    }
    if (j.contains("coords")) g.coords = j["coords"].get<std::vector<std::array<double, 3>>>();
    g.family = j.value("family", std::string("custom"));
    if (j.contains("params")) g.params = j["params"];
    if (j.contains("seed")) g.seed = j["seed"].get<std::uint64_t>();
    return finalize(std::move(g));
}

Graph build_graph(const nlohmann::json& spec) {
    const std::string fam = spec.at("family").get<std::string>();
    auto geti = [&](const char* key) { return spec.at(key).get<int>(); };
    if (fam == "ring") return ring(geti("n"));
    if (fam == "line") return line(geti("n"));
    if (fam == "lattice2d")
        return lattice2d(geti("nx"), geti("ny"), spec.value("periodic_x", false), spec.value("periodic_y", false));
    if (fam == "star") return star(geti("n"));
    if (fam == "complete") return complete(geti("n"));
    if (fam == "dendrimer") return dendrimer(geti("G"), spec.value("f", 3));
    if (fam == "husimi_cactus") return husimi_cactus(geti("G"));
    if (fam == "glued_cayley") return glued_cayley(geti("G"));
    if (fam == "dsg") return dsg(geti("g"));
    if (fam == "vicsek") return vicsek(geti("f"), geti("g"));
    if (fam == "apollonian") return apollonian(geti("G"));
    if (fam == "hypercycle") return hypercycle(geti("n"), geti("d"));
    if (fam == "long_range_ring" || fam == "m_neighbor_ring" || fam == "long_range_chain" ||
        fam == "random_geometric")
        return build_weighted(spec);
    if (fam == "small_world" || fam == "erdos_renyi" || fam == "watts_strogatz" || fam == "scale_free")
        return build_random_graph(spec, spec.at("seed").get<std::uint64_t>());
    throw GraphError("unknown graph family: " + fam);
}

Graph build_weighted(const nlohmann::json& spec) {
    const std::string fam = spec.at("family").get<std::string>();
    auto exponent = [&](const char* key) {
        const auto& v = spec.at(key);
        if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        return v.get<double>();
    };
    if (fam == "long_range_ring")
        return long_range_ring(spec.at("n").get<int>(), exponent("exponent"), spec.value("r_max", -1));
    if (fam == "m_neighbor_ring") return m_neighbor_ring(spec.at("n").get<int>(), spec.at("m").get<int>());
    if (fam == "long_range_chain")
        return long_range_chain(spec.at("n").get<int>(), exponent("nu"), spec.value("r_max", -1));
    if (fam == "random_geometric")
        return random_geometric(spec.at("n").get<int>(), spec.at("seed").get<std::uint64_t>(),
                                spec.value("box", -1.0));
    throw GraphError("unknown weighted family: " + fam);
}

}  // namespace qwalk
