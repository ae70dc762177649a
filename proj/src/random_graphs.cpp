#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "qwalk/graph.hpp"
#include "qwalk/rng.hpp"

namespace qwalk {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw GraphError(msg);
}

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair(a, b) : std::pair(b, a); }

}  // namespace

Graph small_world(int n, int extra_bonds, std::uint64_t seed) {
    require(n >= 3, "small-world needs n >= 3");
    const long long avail = static_cast<long long>(n) * (n - 3) / 2;
    require(extra_bonds >= 0 && extra_bonds <= avail, "infeasible number of extra bonds");
    Graph g = ring(n);
    g.family = "small_world";
    g.params = {{"n", n}, {"B", extra_bonds}};
    g.seed = seed;
    // enumerate candidate non-ring pairs, then a partial Fisher-Yates draw
    std::vector<std::pair<int, int>> cand;
    cand.reserve(static_cast<std::size_t>(avail));
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j)
            if (!(i == 0 && j == n - 1)) cand.emplace_back(i, j);
    Rng rng(seed);
    for (int k = 0; k < extra_bonds; ++k) {
        const std::size_t pick = k + rng.below(cand.size() - k);
        std::swap(cand[k], cand[pick]);
        g.edges.push_back({cand[k].first, cand[k].second, 1.0});
    }
    return finalize(std::move(g));
}

Graph erdos_renyi(int n, double p, std::uint64_t seed) {
    require(n >= 1, "ER needs n >= 1");
    require(p >= 0.0 && p <= 1.0, "p must lie in [0,1]");
    Graph g;
    g.n = n;
    g.family = "erdos_renyi";
    g.params = {{"n", n}, {"p", p}};
    g.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < p) g.edges.push_back({i, j, 1.0});
    return finalize(std::move(g));
}

Graph watts_strogatz(int n, double p_rewire, std::uint64_t seed) {
    require(n >= 4, "Watts-Strogatz needs n >= 4");
    require(p_rewire >= 0.0 && p_rewire <= 1.0, "rewiring probability must lie in [0,1]");
    Rng rng(seed);
    std::set<std::pair<int, int>> present;
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i < n; ++i) {
        bonds.push_back(ordered(i, (i + 1) % n));
        present.insert(bonds.back());
    }
    for (int i = 0; i < n; ++i) {
        if (rng.uniform() >= p_rewire) continue;
        // keep node i, move the other end; bounded retries then leave the bond
        for (int attempt = 0; attempt < 64; ++attempt) {
            const int k = static_cast<int>(rng.below(n));
            const auto cand = ordered(i, k);
            if (k == i || present.count(cand)) continue;
            present.erase(bonds[i]);
            bonds[i] = cand;
            present.insert(cand);
            break;
        }
    }
    Graph g;
    g.n = n;
    g.family = "watts_strogatz";
    g.params = {{"n", n}, {"p", p_rewire}};
    g.seed = seed;
    for (const auto& b : bonds) g.edges.push_back({b.first, b.second, 1.0});
    return finalize(std::move(g));
}

Graph scale_free(int n, std::uint64_t seed) {
    require(n >= 2, "scale-free tree needs n >= 2");
    Graph g;
    g.n = n;
    g.family = "scale_free";
    g.params = {{"n", n}};
    g.seed = seed;
    Rng rng(seed);
    // each bond contributes both ends, so a uniform pick is degree-proportional
    std::vector<int> ends{0, 1};
    g.edges.push_back({0, 1, 1.0});
    for (int v = 2; v < n; ++v) {
        const int target = ends[rng.below(ends.size())];
        g.edges.push_back({target, v, 1.0});
        ends.push_back(target);
        ends.push_back(v);
    }
    return finalize(std::move(g));
}

Graph random_geometric(int n, std::uint64_t seed, double box) {
    require(n >= 1, "need n >= 1");
    if (box <= 0.0) box = n;
    Rng rng(seed);
    std::vector<std::array<double, 3>> pts(n);
    for (auto& p : pts)
        for (auto& x : p) x = box * rng.uniform();
    Graph g = geometric_from_coords(pts);
    g.params = {{"n", n}, {"box", box}};
    g.seed = seed;
    return g;
}

Graph build_random_graph(const nlohmann::json& spec, std::uint64_t seed) {
    const std::string fam = spec.at("family").get<std::string>();
    const int n = spec.at("n").get<int>();
    if (fam == "small_world") return small_world(n, spec.at("B").get<int>(), seed);
    if (fam == "erdos_renyi") {
        const double p = spec.contains("p") ? spec["p"].get<double>() : spec.at("k_mean").get<double>() / (n - 1);
        return erdos_renyi(n, p, seed);
    }
    if (fam == "watts_strogatz") return watts_strogatz(n, spec.at("p").get<double>(), seed);
    if (fam == "scale_free") return scale_free(n, seed);
    if (fam == "random_geometric") return random_geometric(n, seed, spec.value("box", -1.0));
    throw GraphError("unknown random family: " + fam);
}

}  // namespace qwalk
