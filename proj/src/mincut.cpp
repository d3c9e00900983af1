#include "plates/mincut.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace plates {

namespace {

struct Dinic {
    struct Edge {
        int to;
        double cap;
        int rev;
    };
    std::vector<std::vector<Edge>> g;
    std::vector<int> level, iter;

    explicit Dinic(int n) : g(n), level(n), iter(n) {}

    void add_edge(int from, int to, double cap, double rev_cap = 0.0)
    {
        g[from].push_back({to, cap, int(g[to].size())});
        g[to].push_back({from, rev_cap, int(g[from].size()) - 1});
    }

    bool bfs(int s, int t)
    {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        level[s] = 0;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : g[v])
                if (e.cap > 1e-15 && level[e.to] < 0) {
                    level[e.to] = level[v] + 1;
                    q.push(e.to);
                }
        }
        return level[t] >= 0;
    }

    double dfs(int v, int t, double f)
    {
        if (v == t) return f;
        for (int& i = iter[v]; i < int(g[v].size()); ++i) {
            Edge& e = g[v][i];
            if (e.cap > 1e-15 && level[v] < level[e.to]) {
                double d = dfs(e.to, t, std::min(f, e.cap));
                if (d > 0.0) {
                    e.cap -= d;
                    g[e.to][e.rev].cap += d;
                    return d;
                }
            }
        }
        return 0.0;
    }

    void max_flow(int s, int t)
    {
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (dfs(s, t, std::numeric_limits<double>::infinity()) > 0.0) {}
        }
    }

    // Nodes reachable from s in the residual graph (the minimal source side).
    std::vector<char> source_side(int s)
    {
        std::vector<char> vis(g.size(), 0);
        std::queue<int> q;
        vis[s] = 1;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : g[v])
                if (e.cap > 1e-15 && !vis[e.to]) {
                    vis[e.to] = 1;
                    q.push(e.to);
                }
        }
        return vis;
    }

    // Nodes with a residual path to t; their complement is the maximal
    // source side.
    std::vector<char> sink_side(int t)
    {
        std::vector<char> vis(g.size(), 0);
        std::queue<int> q;
        vis[t] = 1;
        q.push(t);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (const Edge& e : g[v])
                if (g[e.to][e.rev].cap > 1e-15 && !vis[e.to]) {
                    vis[e.to] = 1;
                    q.push(e.to);
                }
        }
        return vis;
    }
};

}  // namespace

std::vector<int> min_cut_binary(int n, const std::vector<double>& cost1,
                                const std::vector<std::tuple<int, int, double>>& edges,
                                const std::vector<int>& pin, bool prefer_ones)
{
    if (int(cost1.size()) != n || int(pin.size()) != n)
        throw std::invalid_argument("min_cut_binary: size mismatch");
    const int s = n, t = n + 1;
    const double big = 1e18;
    Dinic d(n + 2);
    // Label 1 = source side: the cut pays cap(i -> t) for label 1 and
    // cap(s -> i) for label 0.
    for (int i = 0; i < n; ++i) {
        double c = cost1[i];
        if (pin[i] == 1)
            d.add_edge(s, i, big);
        else if (pin[i] == 0)
            d.add_edge(i, t, big);
        if (c > 0.0)
            d.add_edge(i, t, c);
        else if (c < 0.0)
            d.add_edge(s, i, -c);
    }
    for (const auto& [i, j, w] : edges) {
        if (w < 0.0) throw std::invalid_argument("min_cut_binary: negative edge weight");
        if (w > 0.0) d.add_edge(i, j, w, w);
    }
    d.max_flow(s, t);
    std::vector<int> x(n);
    if (prefer_ones) {
        std::vector<char> snk = d.sink_side(t);
        for (int i = 0; i < n; ++i) x[i] = snk[i] ? 0 : 1;
    } else {
        std::vector<char> src = d.source_side(s);
        for (int i = 0; i < n; ++i) x[i] = src[i] ? 1 : 0;
    }
    return x;
}

double binary_label_energy(const std::vector<int>& x, const std::vector<double>& cost1,
                           const std::vector<std::tuple<int, int, double>>& edges)
{
    double e = 0.0;
    for (std::size_t i = 0; i < cost1.size(); ++i) e += cost1[i] * x[i];
    for (const auto& [i, j, w] : edges)
        if (x[i] != x[j]) e += w;
    return e;
}

}  // namespace plates
