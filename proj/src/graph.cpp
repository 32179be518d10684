#include "dcsbm/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace dcsbm {

Graph Graph::from_adjacency(std::vector<std::vector<int>> adj) {
    const int n = static_cast<int>(adj.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(adj[i].size()) != n)
            throw std::runtime_error("graph: adjacency matrix is not square");
    }
    long long total = 0;
    for (int i = 0; i < n; ++i) {
        if (adj[i][i] < 0 || adj[i][i] % 2 != 0)
            throw std::runtime_error("graph: diagonal entry A(" + std::to_string(i + 1) +
                                     "," + std::to_string(i + 1) + ") must be even and >= 0");
        for (int j = 0; j < n; ++j) {
            if (adj[i][j] < 0)
                throw std::runtime_error("graph: negative adjacency entry");
            if (adj[i][j] != adj[j][i])
                throw std::runtime_error("graph: adjacency matrix is not symmetric");
            total += adj[i][j];
        }
    }

    Graph g;
    g.n_ = n;
    g.adj_ = std::move(adj);
    g.degrees_.assign(n, 0);
    g.neighbors_.assign(n, {});
    for (int i = 0; i < n; ++i) {
        int k = 0;
        for (int j = 0; j < n; ++j) {
            k += g.adj_[i][j];
            if (j != i && g.adj_[i][j] > 0) g.neighbors_[i].emplace_back(j, g.adj_[i][j]);
        }
        g.degrees_[i] = k;
    }
    g.m_ = total / 2;
    return g;
}

bool Assignment::valid() const {
    if (K < 1) return false;
    for (int l : labels)
        if (l < 0 || l >= K) return false;
    return true;
}

bool Assignment::is_canonical() const {
    int max_seen = -1;
    for (int l : labels) {
        if (l > max_seen + 1) return false;
        max_seen = std::max(max_seen, l);
    }
    return true;
}

Assignment canonicalize(const Assignment& a) {
    Assignment out;
    out.K = a.K;
    out.labels.resize(a.labels.size());
    std::vector<int> remap(a.K, -1);
    int next = 0;
    for (size_t i = 0; i < a.labels.size(); ++i) {
        int l = a.labels[i];
        if (remap[l] < 0) remap[l] = next++;
        out.labels[i] = remap[l];
    }
    return out;
}

bool AffinityMatrix::symmetric_nonnegative(double tol) const {
    for (int r = 0; r < K; ++r)
        for (int s = 0; s < K; ++s) {
            if ((*this)(r, s) < -tol) return false;
            if ((*this)(r, s) != (*this)(s, r)) return false;
        }
    return true;
}

} // namespace dcsbm
