#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dcsbm {

// Undirected multigraph stored as a symmetric adjacency count matrix.
// A(i,j) is the multiplicity of edge {i,j} for i != j; A(i,i) is twice the
// number of self-loops at i, so sum_ij A(i,j) = 2m holds uniformly.
class Graph {
public:
    Graph() = default; // empty graph; populate via from_adjacency

    // Validates symmetry, nonnegativity and even diagonal; degrees and m are
    // always recomputed from the matrix.
    static Graph from_adjacency(std::vector<std::vector<int>> adj);

    int n() const { return n_; }
    long long m() const { return m_; }
    int adj(int i, int j) const { return adj_[i][j]; }
    int degree(int i) const { return degrees_[i]; }
    const std::vector<int>& degrees() const { return degrees_; }

    // incident edges of i excluding the diagonal entry: (j, A_ij) with A_ij > 0
    const std::vector<std::pair<int, int>>& neighbors(int i) const {
        return neighbors_[i];
    }

    // k_i * k_j / (2m)
    double expected_edges(int i, int j) const {
        return static_cast<double>(degrees_[i]) * degrees_[j] / (2.0 * m_);
    }

private:
    int n_ = 0;
    long long m_ = 0;
    std::vector<std::vector<int>> adj_;
    std::vector<int> degrees_;
    std::vector<std::vector<std::pair<int, int>>> neighbors_;
};

// Vertex -> community labeling. Labels are 0-based internally (0..K-1);
// the file format is 1-based and the parser converts.
struct Assignment {
    std::vector<int> labels;
    int K = 1;

    int n() const { return static_cast<int>(labels.size()); }
    bool valid() const;

    // true iff labels form a restricted-growth string:
    // labels[0] == 0 and labels[i] <= 1 + max(labels[0..i-1])
    bool is_canonical() const;
};

// Relabels communities by first occurrence so the result is a
// restricted-growth string; the induced partition is unchanged.
Assignment canonicalize(const Assignment& a);

// Symmetric K x K matrix of nonnegative Poisson rate multipliers.
struct AffinityMatrix {
    int K = 0;
    std::vector<double> w; // row-major K*K, kept symmetric

    AffinityMatrix() = default;
    explicit AffinityMatrix(int k) : K(k), w(static_cast<size_t>(k) * k, 0.0) {}

    double operator()(int r, int s) const { return w[static_cast<size_t>(r) * K + s]; }
    void set(int r, int s, double v) {
        w[static_cast<size_t>(r) * K + s] = v;
        w[static_cast<size_t>(s) * K + r] = v;
    }
    bool symmetric_nonnegative(double tol = 0.0) const;
};

// A problem instance: the observed graph, the target community count, and
// optional generation provenance.
struct Instance {
    Graph graph;
    int K = 1;
    std::optional<Assignment> ground_truth;
    std::optional<AffinityMatrix> gen_omega;
    std::optional<std::uint64_t> seed;
    std::string name; // file stem or suite id; informational
};

} // namespace dcsbm
