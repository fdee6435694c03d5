#pragma once

#include <cstddef>
#include <vector>

#include "conformal/nonconformity.hpp"

namespace conformal {

// Incremental nearest-neighbour bookkeeping. Appending an example updates
// every stored example's per-class k-smallest distance lists in O(n (p + k));
// scoring a completed sequence (stored examples plus one candidate-labelled
// test object) is O(n (p + Ck)) instead of the O(n^2) full recomputation.
// Produces bit-identical scores to serial::knn_scores on the same sequence.
class KnnScorer {
public:
    KnnScorer(KnnConfig cfg, std::size_t dim, std::size_t n_classes);

    void add(const std::vector<double>& object, int class_id);
    std::size_t size() const { return objects_.size(); }

    // Scores of [stored examples..., (test_object, candidate)]; test last.
    Scores scores_with(const std::vector<double>& test_object, int candidate) const;

private:
    // Ascending list of at most k distances.
    using NearList = std::vector<double>;

    static void bounded_insert(NearList& list, double d, std::size_t k);
    double score_of(std::size_t same_avail, std::size_t other_avail,
                    const std::vector<double>& same_sorted,
                    const std::vector<double>& other_sorted) const;

    KnnConfig cfg_;
    std::size_t dim_;
    std::size_t n_classes_;
    std::vector<std::vector<double>> objects_;
    std::vector<int> labels_;
    std::vector<std::size_t> class_count_;
    std::vector<std::vector<NearList>> near_k_;  // near_k_[i][c]
};

}  // namespace conformal
