#pragma once

#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/knn_engine.hpp"
#include "conformal/nonconformity.hpp"
#include "conformal/prediction.hpp"
#include "conformal/rng.hpp"

namespace conformal {

// Plain p-value of the last (test) score: the fraction of scores at least as
// large as it. Always >= 1/n because the test example counts itself.
double p_value(const Scores& scores);

// Tie-smoothed p-value: strict exceedances plus eta times the ties, over n.
double smoothed_p_value(const Scores& scores, double eta);

// One p-value per candidate label: complete the sequence with the candidate,
// score it, rank the candidate's score. When smoothed, one tie-breaking
// uniform is drawn per candidate in alphabet order from `tape`.
PValueTable classify_p_table(const Dataset& training, const std::vector<double>& object,
                             const Measure& measure, bool smoothed, RngStream& tape);

namespace serial {
PValueTable classify_p_table(const Dataset& training, const std::vector<double>& object,
                             const Measure& measure, bool smoothed, RngStream& tape);
}

// Fast path for the nearest-neighbour measure via the incremental scorer;
// identical output to classify_p_table with make_knn_measure.
PValueTable knn_p_table(const KnnScorer& scorer, const std::vector<std::string>& labels,
                        const std::vector<double>& object, bool smoothed, RngStream& tape);

// Labels whose p-value strictly exceeds epsilon.
PredictionSet prediction_set(const PValueTable& table, Epsilon eps);

// Point prediction (argmax p, ties to the lowest alphabet index), confidence
// (1 - second largest p) and credibility (largest p).
ConfidenceCredibility summarize(const PValueTable& table);

}  // namespace conformal
