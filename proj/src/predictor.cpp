#include "conformal/predictor.hpp"

#include <cmath>
#include <exception>

namespace conformal {

namespace {

void check_scores(const Scores& scores) {
    if (scores.empty()) throw UsageError("p-value of an empty score vector");
    for (double a : scores) {
        if (std::isnan(a)) throw NumericError("nonconformity score is NaN");
    }
}

std::vector<double> draw_etas(bool smoothed, std::size_t count, RngStream& tape) {
    std::vector<double> etas(count, 1.0);
    if (smoothed) {
        for (auto& e : etas) e = tape.next_uniform();
    }
    return etas;
}

void validate_classify_input(const Dataset& training, const std::vector<double>& object) {
    if (!training.is_classification())
        throw UsageError("classify_p_table needs a classification dataset");
    if (object.size() != training.dim())
        throw UsageError("classify_p_table: object dimension mismatch");
}

}  // namespace

double p_value(const Scores& scores) {
    check_scores(scores);
    const double test = scores.back();
    std::size_t ge = 0;
    for (double a : scores) {
        if (a >= test) ++ge;
    }
    return static_cast<double>(ge) / static_cast<double>(scores.size());
}

double smoothed_p_value(const Scores& scores, double eta) {
    check_scores(scores);
    if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("smoothing eta must lie in [0, 1]");
    const double test = scores.back();
    std::size_t gt = 0, eq = 0;
    for (double a : scores) {
        if (a > test)
            ++gt;
        else if (a == test)
            ++eq;
    }
    return (static_cast<double>(gt) + eta * static_cast<double>(eq)) /
           static_cast<double>(scores.size());
}

namespace serial {

PValueTable classify_p_table(const Dataset& training, const std::vector<double>& object,
                             const Measure& measure, bool smoothed, RngStream& tape) {
    validate_classify_input(training, object);
    const auto& symbols = training.label_space().symbols();
    const std::size_t c = symbols.size();
    const auto etas = draw_etas(smoothed, c, tape);

    PValueTable table;
    table.labels = symbols;
    table.p.resize(c);
    for (std::size_t y = 0; y < c; ++y) {
        Dataset seq = complete(training, object, Label::of_class(static_cast<int>(y)));
        Scores alpha = measure(seq);
        if (alpha.size() != seq.size())
            throw UsageError("measure returned a score vector of the wrong length");
        table.p[y] = smoothed ? smoothed_p_value(alpha, etas[y]) : p_value(alpha);
    }
    return table;
}

}  // namespace serial

PValueTable classify_p_table(const Dataset& training, const std::vector<double>& object,
                             const Measure& measure, bool smoothed, RngStream& tape) {
    validate_classify_input(training, object);
    const auto& symbols = training.label_space().symbols();
    const std::size_t c = symbols.size();
    const auto etas = draw_etas(smoothed, c, tape);

    PValueTable table;
    table.labels = symbols;
    table.p.resize(c);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t y = 0; y < static_cast<std::ptrdiff_t>(c); ++y) {
        try {
            Dataset seq = complete(training, object, Label::of_class(static_cast<int>(y)));
            Scores alpha = measure(seq);
            if (alpha.size() != seq.size())
                throw UsageError("measure returned a score vector of the wrong length");
            table.p[y] = smoothed ? smoothed_p_value(alpha, etas[y]) : p_value(alpha);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

PValueTable knn_p_table(const KnnScorer& scorer, const std::vector<std::string>& labels,
                        const std::vector<double>& object, bool smoothed, RngStream& tape) {
    const std::size_t c = labels.size();
    const auto etas = draw_etas(smoothed, c, tape);

    PValueTable table;
    table.labels = labels;
    table.p.resize(c);
    for (std::size_t y = 0; y < c; ++y) {
        Scores alpha = scorer.scores_with(object, static_cast<int>(y));
        table.p[y] = smoothed ? smoothed_p_value(alpha, etas[y]) : p_value(alpha);
    }
    return table;
}

PredictionSet prediction_set(const PValueTable& table, Epsilon eps) {
    std::vector<int> ids;
    for (std::size_t i = 0; i < table.p.size(); ++i) {
        if (table.p[i] > eps.value()) ids.push_back(static_cast<int>(i));
    }
    return PredictionSet::of_labels(std::move(ids));
}

ConfidenceCredibility summarize(const PValueTable& table) {
    if (table.size() < 2) throw UsageError("summarize needs an alphabet of at least two labels");
    std::size_t best = 0;
    for (std::size_t i = 1; i < table.p.size(); ++i) {
        if (table.p[i] > table.p[best]) best = i;
    }
    double second = -1.0;
    for (std::size_t i = 0; i < table.p.size(); ++i) {
        if (i != best && table.p[i] > second) second = table.p[i];
    }
    ConfidenceCredibility out;
    out.prediction = static_cast<int>(best);
    out.confidence = 1.0 - second;
    out.credibility = table.p[best];
    return out;
}

}  // namespace conformal
