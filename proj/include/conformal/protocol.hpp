#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "conformal/dataset.hpp"
#include "conformal/knn_engine.hpp"
#include "conformal/nonconformity.hpp"
#include "conformal/prediction.hpp"
#include "conformal/predictor.hpp"
#include "conformal/rng.hpp"

namespace conformal {

// When the true label of each stream object becomes known to the predictor.
class TeacherSchedule {
public:
    static TeacherSchedule immediate();
    static TeacherSchedule lazy(std::size_t period);        // only steps divisible by period
    static TeacherSchedule slow(std::size_t delay);         // label n arrives after step n+delay
    static TeacherSchedule explicit_steps(std::vector<std::size_t> steps);  // k-th feedback at
                                                            // step n_k reveals the oldest
                                                            // unrevealed label
    static TeacherSchedule batch(std::size_t horizon);      // no feedback after step horizon

    // 1-based indices of stream objects revealed at the end of step n.
    std::vector<std::size_t> reveals_at(std::size_t n) const;

private:
    enum class Kind { Immediate, Lazy, Slow, Explicit, Batch };
    TeacherSchedule(Kind kind, std::size_t param) : kind_(kind), param_(param) {}
    Kind kind_;
    std::size_t param_ = 0;
    std::vector<std::size_t> steps_;
};

// Per-step indicators and the (smoothed) p-value of the true label, for each
// significance level of a run.
struct ProtocolLedger {
    std::vector<double> eps;                       // levels, as given
    std::vector<std::vector<std::uint8_t>> err;    // err[e][n-1]: true label outside the set
    std::vector<std::vector<std::uint8_t>> mult;   // more than one label
    std::vector<std::vector<std::uint8_t>> emp;    // empty set (implies err)
    std::vector<double> true_p;                    // p-value of the true label per step

    std::size_t steps() const { return true_p.size(); }
    std::size_t err_total(std::size_t e) const;
    std::size_t mult_total(std::size_t e) const;
    std::size_t emp_total(std::size_t e) const;
    static std::vector<std::uint32_t> cumulative(const std::vector<std::uint8_t>& bits);
};

// Classification predictor usable in the on-line protocol: p_table must not
// mutate shared state (batch runs call it concurrently); observe feeds one
// revealed example.
class OnlineClassifier {
public:
    virtual ~OnlineClassifier() = default;
    virtual PValueTable p_table(const std::vector<double>& object, RngStream& tape) const = 0;
    virtual void observe(const Example& ex) = 0;
};

// Nearest-neighbour conformal predictor over the incremental scorer.
std::unique_ptr<OnlineClassifier> make_knn_conformal(KnnConfig cfg, const LabelSpace& space,
                                                     std::size_t dim, bool smoothed);

// Conformal predictor over an arbitrary measure (full recomputation per
// candidate; for small runs and cross-checks).
std::unique_ptr<OnlineClassifier> make_measure_conformal(Measure measure, const LabelSpace& space,
                                                         std::size_t dim, bool smoothed);

// One pass of the on-line protocol: predict object n from the labels the
// schedule has revealed so far, record err/mult/emp per level, then apply
// the schedule's end-of-step reveals.
ProtocolLedger run_online(const Dataset& stream, OnlineClassifier& predictor,
                          const std::vector<Epsilon>& eps_list, const TeacherSchedule& schedule,
                          const SmoothingTape& tape);

// Batch setting: the predictor observes the full training set, then predicts
// every test object with no further feedback. Step substreams continue the
// online numbering, so this matches run_online with a batch schedule.
ProtocolLedger run_batch(const Dataset& training, const Dataset& test,
                         OnlineClassifier& predictor, const std::vector<Epsilon>& eps_list,
                         const SmoothingTape& tape);

struct CalibrationReport {
    double error_rate = 0.0;
    double multiple_rate = 0.0;
    double empty_rate = 0.0;
    double error_slope = 0.0;  // least-squares slope of cumulative errors vs n
    std::vector<std::uint32_t> cum_err, cum_mult, cum_emp;
};

CalibrationReport calibration_report(const ProtocolLedger& ledger, Epsilon eps);

}  // namespace conformal
