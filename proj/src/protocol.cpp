#include "conformal/protocol.hpp"

#include <algorithm>
#include <exception>

namespace conformal {

TeacherSchedule TeacherSchedule::immediate() {
    return TeacherSchedule(Kind::Immediate, 0);
}

TeacherSchedule TeacherSchedule::lazy(std::size_t period) {
    if (period < 1) throw UsageError("lazy teacher period must be >= 1");
    return TeacherSchedule(Kind::Lazy, period);
}

TeacherSchedule TeacherSchedule::slow(std::size_t delay) {
    return TeacherSchedule(Kind::Slow, delay);
}

TeacherSchedule TeacherSchedule::explicit_steps(std::vector<std::size_t> steps) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (steps[i] < 1) throw UsageError("explicit feedback steps are 1-based");
        if (i > 0 && steps[i] <= steps[i - 1])
            throw UsageError("explicit feedback steps must be strictly increasing");
    }
    TeacherSchedule s(Kind::Explicit, 0);
    s.steps_ = std::move(steps);
    return s;
}

TeacherSchedule TeacherSchedule::batch(std::size_t horizon) {
    return TeacherSchedule(Kind::Batch, horizon);
}

std::vector<std::size_t> TeacherSchedule::reveals_at(std::size_t n) const {
    switch (kind_) {
        case Kind::Immediate:
            return {n};
        case Kind::Lazy:
            return n % param_ == 0 ? std::vector<std::size_t>{n} : std::vector<std::size_t>{};
        case Kind::Slow:
            return n > param_ ? std::vector<std::size_t>{n - param_} : std::vector<std::size_t>{};
        case Kind::Explicit: {
            auto it = std::lower_bound(steps_.begin(), steps_.end(), n);
            if (it != steps_.end() && *it == n) {
                // k-th feedback reveals the oldest unrevealed object, i.e. object k.
                return {static_cast<std::size_t>(it - steps_.begin()) + 1};
            }
            return {};
        }
        case Kind::Batch:
            return n <= param_ ? std::vector<std::size_t>{n} : std::vector<std::size_t>{};
    }
    return {};
}

std::size_t ProtocolLedger::err_total(std::size_t e) const {
    std::size_t s = 0;
    for (auto b : err[e]) s += b;
    return s;
}

std::size_t ProtocolLedger::mult_total(std::size_t e) const {
    std::size_t s = 0;
    for (auto b : mult[e]) s += b;
    return s;
}

std::size_t ProtocolLedger::emp_total(std::size_t e) const {
    std::size_t s = 0;
    for (auto b : emp[e]) s += b;
    return s;
}

std::vector<std::uint32_t> ProtocolLedger::cumulative(const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint32_t> out(bits.size());
    std::uint32_t run = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        run += bits[i];
        out[i] = run;
    }
    return out;
}

namespace {

class KnnConformalOnline : public OnlineClassifier {
public:
    KnnConformalOnline(KnnConfig cfg, const LabelSpace& space, std::size_t dim, bool smoothed)
        : scorer_(cfg, dim, space.n_classes()), labels_(space.symbols()), smoothed_(smoothed) {}

    PValueTable p_table(const std::vector<double>& object, RngStream& tape) const override {
        return knn_p_table(scorer_, labels_, object, smoothed_, tape);
    }

    void observe(const Example& ex) override {
        scorer_.add(ex.object, ex.label.class_id());
    }

private:
    KnnScorer scorer_;
    std::vector<std::string> labels_;
    bool smoothed_;
};

class MeasureConformalOnline : public OnlineClassifier {
public:
    MeasureConformalOnline(Measure measure, const LabelSpace& space, std::size_t dim,
                           bool smoothed)
        : measure_(std::move(measure)), known_(dim, space), smoothed_(smoothed) {}

    PValueTable p_table(const std::vector<double>& object, RngStream& tape) const override {
        return classify_p_table(known_, object, measure_, smoothed_, tape);
    }

    void observe(const Example& ex) override { known_.add(ex); }

private:
    Measure measure_;
    Dataset known_;
    bool smoothed_;
};

void record_step(ProtocolLedger& ledger, const std::vector<Epsilon>& eps_list,
                 const PValueTable& table, const Label& truth, std::size_t slot) {
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        PredictionSet gamma = prediction_set(table, eps_list[e]);
        bool is_err = !gamma.contains(truth);
        bool is_mult = gamma.label_count() > 1;
        bool is_emp = gamma.empty();
        ledger.err[e][slot] = is_err ? 1 : 0;
        ledger.mult[e][slot] = is_mult ? 1 : 0;
        ledger.emp[e][slot] = is_emp ? 1 : 0;
    }
    ledger.true_p[slot] = table.p[truth.class_id()];
}

ProtocolLedger make_ledger(const std::vector<Epsilon>& eps_list, std::size_t n) {
    ProtocolLedger ledger;
    for (const auto& e : eps_list) ledger.eps.push_back(e.value());
    ledger.err.assign(eps_list.size(), std::vector<std::uint8_t>(n, 0));
    ledger.mult.assign(eps_list.size(), std::vector<std::uint8_t>(n, 0));
    ledger.emp.assign(eps_list.size(), std::vector<std::uint8_t>(n, 0));
    ledger.true_p.assign(n, 0.0);
    return ledger;
}

}  // namespace

std::unique_ptr<OnlineClassifier> make_knn_conformal(KnnConfig cfg, const LabelSpace& space,
                                                     std::size_t dim, bool smoothed) {
    if (space.kind() != LabelKind::Class)
        throw UsageError("conformal classifier needs a class alphabet");
    return std::make_unique<KnnConformalOnline>(cfg, space, dim, smoothed);
}

std::unique_ptr<OnlineClassifier> make_measure_conformal(Measure measure, const LabelSpace& space,
                                                         std::size_t dim, bool smoothed) {
    if (space.kind() != LabelKind::Class)
        throw UsageError("conformal classifier needs a class alphabet");
    return std::make_unique<MeasureConformalOnline>(std::move(measure), space, dim, smoothed);
}

ProtocolLedger run_online(const Dataset& stream, OnlineClassifier& predictor,
                          const std::vector<Epsilon>& eps_list, const TeacherSchedule& schedule,
                          const SmoothingTape& tape) {
    if (!stream.is_classification())
        throw UsageError("run_online needs a classification stream");
    const std::size_t n = stream.size();
    ProtocolLedger ledger = make_ledger(eps_list, n);

    std::vector<std::uint8_t> revealed(n + 1, 0);
    for (std::size_t step = 1; step <= n; ++step) {
        RngStream step_stream = tape.substream(step);
        PValueTable table = predictor.p_table(stream[step - 1].object, step_stream);
        record_step(ledger, eps_list, table, stream[step - 1].label, step - 1);

        for (std::size_t idx : schedule.reveals_at(step)) {
            if (idx < 1 || idx > step)
                throw UsageError("teacher schedule reveals a label for an unseen object");
            if (revealed[idx]) throw UsageError("teacher schedule reveals a label twice");
            revealed[idx] = 1;
            predictor.observe(stream[idx - 1]);
        }
    }
    return ledger;
}

ProtocolLedger run_batch(const Dataset& training, const Dataset& test,
                         OnlineClassifier& predictor, const std::vector<Epsilon>& eps_list,
                         const SmoothingTape& tape) {
    if (!training.is_classification() || !test.is_classification())
        throw UsageError("run_batch needs classification datasets");
    if (!(training.label_space() == test.label_space()))
        throw UsageError("run_batch: training and test label spaces differ");
    if (training.dim() != test.dim())
        throw UsageError("run_batch: training and test dimensions differ");

    for (std::size_t i = 0; i < training.size(); ++i) predictor.observe(training[i]);

    const std::size_t k = test.size();
    ProtocolLedger ledger = make_ledger(eps_list, k);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(k); ++i) {
        try {
            RngStream step_stream = tape.substream(training.size() + i + 1);
            PValueTable table = predictor.p_table(test[i].object, step_stream);
            record_step(ledger, eps_list, table, test[i].label, static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return ledger;
}

CalibrationReport calibration_report(const ProtocolLedger& ledger, Epsilon eps) {
    if (ledger.steps() == 0) throw UsageError("calibration_report on an empty ledger");
    std::size_t e = ledger.eps.size();
    for (std::size_t i = 0; i < ledger.eps.size(); ++i) {
        if (ledger.eps[i] == eps.value()) {
            e = i;
            break;
        }
    }
    if (e == ledger.eps.size())
        throw UsageError("calibration_report: level not present in the ledger");

    CalibrationReport rep;
    rep.cum_err = ProtocolLedger::cumulative(ledger.err[e]);
    rep.cum_mult = ProtocolLedger::cumulative(ledger.mult[e]);
    rep.cum_emp = ProtocolLedger::cumulative(ledger.emp[e]);
    const double n = static_cast<double>(ledger.steps());
    rep.error_rate = rep.cum_err.back() / n;
    rep.multiple_rate = rep.cum_mult.back() / n;
    rep.empty_rate = rep.cum_emp.back() / n;

    // Slope of the cumulative error line through the origin.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < rep.cum_err.size(); ++i) {
        double x = static_cast<double>(i + 1);
        num += x * rep.cum_err[i];
        den += x * x;
    }
    rep.error_slope = num / den;
    return rep;
}

}  // namespace conformal
