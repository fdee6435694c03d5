#include "conformal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "conformal/bayes.hpp"
#include "conformal/csv_io.hpp"
#include "conformal/icp.hpp"
#include "conformal/knn_engine.hpp"
#include "conformal/predictor.hpp"
#include "conformal/protocol.hpp"
#include "conformal/rrcm.hpp"

namespace conformal {

namespace {

KernelSpec parse_kernel_spec(const std::string& text) {
    if (text.empty() || text == "linear") return KernelSpec::linear();
    if (text.rfind("rbf:", 0) == 0) {
        double gamma = std::stod(text.substr(4));
        return KernelSpec::rbf(gamma);
    }
    if (text.rfind("poly:", 0) == 0) {
        std::string rest = text.substr(5);
        auto colon = rest.find(':');
        int degree = std::stoi(rest.substr(0, colon));
        double offset = colon == std::string::npos ? 0.0 : std::stod(rest.substr(colon + 1));
        return KernelSpec::polynomial(degree, offset);
    }
    throw UsageError("unknown kernel spec '" + text + "' (linear | poly:<deg>[:<off>] | rbf:<gamma>)");
}

RidgeConfig parse_ridge_config(const RunConfig& cfg) {
    RidgeConfig rc;
    rc.a = cfg.ridge_a;
    if (cfg.kernel.empty() || cfg.kernel == "none")
        rc.kernel = std::nullopt;
    else
        rc.kernel = parse_kernel_spec(cfg.kernel);
    return rc;
}

TeacherSchedule parse_teacher(const std::string& text) {
    if (text.empty() || text == "immediate") return TeacherSchedule::immediate();
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (kind == "lazy") return TeacherSchedule::lazy(std::stoul(arg));
    if (kind == "slow") return TeacherSchedule::slow(std::stoul(arg));
    if (kind == "batch") return TeacherSchedule::batch(std::stoul(arg));
    if (kind == "explicit") {
        std::vector<std::size_t> steps;
        std::istringstream in(arg);
        std::string tok;
        while (std::getline(in, tok, ',')) steps.push_back(std::stoul(tok));
        return TeacherSchedule::explicit_steps(std::move(steps));
    }
    throw UsageError("unknown teacher spec '" + text +
                     "' (immediate | lazy:<q> | slow:<d> | batch:<l> | explicit:n1,n2,...)");
}

std::vector<Epsilon> eps_list_of(const RunConfig& cfg) {
    std::vector<double> values = cfg.eps.empty() ? std::vector<double>{0.05} : cfg.eps;
    std::vector<Epsilon> out;
    out.reserve(values.size());
    for (double v : values) out.emplace_back(v);
    return out;
}

std::string require_path(const std::string& path, const std::string& flag) {
    if (path.empty()) throw UsageError("missing required " + flag);
    return path;
}

// Pending output files; everything is formatted before anything is written.
struct OutputSink {
    std::vector<std::pair<std::string, std::string>> files;
    std::string summary;

    void add_table(const std::string& path, const std::vector<Column>& columns) {
        if (!path.empty()) files.emplace_back(path, format_table(columns));
    }
    void flush() const {
        for (const auto& [path, content] : files) {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw DataError("cannot open " + path + " for writing");
            out << content;
            if (!out) throw DataError("failed writing " + path);
        }
        std::cout << summary << "\n";
    }
};

// Loads the test file with the training file's alphabet/label column; the
// label column may be absent (features only).
struct TestData {
    Dataset data;
    bool labeled = false;
};

std::string label_column_name(const RunConfig& cfg, const std::string& train_path) {
    if (!cfg.label_column.empty()) return cfg.label_column;
    auto header = csv_header(train_path);
    if (header.empty()) throw DataError(train_path + ": empty header row");
    return header.back();
}

TestData load_test(const RunConfig& cfg, const std::string& label_col, LabelKind kind,
                   const std::vector<std::string>& classes) {
    auto header = csv_header(require_path(cfg.test_path, "--test"));
    bool labeled = std::find(header.begin(), header.end(), label_col) != header.end();
    CsvSchema schema;
    schema.label_kind = kind;
    schema.label_column = label_col;
    schema.classes = classes;
    schema.require_label = false;
    return TestData{load_csv(cfg.test_path, schema), labeled};
}

std::string join_labels(const PredictionSet& set, const std::vector<std::string>& symbols) {
    std::string out;
    for (std::size_t i = 0; i < set.labels().size(); ++i) {
        if (i) out += '|';
        out += symbols[set.labels()[i]];
    }
    return out;
}

void append_kv(std::string& line, const std::string& key, const std::string& value) {
    line += " " + key + "=" + value;
}

// ---------------------------------------------------------------- classify

int run_classify(const RunConfig& cfg, OutputSink& sink) {
    if (cfg.measure != "knn")
        throw UsageError("classify supports --measure knn");
    CsvSchema train_schema;
    train_schema.label_kind = LabelKind::Class;
    train_schema.label_column = cfg.label_column;
    train_schema.classes = cfg.classes;
    Dataset train = load_csv(require_path(cfg.data_path, "--data"), train_schema);
    const auto& symbols = train.label_space().symbols();

    std::string label_col = label_column_name(cfg, cfg.data_path);
    TestData test = load_test(cfg, label_col, LabelKind::Class, symbols);
    if (test.data.dim() != train.dim())
        throw DataError(cfg.test_path + ": test dimension " + std::to_string(test.data.dim()) +
                        " differs from training dimension " + std::to_string(train.dim()));

    KnnConfig knn{cfg.k, cfg.kernel.empty() ? KernelSpec::linear() : parse_kernel_spec(cfg.kernel)};
    KnnScorer scorer(knn, train.dim(), symbols.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        scorer.add(train[i].object, train[i].label.class_id());

    SmoothingTape tape(cfg.seed);
    std::vector<Epsilon> eps_list;
    for (double v : cfg.eps) eps_list.emplace_back(v);

    const std::size_t n = test.data.size();
    std::vector<PValueTable> tables(n);
    for (std::size_t i = 0; i < n; ++i) {
        RngStream stream = tape.substream(i + 1);
        tables[i] = knn_p_table(scorer, symbols, test.data[i].object, cfg.smoothed, stream);
    }

    std::vector<Column> columns;
    columns.push_back(Column{"row", {}});
    for (const auto& s : symbols) columns.push_back(Column{"p_" + s, {}});
    columns.push_back(Column{"prediction", {}});
    columns.push_back(Column{"confidence", {}});
    columns.push_back(Column{"credibility", {}});
    for (const auto& e : eps_list)
        columns.push_back(Column{"set_" + format_double(e.value()), {}});

    double sum_conf = 0.0, sum_cred = 0.0;
    std::size_t point_errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& table = tables[i];
        ConfidenceCredibility cc = summarize(table);
        sum_conf += cc.confidence;
        sum_cred += cc.credibility;
        if (test.labeled && cc.prediction != test.data[i].label.class_id()) ++point_errors;

        std::size_t col = 0;
        columns[col++].cells.push_back(std::to_string(i + 1));
        for (std::size_t y = 0; y < symbols.size(); ++y)
            columns[col++].cells.push_back(format_double(table.p[y]));
        columns[col++].cells.push_back(symbols[cc.prediction]);
        columns[col++].cells.push_back(format_double(cc.confidence));
        columns[col++].cells.push_back(format_double(cc.credibility));
        for (const auto& e : eps_list)
            columns[col++].cells.push_back(join_labels(prediction_set(table, e), symbols));
    }

    sink.add_table(cfg.out_path, columns);
    std::string line = "classify: n=" + std::to_string(n);
    append_kv(line, "mean_confidence", format_double(n ? sum_conf / n : 0.0));
    append_kv(line, "mean_credibility", format_double(n ? sum_cred / n : 0.0));
    if (test.labeled)
        append_kv(line, "point_error_rate", format_double(n ? double(point_errors) / n : 0.0));
    sink.summary = line;
    return 0;
}

// ----------------------------------------------------------------- regress

int run_regress(const RunConfig& cfg, OutputSink& sink) {
    if (cfg.measure != "ridge" && cfg.measure != "knn")
        throw UsageError("unknown measure '" + cfg.measure + "'");
    if (cfg.measure != "ridge")
        throw UsageError("regress supports --measure ridge");
    CsvSchema train_schema;
    train_schema.label_kind = LabelKind::Real;
    train_schema.label_column = cfg.label_column;
    Dataset train = load_csv(require_path(cfg.data_path, "--data"), train_schema);

    std::string label_col = label_column_name(cfg, cfg.data_path);
    TestData test = load_test(cfg, label_col, LabelKind::Real, {});
    if (test.data.dim() != train.dim())
        throw DataError(cfg.test_path + ": test dimension differs from training dimension");

    RidgeConfig ridge = parse_ridge_config(cfg);
    std::vector<Epsilon> eps_list = eps_list_of(cfg);

    std::vector<std::vector<double>> objects;
    objects.reserve(test.data.size());
    for (std::size_t i = 0; i < test.data.size(); ++i) objects.push_back(test.data[i].object);
    auto preds = rrcm_predict_batch(train, objects, ridge, eps_list);

    std::vector<Column> columns;
    columns.push_back(Column{"row", {}});
    for (const auto& e : eps_list) {
        columns.push_back(Column{"lo_" + format_double(e.value()), {}});
        columns.push_back(Column{"hi_" + format_double(e.value()), {}});
    }
    std::vector<std::size_t> covered(eps_list.size(), 0);
    std::vector<double> width_sum(eps_list.size(), 0.0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < preds.size(); ++i) {
        std::size_t col = 0;
        columns[col++].cells.push_back(std::to_string(i + 1));
        for (std::size_t e = 0; e < eps_list.size(); ++e) {
            const auto& hull = preds[i][e].hull;
            double lo = hull ? hull->lo : nan;
            double hi = hull ? hull->hi : nan;
            columns[col++].cells.push_back(format_double(lo));
            columns[col++].cells.push_back(format_double(hi));
            if (hull) width_sum[e] += hull->width();
            if (test.labeled && hull && hull->contains(test.data[i].label.value())) ++covered[e];
        }
    }

    sink.add_table(cfg.out_path, columns);
    std::string line = "regress: n=" + std::to_string(preds.size());
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        std::string tag = format_double(eps_list[e].value());
        if (test.labeled && !preds.empty())
            append_kv(line, "coverage_" + tag, format_double(double(covered[e]) / preds.size()));
        if (!preds.empty())
            append_kv(line, "mean_width_" + tag, format_double(width_sum[e] / preds.size()));
    }
    sink.summary = line;
    return 0;
}

// ------------------------------------------------------------ online/batch

std::vector<Column> ledger_columns(const ProtocolLedger& ledger) {
    std::vector<Column> columns;
    std::vector<double> steps(ledger.steps());
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = double(i + 1);
    columns.push_back(numeric_column("n", steps));
    for (std::size_t e = 0; e < ledger.eps.size(); ++e) {
        std::string tag = format_double(ledger.eps[e]);
        auto cum = [](const std::vector<std::uint8_t>& bits) {
            auto c = ProtocolLedger::cumulative(bits);
            return std::vector<double>(c.begin(), c.end());
        };
        columns.push_back(numeric_column("Err_" + tag, cum(ledger.err[e])));
        columns.push_back(numeric_column("Mult_" + tag, cum(ledger.mult[e])));
        columns.push_back(numeric_column("Emp_" + tag, cum(ledger.emp[e])));
    }
    return columns;
}

std::string ledger_summary(const std::string& head, const ProtocolLedger& ledger) {
    std::string line = head + ": n=" + std::to_string(ledger.steps());
    const double n = ledger.steps() > 0 ? double(ledger.steps()) : 1.0;
    for (std::size_t e = 0; e < ledger.eps.size(); ++e) {
        std::string tag = format_double(ledger.eps[e]);
        append_kv(line, "err_" + tag, format_double(ledger.err_total(e) / n));
        append_kv(line, "mult_" + tag, format_double(ledger.mult_total(e) / n));
        append_kv(line, "emp_" + tag, format_double(ledger.emp_total(e) / n));
    }
    return line;
}

int run_online_cmd(const RunConfig& cfg, OutputSink& sink) {
    if (cfg.measure != "knn")
        throw UsageError("online supports --measure knn");
    CsvSchema schema;
    schema.label_kind = LabelKind::Class;
    schema.label_column = cfg.label_column;
    schema.classes = cfg.classes;
    Dataset stream = load_csv(require_path(cfg.data_path, "--data"), schema);

    KnnConfig knn{cfg.k, cfg.kernel.empty() ? KernelSpec::linear() : parse_kernel_spec(cfg.kernel)};
    auto predictor = make_knn_conformal(knn, stream.label_space(), stream.dim(), cfg.smoothed);
    SmoothingTape tape(cfg.seed);
    ProtocolLedger ledger =
        run_online(stream, *predictor, eps_list_of(cfg), parse_teacher(cfg.teacher), tape);

    sink.add_table(cfg.out_path, ledger_columns(ledger));
    sink.summary = ledger_summary("online", ledger);
    return 0;
}

int run_batch_cmd(const RunConfig& cfg, OutputSink& sink) {
    if (cfg.measure != "knn")
        throw UsageError("batch supports --measure knn");
    CsvSchema schema;
    schema.label_kind = LabelKind::Class;
    schema.label_column = cfg.label_column;
    schema.classes = cfg.classes;
    Dataset train = load_csv(require_path(cfg.data_path, "--data"), schema);

    std::string label_col = label_column_name(cfg, cfg.data_path);
    CsvSchema test_schema = schema;
    test_schema.label_column = label_col;
    test_schema.classes = train.label_space().symbols();
    Dataset test = load_csv(require_path(cfg.test_path, "--test"), test_schema);

    KnnConfig knn{cfg.k, cfg.kernel.empty() ? KernelSpec::linear() : parse_kernel_spec(cfg.kernel)};
    auto predictor = make_knn_conformal(knn, train.label_space(), train.dim(), cfg.smoothed);
    SmoothingTape tape(cfg.seed);
    ProtocolLedger ledger = run_batch(train, test, *predictor, eps_list_of(cfg), tape);

    sink.add_table(cfg.out_path, ledger_columns(ledger));
    sink.summary = ledger_summary("batch", ledger);
    return 0;
}

// --------------------------------------------------------------------- icp

int run_icp(const RunConfig& cfg, OutputSink& sink) {
    const bool regression = cfg.measure == "ridge";
    if (!regression && cfg.measure != "knn")
        throw UsageError("icp supports --measure knn or --measure ridge");

    CsvSchema train_schema;
    train_schema.label_kind = regression ? LabelKind::Real : LabelKind::Class;
    train_schema.label_column = cfg.label_column;
    train_schema.classes = cfg.classes;
    Dataset train = load_csv(require_path(cfg.data_path, "--data"), train_schema);

    std::string label_col = label_column_name(cfg, cfg.data_path);
    TestData test = load_test(cfg, label_col, train_schema.label_kind,
                              regression ? std::vector<std::string>{}
                                         : train.label_space().symbols());
    if (test.data.dim() != train.dim())
        throw DataError(cfg.test_path + ": test dimension differs from training dimension");

    std::size_t m = cfg.split_m > 0 ? static_cast<std::size_t>(cfg.split_m)
                                    : icp_default_split(train.size());
    Learner learner = regression
                          ? kernel_ridge_learner(parse_ridge_config(cfg))
                          : nearest_neighbor_learner(cfg.kernel.empty()
                                                         ? KernelSpec::linear()
                                                         : parse_kernel_spec(cfg.kernel));
    IcpModel model = icp_fit(train, m,
                             learner,
                             regression ? Discrepancy::AbsoluteError : Discrepancy::ZeroOne);

    std::vector<Epsilon> eps_list = eps_list_of(cfg);
    std::vector<Column> columns;
    columns.push_back(Column{"row", {}});
    std::string line = "icp: n=" + std::to_string(test.data.size()) + " m=" + std::to_string(m);

    if (regression) {
        for (const auto& e : eps_list) {
            columns.push_back(Column{"lo_" + format_double(e.value()), {}});
            columns.push_back(Column{"hi_" + format_double(e.value()), {}});
        }
        std::vector<std::size_t> covered(eps_list.size(), 0);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < test.data.size(); ++i) {
            std::size_t col = 0;
            columns[col++].cells.push_back(std::to_string(i + 1));
            for (std::size_t e = 0; e < eps_list.size(); ++e) {
                PredictionSet set = icp_predict(model, test.data[i].object, eps_list[e]);
                bool empty = set.empty();
                double lo = empty ? nan : set.intervals().front().lo;
                double hi = empty ? nan : set.intervals().back().hi;
                columns[col++].cells.push_back(format_double(lo));
                columns[col++].cells.push_back(format_double(hi));
                if (test.labeled && set.contains(test.data[i].label)) ++covered[e];
            }
        }
        if (test.labeled && !test.data.empty()) {
            for (std::size_t e = 0; e < eps_list.size(); ++e)
                append_kv(line, "coverage_" + format_double(eps_list[e].value()),
                          format_double(double(covered[e]) / test.data.size()));
        }
    } else {
        const auto& symbols = train.label_space().symbols();
        for (const auto& s : symbols) columns.push_back(Column{"p_" + s, {}});
        columns.push_back(Column{"prediction", {}});
        for (const auto& e : eps_list)
            columns.push_back(Column{"set_" + format_double(e.value()), {}});
        std::size_t errors = 0;
        for (std::size_t i = 0; i < test.data.size(); ++i) {
            PValueTable table;
            table.labels = symbols;
            for (std::size_t y = 0; y < symbols.size(); ++y)
                table.p.push_back(icp_p_value(model, test.data[i].object,
                                              Label::of_class(static_cast<int>(y))));
            ConfidenceCredibility cc = summarize(table);
            if (test.labeled && cc.prediction != test.data[i].label.class_id()) ++errors;
            std::size_t col = 0;
            columns[col++].cells.push_back(std::to_string(i + 1));
            for (std::size_t y = 0; y < symbols.size(); ++y)
                columns[col++].cells.push_back(format_double(table.p[y]));
            columns[col++].cells.push_back(symbols[cc.prediction]);
            for (const auto& e : eps_list)
                columns[col++].cells.push_back(join_labels(prediction_set(table, e), symbols));
        }
        if (test.labeled && !test.data.empty())
            append_kv(line, "point_error_rate",
                      format_double(double(errors) / test.data.size()));
    }

    sink.add_table(cfg.out_path, columns);
    sink.summary = line;
    return 0;
}

// ----------------------------------------------------------- bayes-compare

int run_bayes_compare(const RunConfig& cfg, OutputSink& sink) {
    ExperimentGrid grid;
    grid.levels = cfg.levels.empty() ? default_levels() : cfg.levels;
    grid.trials = cfg.trials;
    grid.train_size = cfg.train_size;
    grid.test_size = cfg.test_size;
    grid.a_values = cfg.a_assumed;

    LinearModelSpec spec;
    spec.p = cfg.dim;
    spec.a_true = cfg.a_true;

    ComparisonCurves curves = run_bayes_comparison(grid, spec, cfg.seed);

    std::string prefix = cfg.out_path.empty() ? "bayes_compare" : cfg.out_path;
    auto emit = [&](const std::string& tag, const std::vector<std::vector<double>>& rows,
                    bool percent) {
        std::vector<Column> cols;
        cols.push_back(numeric_column("level", curves.levels));
        for (std::size_t ai = 0; ai < curves.a_values.size(); ++ai) {
            std::vector<double> vals = rows[ai];
            if (percent) {
                for (auto& v : vals) v *= 100.0;
            }
            cols.push_back(numeric_column("a_" + format_double(curves.a_values[ai]), vals));
        }
        sink.files.emplace_back(prefix + "_" + tag + ".csv", format_table(cols));
    };
    emit("rrcm_validity", curves.rrcm_miscoverage, true);
    emit("rrcm_width", curves.rrcm_mean_width, false);
    emit("bayes_validity", curves.bayes_miscoverage, true);
    emit("bayes_width", curves.bayes_mean_width, false);

    // Report the grid level closest to 90% confidence.
    std::size_t pick = 0;
    for (std::size_t i = 1; i < curves.levels.size(); ++i) {
        if (std::fabs(curves.levels[i] - 0.9) < std::fabs(curves.levels[pick] - 0.9)) pick = i;
    }
    std::string line = "bayes-compare: trials=" + std::to_string(grid.trials) +
                       " level=" + format_double(curves.levels[pick]);
    for (std::size_t ai = 0; ai < curves.a_values.size(); ++ai) {
        std::string a = format_double(curves.a_values[ai]);
        append_kv(line, "rrcm_miscov_a" + a, format_double(curves.rrcm_miscoverage[ai][pick]));
        append_kv(line, "bayes_miscov_a" + a, format_double(curves.bayes_miscoverage[ai][pick]));
        append_kv(line, "rrcm_width_a" + a, format_double(curves.rrcm_mean_width[ai][pick]));
        append_kv(line, "bayes_width_a" + a, format_double(curves.bayes_mean_width[ai][pick]));
    }
    sink.summary = line;
    return 0;
}

// ------------------------------------------------------------------ driver

void merge_config_file(RunConfig& cfg, const std::map<std::string, bool>& given) {
    if (cfg.config_path.empty()) return;
    std::ifstream in(cfg.config_path);
    if (!in) throw DataError("cannot open config file " + cfg.config_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DataError("config file " + cfg.config_path + ": " + e.what());
    }
    if (!j.is_object()) throw DataError("config file " + cfg.config_path + ": expected an object");

    auto want = [&](const char* key) { return j.contains(key) && !given.at(key); };
    try {
        if (j.contains("command") && cfg.command.empty()) cfg.command = j["command"];
        if (want("data")) cfg.data_path = j["data"];
        if (want("test")) cfg.test_path = j["test"];
        if (want("out")) cfg.out_path = j["out"];
        if (want("measure")) cfg.measure = j["measure"];
        if (want("k")) cfg.k = j["k"];
        if (want("ridge-a")) cfg.ridge_a = j["ridge-a"];
        if (want("kernel")) cfg.kernel = j["kernel"];
        if (want("eps")) cfg.eps = j["eps"].get<std::vector<double>>();
        if (want("smoothed")) cfg.smoothed = j["smoothed"];
        if (want("teacher")) cfg.teacher = j["teacher"];
        if (want("seed")) cfg.seed = j["seed"];
        if (want("split-m")) cfg.split_m = j["split-m"];
        if (want("label-col")) cfg.label_column = j["label-col"];
        if (want("classes")) cfg.classes = j["classes"].get<std::vector<std::string>>();
        if (want("a-assumed")) cfg.a_assumed = j["a-assumed"].get<std::vector<double>>();
        if (want("trials")) cfg.trials = j["trials"];
        if (want("train-size")) cfg.train_size = j["train-size"];
        if (want("test-size")) cfg.test_size = j["test-size"];
        if (want("dim")) cfg.dim = j["dim"];
        if (want("a-true")) cfg.a_true = j["a-true"];
        if (want("levels")) cfg.levels = j["levels"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("config file " + cfg.config_path + ": " + e.what());
    }
}

}  // namespace

int run(const RunConfig& config) {
    for (double e : config.eps) {
        if (!(e > 0.0 && e < 1.0))
            throw UsageError("--eps values must lie strictly between 0 and 1");
    }

    RunConfig cfg = config;
    if (cfg.measure.empty())
        cfg.measure = cfg.command == "regress" || cfg.command == "icp" ? "ridge" : "knn";

    OutputSink sink;
    int rc;
    if (cfg.command == "classify")
        rc = run_classify(cfg, sink);
    else if (cfg.command == "regress")
        rc = run_regress(cfg, sink);
    else if (cfg.command == "online")
        rc = run_online_cmd(cfg, sink);
    else if (cfg.command == "batch")
        rc = run_batch_cmd(cfg, sink);
    else if (cfg.command == "icp")
        rc = run_icp(cfg, sink);
    else if (cfg.command == "bayes-compare")
        rc = run_bayes_compare(cfg, sink);
    else
        throw UsageError("unknown command '" + cfg.command + "'");
    sink.flush();
    return rc;
}

int run_cli(int argc, const char* const* argv) {
    RunConfig cfg;
    CLI::App app{"conformal prediction toolkit"};
    app.require_subcommand(0, 1);

    std::map<std::string, bool> given;
    std::vector<CLI::Option*> opts;
    auto add_options = [&](CLI::App* cmd) {
        cmd->add_option("--data", cfg.data_path, "training/stream CSV");
        cmd->add_option("--test", cfg.test_path, "test CSV");
        cmd->add_option("--out", cfg.out_path, "output CSV path (or prefix)");
        cmd->add_option("--config", cfg.config_path, "JSON config file; flags override");
        cmd->add_option("--measure", cfg.measure, "nonconformity measure: knn | ridge");
        cmd->add_option("--k", cfg.k, "nearest neighbours");
        cmd->add_option("--ridge-a", cfg.ridge_a, "ridge parameter");
        cmd->add_option("--kernel", cfg.kernel, "linear | poly:<deg>[:<off>] | rbf:<gamma> | none");
        cmd->add_option("--eps", cfg.eps, "significance levels")->delimiter(',');
        cmd->add_flag("--smoothed", cfg.smoothed, "smoothed p-values");
        cmd->add_option("--teacher", cfg.teacher,
                        "immediate | lazy:<q> | slow:<d> | batch:<l> | explicit:n1,n2,...");
        cmd->add_option("--seed", cfg.seed, "random seed");
        cmd->add_option("--split-m", cfg.split_m, "icp proper-training size");
        cmd->add_option("--label-col", cfg.label_column, "label column name (default: last)");
        cmd->add_option("--classes", cfg.classes, "declared class alphabet")->delimiter(',');
        cmd->add_option("--a-assumed", cfg.a_assumed, "assumed prior precisions")->delimiter(',');
        cmd->add_option("--trials", cfg.trials, "experiment trials");
        cmd->add_option("--train-size", cfg.train_size, "experiment training size");
        cmd->add_option("--test-size", cfg.test_size, "experiment test size");
        cmd->add_option("--dim", cfg.dim, "experiment dimension");
        cmd->add_option("--a-true", cfg.a_true, "true prior precision of the generator");
        cmd->add_option("--levels", cfg.levels, "confidence levels")->delimiter(',');
    };

    add_options(&app);
    const char* names[] = {"classify", "regress", "online", "batch", "icp", "bayes-compare"};
    for (const char* name : names) add_options(app.add_subcommand(name, name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the parse diagnostic
        return code == 0 ? 0 : 1;
    }

    try {
        if (!app.get_subcommands().empty()) cfg.command = app.get_subcommands().front()->get_name();

        // Track which keys were given anywhere on the command line.
        const char* keys[] = {"data", "test", "out", "measure", "k", "ridge-a", "kernel",
                              "eps", "smoothed", "teacher", "seed", "split-m", "label-col",
                              "classes", "a-assumed", "trials", "train-size", "test-size",
                              "dim", "a-true", "levels"};
        for (const char* key : keys) {
            std::string flag = std::string("--") + key;
            bool seen = app.count(flag) > 0;
            for (auto* sub : app.get_subcommands()) seen = seen || sub->count(flag) > 0;
            given[key] = seen;
        }
        merge_config_file(cfg, given);
        if (cfg.command.empty())
            throw UsageError("no command given (classify | regress | online | batch | icp | "
                             "bayes-compare)");
        return run(cfg);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace conformal
