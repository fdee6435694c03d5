#include "conformal/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace conformal {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, const std::string& path, std::size_t line_no,
                    const std::string& column) {
    std::string t = trim(cell);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw DataError(path + " line " + std::to_string(line_no) + ": non-numeric cell '" +
                        cell + "' in column " + column);
    if (!std::isfinite(v))
        throw DataError(path + " line " + std::to_string(line_no) +
                        ": non-finite value in column " + column);
    return v;
}

}  // namespace

std::vector<std::string> csv_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    std::vector<std::string> header = split_row(line);
    for (auto& h : header) h = trim(h);
    return header;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    std::vector<std::string> header = split_row(line);
    for (auto& h : header) h = trim(h);
    if (header.empty()) throw DataError(path + ": empty header row");

    std::size_t label_idx = header.size();  // = "no label column"
    if (!schema.label_column.empty()) {
        auto it = std::find(header.begin(), header.end(), schema.label_column);
        if (it == header.end()) {
            if (schema.require_label)
                throw DataError(path + ": label column '" + schema.label_column + "' not found");
        } else {
            label_idx = static_cast<std::size_t>(it - header.begin());
        }
    } else if (schema.require_label) {
        label_idx = header.size() - 1;
    }
    const bool has_label = label_idx < header.size();
    if (has_label && header.size() < 2)
        throw DataError(path + ": need at least one feature column");

    std::vector<std::size_t> feature_idx;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != label_idx) feature_idx.push_back(i);
    }

    struct Row {
        std::vector<double> x;
        std::string label_cell;
        std::size_t line_no;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_row(line);
        if (cells.size() != header.size())
            throw DataError(path + " line " + std::to_string(line_no) + ": ragged row (" +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()) + ")");
        Row row;
        row.line_no = line_no;
        row.x.reserve(feature_idx.size());
        for (std::size_t j : feature_idx)
            row.x.push_back(parse_number(cells[j], path, line_no, header[j]));
        if (has_label) row.label_cell = trim(cells[label_idx]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");

    LabelSpace space = LabelSpace::real_line();
    if (schema.label_kind == LabelKind::Class) {
        std::vector<std::string> classes = schema.classes;
        if (classes.empty()) {
            if (!has_label)
                throw DataError(path + ": class alphabet must be declared for unlabeled data");
            for (const auto& row : rows) classes.push_back(row.label_cell);
            std::sort(classes.begin(), classes.end());
            classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        }
        if (classes.size() < 2)
            throw DataError(path + ": class alphabet needs at least two symbols");
        space = LabelSpace::alphabet(classes);
    }

    Dataset data(feature_idx.size(), space);
    for (auto& row : rows) {
        Label label = Label::of_real(0.0);
        if (!has_label) {
            label = schema.label_kind == LabelKind::Class ? Label::of_class(0)
                                                          : Label::of_real(0.0);
        } else if (schema.label_kind == LabelKind::Class) {
            int id = space.index_of(row.label_cell);
            if (id < 0)
                throw DataError(path + " line " + std::to_string(row.line_no) +
                                ": unknown class symbol '" + row.label_cell + "'");
            label = Label::of_class(id);
        } else {
            label = Label::of_real(
                parse_number(row.label_cell, path, row.line_no, "label"));
        }
        data.add(std::move(row.x), label);
    }
    return data;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Column numeric_column(std::string name, const std::vector<double>& values) {
    Column col;
    col.name = std::move(name);
    col.cells.reserve(values.size());
    for (double v : values) col.cells.push_back(format_double(v));
    return col;
}

std::string format_table(const std::vector<Column>& columns) {
    if (columns.empty()) throw UsageError("cannot format an empty table");
    const std::size_t rows = columns.front().cells.size();
    for (const auto& c : columns) {
        if (c.cells.size() != rows) throw UsageError("table columns differ in length");
    }
    std::string out;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (j) out += ',';
        out += columns[j].name;
    }
    out += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j) out += ',';
            out += columns[j].cells[i];
        }
        out += '\n';
    }
    return out;
}

void write_table(const std::vector<Column>& columns, const std::string& path) {
    std::string content = format_table(columns);  // formatted fully before any I/O
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw DataError("failed writing " + path);
}

std::string format_curves(const std::vector<Series>& series) {
    if (series.empty()) throw UsageError("cannot emit an empty curve family");
    std::vector<Column> cols;
    cols.reserve(series.size());
    for (const auto& s : series) {
        if (s.values.empty()) throw UsageError("curve series '" + s.name + "' is empty");
        cols.push_back(numeric_column(s.name, s.values));
    }
    return format_table(cols);
}

void emit_curves(const std::vector<Series>& series, const std::string& path) {
    std::string content = format_curves(series);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw DataError("failed writing " + path);
}

}  // namespace conformal
