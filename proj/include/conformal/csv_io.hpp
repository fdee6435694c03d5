#pragma once

#include <string>
#include <vector>

#include "conformal/dataset.hpp"

namespace conformal {

// Column layout of a dataset CSV: header row, feature columns then the label
// column. Class labels are strings; regression labels decimal reals.
struct CsvSchema {
    LabelKind label_kind = LabelKind::Class;
    std::string label_column;               // empty: last column
    std::vector<std::string> classes;       // declared alphabet; empty: sorted distinct
    bool require_label = true;              // false: label column may be absent
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Trimmed header row of a CSV file.
std::vector<std::string> csv_header(const std::string& path);

// One named column of preformatted cells; every table written by the CLI
// goes through this writer so outputs stay byte-stable.
struct Column {
    std::string name;
    std::vector<std::string> cells;
};

std::string format_double(double v);  // 12 significant digits
Column numeric_column(std::string name, const std::vector<double>& values);

std::string format_table(const std::vector<Column>& columns);
void write_table(const std::vector<Column>& columns, const std::string& path);

// Plot-ready series: first series is the x column.
struct Series {
    std::string name;
    std::vector<double> values;
};

std::string format_curves(const std::vector<Series>& series);
void emit_curves(const std::vector<Series>& series, const std::string& path);

}  // namespace conformal
