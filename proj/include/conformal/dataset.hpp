#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace conformal {

// Error taxonomy shared across the library. The CLI maps these onto exit
// codes: UsageError -> 1, DataError -> 2, NumericError -> 3.
struct UsageError : std::runtime_error { using std::runtime_error::runtime_error; };
struct DataError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NumericError : std::runtime_error { using std::runtime_error::runtime_error; };

enum class LabelKind { Class, Real };

// A label is either a symbol from a finite alphabet (stored as an index into
// the owning dataset's alphabet) or a real number.
class Label {
public:
    static Label of_class(int id);
    static Label of_real(double value);

    LabelKind kind() const { return kind_; }
    bool is_class() const { return kind_ == LabelKind::Class; }
    int class_id() const;
    double value() const;

    bool operator==(const Label& other) const;
    bool operator!=(const Label& other) const { return !(*this == other); }

private:
    Label(LabelKind kind, int id, double value) : kind_(kind), class_id_(id), value_(value) {}
    LabelKind kind_;
    int class_id_;
    double value_;
};

// Admissible labels: a declared finite alphabet (at least two symbols; may
// contain symbols absent from the data) or the real line.
class LabelSpace {
public:
    static LabelSpace real_line();
    static LabelSpace alphabet(std::vector<std::string> symbols);

    LabelKind kind() const { return kind_; }
    const std::vector<std::string>& symbols() const { return symbols_; }
    std::size_t n_classes() const { return symbols_.size(); }
    int index_of(const std::string& symbol) const;   // -1 when absent
    bool compatible(const Label& label) const;

    bool operator==(const LabelSpace& other) const = default;

private:
    LabelSpace(LabelKind kind, std::vector<std::string> symbols)
        : kind_(kind), symbols_(std::move(symbols)) {}
    LabelKind kind_;
    std::vector<std::string> symbols_;
};

struct Example {
    std::vector<double> object;
    Label label;
};

// Ordered multiset of examples sharing one feature dimension and one label
// space. Duplicates are allowed; insertion order is preserved. Features and
// real labels must be finite (rejected at ingestion otherwise).
class Dataset {
public:
    Dataset(std::size_t dim, LabelSpace space);

    void add(std::vector<double> object, const Label& label);
    void add(const Example& ex) { add(ex.object, ex.label); }

    std::size_t size() const { return examples_.size(); }
    bool empty() const { return examples_.empty(); }
    std::size_t dim() const { return dim_; }
    const LabelSpace& label_space() const { return space_; }
    bool is_classification() const { return space_.kind() == LabelKind::Class; }
    const Example& operator[](std::size_t i) const { return examples_[i]; }
    const std::vector<Example>& examples() const { return examples_; }

private:
    std::size_t dim_;
    LabelSpace space_;
    std::vector<Example> examples_;
};

// The completed sequence: training examples followed by (object, candidate).
Dataset complete(const Dataset& training, const std::vector<double>& object, const Label& candidate);

}  // namespace conformal
