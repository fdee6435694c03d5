#include "conformal/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

Label Label::of_class(int id) {
    if (id < 0) throw UsageError("class label id must be nonnegative");
    return Label(LabelKind::Class, id, 0.0);
}

Label Label::of_real(double value) {
    if (!std::isfinite(value)) throw DataError("real label must be finite");
    return Label(LabelKind::Real, -1, value);
}

int Label::class_id() const {
    if (kind_ != LabelKind::Class) throw UsageError("label is not a class label");
    return class_id_;
}

double Label::value() const {
    if (kind_ != LabelKind::Real) throw UsageError("label is not a regression label");
    return value_;
}

bool Label::operator==(const Label& other) const {
    if (kind_ != other.kind_) return false;
    return kind_ == LabelKind::Class ? class_id_ == other.class_id_ : value_ == other.value_;
}

LabelSpace LabelSpace::real_line() {
    return LabelSpace(LabelKind::Real, {});
}

LabelSpace LabelSpace::alphabet(std::vector<std::string> symbols) {
    if (symbols.size() < 2) throw UsageError("class alphabet needs at least two symbols");
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        for (std::size_t j = i + 1; j < symbols.size(); ++j) {
            if (symbols[i] == symbols[j])
                throw UsageError("class alphabet contains duplicate symbol '" + symbols[i] + "'");
        }
    }
    return LabelSpace(LabelKind::Class, std::move(symbols));
}

int LabelSpace::index_of(const std::string& symbol) const {
    auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
    return it == symbols_.end() ? -1 : static_cast<int>(it - symbols_.begin());
}

bool LabelSpace::compatible(const Label& label) const {
    if (kind_ == LabelKind::Real) return label.kind() == LabelKind::Real;
    return label.kind() == LabelKind::Class &&
           label.class_id() < static_cast<int>(symbols_.size());
}

Dataset::Dataset(std::size_t dim, LabelSpace space) : dim_(dim), space_(std::move(space)) {
    if (dim_ == 0) throw UsageError("dataset dimension must be positive");
}

void Dataset::add(std::vector<double> object, const Label& label) {
    if (object.size() != dim_)
        throw DataError("object has dimension " + std::to_string(object.size()) +
                        ", dataset expects " + std::to_string(dim_));
    for (double v : object) {
        if (!std::isfinite(v)) throw DataError("object contains a non-finite feature");
    }
    if (!space_.compatible(label))
        throw DataError("label is outside the dataset's label space");
    examples_.push_back(Example{std::move(object), label});
}

Dataset complete(const Dataset& training, const std::vector<double>& object, const Label& candidate) {
    Dataset out = training;
    out.add(object, candidate);
    return out;
}

}  // namespace conformal
