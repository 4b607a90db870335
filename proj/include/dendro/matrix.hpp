#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace dendro {

/// Dense symmetric similarity matrix over a fixed set of object ids.
/// Values live in [0, 1], the diagonal is exactly 1 and values[i][j] equals
/// values[j][i] exactly; loaders repair tiny deviations before constructing
/// one of these, everything else is rejected.
class SimilarityMatrix {
public:
    /// Takes ownership of `values` (row-major, ids.size()^2 entries).
    /// Throws InvalidInputError on shape mismatch or duplicate ids.
    SimilarityMatrix(std::vector<std::string> ids, std::vector<double> values);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * ids_.size() + j]; }
    const double* row(std::size_t i) const { return values_.data() + i * ids_.size(); }
    const std::vector<double>& values() const { return values_; }

    bool has_id(const std::string& id) const { return index_.count(id) != 0; }

    /// Index of `id`; throws InvalidInputError for unknown ids.
    std::size_t index_of(const std::string& id) const;

    /// Checks range, symmetry and diagonal exactly; throws InvalidInputError
    /// naming the first offending cell.
    void validate() const;

private:
    std::vector<std::string> ids_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace dendro
