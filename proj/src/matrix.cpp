#include "dendro/matrix.hpp"

#include <cmath>

#include "dendro/errors.hpp"

namespace dendro {

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> ids, std::vector<double> values)
    : ids_(std::move(ids)), values_(std::move(values)) {
    const std::size_t n = ids_.size();
    if (n == 0) throw InvalidInputError("similarity matrix needs at least one object id");
    if (values_.size() != n * n)
        throw InvalidInputError("similarity matrix value count " + std::to_string(values_.size()) +
                                " does not match " + std::to_string(n) + " ids");
    index_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!index_.emplace(ids_[i], i).second)
            throw InvalidInputError("duplicate object id '" + ids_[i] + "'");
    }
}

std::size_t SimilarityMatrix::index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw InvalidInputError("unknown object id '" + id + "'");
    return it->second;
}

void SimilarityMatrix::validate() const {
    const std::size_t n = ids_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (at(i, i) != 1.0)
            throw InvalidInputError("similarity diagonal (" + ids_[i] + ", " + ids_[i] +
                                    ") is not 1");
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = at(i, j);
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw InvalidInputError("similarity (" + ids_[i] + ", " + ids_[j] +
                                        ") is outside [0, 1]");
            if (v != at(j, i))
                throw InvalidInputError("similarity (" + ids_[i] + ", " + ids_[j] +
                                        ") is not symmetric");
        }
    }
}

}  // namespace dendro
