#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace enact {

// Malformed task data: non-permutation orderings, bad ids, schema violations.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DuplicationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class LookupError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// An observation that has zero probability under the current belief.
class ContradictionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Illegal action for the current target buffer (occupied slot, chunk already placed).
class OccupancyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class UnsupportedFieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IngestionError : public std::runtime_error {
public:
    IngestionError(const std::string& what, std::size_t row)
        : std::runtime_error("row " + std::to_string(row) + ": " + what), row_(row) {}

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

}  // namespace enact
