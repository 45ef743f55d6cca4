#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rba {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Input bytes or document do not have the expected structure.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Operation called outside its domain (empty image, out-of-bounds point, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid tuning parameter (kernel size, threshold, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Raised by find_root when the heatmap carries no bifurcation mass.
class NoBifurcationError : public DomainError {
public:
    using DomainError::DomainError;
};

struct RecordIssue {
    int index = -1;  // -1 for file-level issues
    std::string message;
};

/// Document parsed but violates its invariants; lists every offending record.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<RecordIssue> issues);

    const std::vector<RecordIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<RecordIssue> issues_;
};

}  // namespace rba
