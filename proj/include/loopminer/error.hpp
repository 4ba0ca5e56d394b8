#pragma once

#include <stdexcept>
#include <string>

namespace loopminer {

enum class ErrorCode {
    Io,
    MalformedXml,
    EmptyLog,
    AllTracesFiltered,
    CyclicResidue,
    AmbiguousPartition,
    InvariantViolation,
    EntryNotFound,
    BothZero,
    InvalidArgument,
};

const char* to_string(ErrorCode code);

/// Process exit status for an error class: 2 parse, 3 empty, 4 structural, 1 otherwise.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace loopminer
