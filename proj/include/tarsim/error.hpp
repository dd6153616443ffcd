#pragma once

#include <stdexcept>
#include <string>

namespace tarsim {

enum class ErrorCode {
    MalformedRecord,
    DuplicateId,
    NoPositives,
    NoNegatives,
    TooFewDocuments,
    DegenerateSplit,
    EmptyVocabulary,
    EmptyTrainingSet,
    SingleClassTraining,
    DimensionMismatch,
    UnknownDocument,
    InfeasibleTarget,
    InfeasibleParameters,
    IoFailure,
};

/// Library-wide exception; carries a code so callers can branch without
/// parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace tarsim
