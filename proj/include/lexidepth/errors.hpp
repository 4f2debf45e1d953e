#pragma once

#include <stdexcept>
#include <string>

namespace lexidepth {

// Error taxonomy mirrored by the CLI exit codes: usage errors exit 1,
// data errors exit 2, numeric failures exit 3.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// corpus
struct DuplicateLanguage : DataError { using DataError::DataError; };
struct DuplicateMeaning : DataError { using DataError::DataError; };
struct MalformedRow : DataError {
    MalformedRow(const std::string& what, long line_arg)
        : DataError(what), line(line_arg) {}
    long line;
};
struct InvalidEncoding : DataError { using DataError::DataError; };
struct UnknownLanguage : DataError { using DataError::DataError; };
struct LanguageCollision : DataError { using DataError::DataError; };

// distance
struct UnknownMeaning : DataError { using DataError::DataError; };
struct InsufficientSupport : DataError { using DataError::DataError; };

// hclust
struct IncompleteMatrix : DataError { using DataError::DataError; };
struct InvalidK : UsageError { using UsageError::UsageError; };

// embedding
struct DimensionTooLarge : UsageError { using UsageError::UsageError; };
struct LabelMismatch : DataError { using DataError::DataError; };

// depth
struct EmptyReference : DataError { using DataError::DataError; };
struct InvalidLevel : UsageError { using UsageError::UsageError; };
struct DimensionUnsupported : UsageError { using UsageError::UsageError; };

// partition
struct InfeasibleClustering : UsageError { using UsageError::UsageError; };
struct UnknownLabel : DataError { using DataError::DataError; };

// classify
struct MissingClassLabel : DataError { using DataError::DataError; };
struct DegenerateClasses : DataError { using DataError::DataError; };
struct DimensionMismatch : DataError { using DataError::DataError; };
struct SplitTooSmall : DataError { using DataError::DataError; };

}  // namespace lexidepth
