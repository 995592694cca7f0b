#pragma once

#include <stdexcept>
#include <string>

namespace ringview {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Schema / data-model errors.
struct SchemaMismatch : Error { using Error::Error; };
struct UnknownVariable : Error { using Error::Error; };
struct NonNumericValue : Error { using Error::Error; };
struct DegreeMismatch : Error { using Error::Error; };

// Planner errors.
struct InvalidVariableOrder : Error { using Error::Error; };
struct UnknownRelation : Error { using Error::Error; };
struct BadFactorization : Error { using Error::Error; };

// Runtime errors.
struct MissingRelation : Error { using Error::Error; };
struct NotUpdatable : Error { using Error::Error; };
struct CounterUnderflow : Error { using Error::Error; };
struct ModeMismatch : Error { using Error::Error; };

// Harness errors.
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct Divergence : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct OracleDivergence : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace ringview
