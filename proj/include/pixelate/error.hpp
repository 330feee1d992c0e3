#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pixelate {

enum class ErrorCode {
    IrregularLattice,
    DuplicateCoordinate,
    NegativeUncertainty,
    NonFiniteValue,
    InvertedInterval,
    LadderOverflow,
    GridTooSmall,
    EmptyValues,
    BoundaryMismatch,
    InconsistentInputs,
    UnknownDataset,
    SchemaError,
    ParseError,
    HeaderMismatch,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. `record()` is set when the error can be
/// traced to one input record (0-based), so readers can report file lines.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message,
          std::optional<std::size_t> record = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code), record_(record) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<std::size_t> record() const noexcept { return record_; }

private:
    ErrorCode code_;
    std::optional<std::size_t> record_;
};

}  // namespace pixelate
