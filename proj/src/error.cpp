#include "pixelate/error.hpp"

namespace pixelate {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::IrregularLattice: return "IrregularLattice";
        case ErrorCode::DuplicateCoordinate: return "DuplicateCoordinate";
        case ErrorCode::NegativeUncertainty: return "NegativeUncertainty";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvertedInterval: return "InvertedInterval";
        case ErrorCode::LadderOverflow: return "LadderOverflow";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::EmptyValues: return "EmptyValues";
        case ErrorCode::BoundaryMismatch: return "BoundaryMismatch";
        case ErrorCode::InconsistentInputs: return "InconsistentInputs";
        case ErrorCode::UnknownDataset: return "UnknownDataset";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::HeaderMismatch: return "HeaderMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace pixelate
