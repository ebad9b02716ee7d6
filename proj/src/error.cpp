#include "fuzzysched/error.hpp"

namespace fuzzysched {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NegativeScalar: return "NegativeScalar";
        case ErrorKind::NotDominating: return "NotDominating";
        case ErrorKind::NonPositiveQuantum: return "NonPositiveQuantum";
        case ErrorKind::BadParams: return "BadParams";
        case ErrorKind::MalformedDocument: return "MalformedDocument";
        case ErrorKind::UnknownJobReference: return "UnknownJobReference";
        case ErrorKind::NegativeSize: return "NegativeSize";
        case ErrorKind::CycleDetected: return "CycleDetected";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NonPositiveRuntime: return "NonPositiveRuntime";
        case ErrorKind::ShapeMismatch: return "ShapeMismatch";
        case ErrorKind::TooFewSamples: return "TooFewSamples";
        case ErrorKind::AllZero: return "AllZero";
        case ErrorKind::FileNotFound: return "FileNotFound";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

}  // namespace fuzzysched
