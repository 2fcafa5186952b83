#include "segscore/error.hpp"

namespace segscore {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MalformedInput: return "MalformedInput";
        case ErrorCode::MalformedConfig: return "MalformedConfig";
        case ErrorCode::MalformedProfile: return "MalformedProfile";
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::EmptyPage: return "EmptyPage";
        case ErrorCode::EmptySession: return "EmptySession";
        case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
        case ErrorCode::ProviderProtocol: return "ProviderProtocol";
        case ErrorCode::StorageFailure: return "StorageFailure";
    }
    return "Unknown";
}

}  // namespace segscore
