#include "pgarch/error.hpp"

#include <sstream>

namespace pgarch {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveIntercept: return "NonPositiveIntercept";
        case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
        case ErrorCode::BadDimensions: return "BadDimensions";
        case ErrorCode::NonFiniteValue: return "NonFiniteValue";
        case ErrorCode::InvalidInnovation: return "InvalidInnovation";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::SpecParse: return "SpecParse";
        case ErrorCode::SizeOverflow: return "SizeOverflow";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::SpectralRadiusAtLeastOne: return "SpectralRadiusAtLeastOne";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::MomentDoesNotExist: return "MomentDoesNotExist";
        case ErrorCode::NotGarch11: return "NotGarch11";
        case ErrorCode::NotStationary: return "NotStationary";
        case ErrorCode::QuadratureFailure: return "QuadratureFailure";
        case ErrorCode::InnovationNotAbsolutelyContinuous:
            return "InnovationNotAbsolutelyContinuous";
        case ErrorCode::NumericOverflow: return "NumericOverflow";
        case ErrorCode::TooShort: return "TooShort";
    }
    return "Unknown";
}

namespace {

std::string overflow_message(long long year, int season, double value) {
    std::ostringstream os;
    os << "h exceeded the overflow ceiling at year " << year << ", season " << season
       << " (h=" << value << ")";
    return os.str();
}

}  // namespace

OverflowError::OverflowError(long long year, int season, double value)
    : Error(ErrorCode::NumericOverflow, overflow_message(year, season, value)),
      year_(year),
      season_(season) {}

}  // namespace pgarch
