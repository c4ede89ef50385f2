#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pgarch {

enum class ErrorCode {
    NonPositiveIntercept,
    NegativeCoefficient,
    BadDimensions,
    NonFiniteValue,
    InvalidInnovation,
    InvalidArgument,
    SpecParse,
    SizeOverflow,
    ShapeMismatch,
    SpectralRadiusAtLeastOne,
    SingularSystem,
    MomentDoesNotExist,
    NotGarch11,
    NotStationary,
    QuadratureFailure,
    InnovationNotAbsolutelyContinuous,
    NumericOverflow,
    TooShort,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure in a model spec document; `field()` names the offending key.
class SpecError : public Error {
public:
    SpecError(std::string field, const std::string& problem)
        : Error(ErrorCode::SpecParse, field + ": " + problem), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Raised by the simulator when h leaves the representable range.
class OverflowError : public Error {
public:
    OverflowError(long long year, int season, double value);

    [[nodiscard]] long long year() const noexcept { return year_; }
    [[nodiscard]] int season() const noexcept { return season_; }

private:
    long long year_;
    int season_;
};

}  // namespace pgarch
