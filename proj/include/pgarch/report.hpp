#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pgarch/certify.hpp"
#include "pgarch/moments.hpp"
#include "pgarch/simulate.hpp"

namespace pgarch {

inline constexpr std::string_view kToolVersion = PGARCH_VERSION;

/// Finite values pass through; ±∞ and NaN become the strings "inf", "-inf", "nan".
nlohmann::json json_number(double value);

nlohmann::json certificate_to_json(const Certificate& cert, const std::string& spec_fingerprint);

/// Per-season μ₁, μ₂ and the scalar summaries, plus the lag table rows.
nlohmann::json moments_to_json(const MomentTable& table);

/// Lag table CSV: season,lag,gamma_first_component,autocov_sq.
void write_lag_csv(const MomentTable& table, std::ostream& out);

nlohmann::json lyapunov_to_json(const LyapunovEstimate& est);
nlohmann::json verification_to_json(const VerificationReport& report);

}  // namespace pgarch
