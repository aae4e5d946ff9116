#pragma once

// Line-delimited JSON records (one object per line, schema version 1), the
// human-readable report table, and tab-separated weight scans.
//
// Record fields common to every kind: "schema", "kind", "spec_hash". The
// spec hash is the FNV-1a 64-bit hash, in 16 hex digits, of the canonical
// text of the inputs that determine the record.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "hyperhardy/coeffs.hpp"
#include "hyperhardy/spectral.hpp"
#include "hyperhardy/thresholds.hpp"
#include "hyperhardy/verify.hpp"

namespace hyperhardy {

inline constexpr int kRecordSchema = 1;

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// Canonical text of a verification spec (17 significant digits throughout).
std::string canonical_text(const InequalitySpec& spec);
std::string spec_hash(const InequalitySpec& spec);

std::string constants_record(const SpectralParams& params);
std::string threshold_record(const ThresholdQuery& query, const ThresholdSolution& solution);
/// `member` is the index within the family.
std::string verify_record(const InequalitySpec& spec, const VerificationReport& report, std::size_t member,
                          const std::string& family);
std::string spectrum_record(const RadialProblem& problem, double epsilon, const EigenResult& result);
std::string comparison_record(const WeightComparison& comparison);

/// Fixed-width table of verify records (as written by verify_record) read from `in`.
/// Returns the number of records; malformed lines raise DomainError.
std::size_t report_table(std::istream& in, std::ostream& out);

void write_weight_scan(std::ostream& out, std::span<const WeightRow> rows);

}  // namespace hyperhardy
