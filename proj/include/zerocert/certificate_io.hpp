#pragma once

#include <optional>
#include <string>

#include "zerocert/certify.hpp"
#include "zerocert/config.hpp"
#include "zerocert/delta.hpp"
#include "zerocert/minimax.hpp"

namespace zerocert {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Versioned certificate: command and config echo plus exactly one result
/// payload. All numbers are printed with 17 significant digits so parsing
/// reproduces the values bit-for-bit; parse(serialize(x)) == x.
struct CertificateFile {
    int schema_version = kSchemaVersion;
    std::string library_version = kLibraryVersion;
    std::string command;
    std::string timestamp;  // excluded from determinism comparisons
    ProblemConfig config;

    std::optional<DeltaBounds> delta;
    std::optional<CertifyResult> certify;
    std::optional<SearchResult> search;
    std::optional<Example11Table> example11;
    std::optional<GapCheckResult> gap_check;
    std::optional<ConvexityCheckResult> convexity_check;
};

std::string serialize_certificate(const CertificateFile& cert);
CertificateFile parse_certificate(const std::string& text);

/// CSV for the example11 table; '.' decimal, 17 significant digits, fixed
/// column order.
std::string example11_csv(const Example11Table& table);

/// Write via a temp file in the same directory plus rename.
void write_file_atomic(const std::string& path, const std::string& content);

/// %.17g formatting used across all text output.
std::string fmt_double(double v);

}  // namespace zerocert
