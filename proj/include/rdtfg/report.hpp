#ifndef RDTFG_REPORT_HPP
#define RDTFG_REPORT_HPP

// Markdown is always rendered from the JSON document, so every number in the
// markdown comes from the JSON and every JSON number appears in the markdown.

#include <optional>
#include <span>
#include <string>

#include "rdtfg/audit.hpp"
#include "rdtfg/config.hpp"

namespace rdtfg::report {

std::string render_markdown(const std::string& title, const Json& doc);

/// Reference and configured value for every numeric threshold.
Json threshold_json(const RunConfig& config);

/// Monthly records in [from, to] from a verified audit trail, with the
/// thresholds of the latest recorded config.
Json examiner_report(std::span<const AuditEntry> entries, std::optional<Month> from, std::optional<Month> to,
                     const RunConfig& fallback_config);

} // namespace rdtfg::report

#endif
