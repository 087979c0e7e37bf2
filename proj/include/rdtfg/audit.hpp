#ifndef RDTFG_AUDIT_HPP
#define RDTFG_AUDIT_HPP

// Append-only, hash-chained audit store. A store is a directory holding
//
//   audit.jsonl   one canonical JSON entry per line
//   audit.head    {"count": n, "entry_hash": "<hash of last entry>"}
//   audit.lock    advisory writer lock
//
// entry_hash = sha256(sequence "\n" recorded_at "\n" kind "\n" payload "\n" prev_hash)
// with payload in canonical form (sorted keys, no whitespace).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdtfg/serialize.hpp"

namespace rdtfg {

enum class AuditKind { RfiRecord, DriftReport, FairnessScreen, SarBatch, Certification, ConfigChange };

std::string_view to_string(AuditKind kind) noexcept;
std::optional<AuditKind> parse_audit_kind(std::string_view text);

struct AuditEntry {
    std::int64_t sequence = 0;
    std::string recorded_at;
    AuditKind kind = AuditKind::RfiRecord;
    Json payload;
    std::string prev_hash;
    std::string entry_hash;
};

namespace audit {

inline const std::string kGenesisHash(64, '0');

std::string sha256_hex(std::string_view data);
std::string compute_hash(const AuditEntry& entry);
/// The exact line written to audit.jsonl, without the newline.
std::string to_line(const AuditEntry& entry);

struct VerifyResult {
    bool ok = true;
    std::optional<std::int64_t> first_broken_sequence;
    std::string reason;
    std::vector<AuditEntry> entries; // the verified prefix
};

/// Walks the whole chain. A missing store verifies as empty.
VerifyResult verify(const std::filesystem::path& dir);

/// Verified entries; throws ChainBroken if the store does not verify.
std::vector<AuditEntry> read(const std::filesystem::path& dir);

/// Holds the store's exclusive lock for its lifetime.
class Writer {
public:
    /// Creates the directory if needed. Throws LockHeld if another writer
    /// holds the lock, ChainBroken if the existing chain does not verify.
    explicit Writer(std::filesystem::path dir);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    /// recorded_at defaults to the current UTC time.
    const AuditEntry& append(AuditKind kind, Json payload, std::optional<std::int64_t> recorded_at = std::nullopt);

    const std::vector<AuditEntry>& entries() const { return entries_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    int lock_fd_ = -1;
    std::vector<AuditEntry> entries_;
};

} // namespace audit
} // namespace rdtfg

#endif
