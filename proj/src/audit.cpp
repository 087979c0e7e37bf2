#include "rdtfg/audit.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "rdtfg/calendar.hpp"

namespace rdtfg {

namespace {

constexpr std::array<std::pair<AuditKind, std::string_view>, 6> kKindNames{{
    {AuditKind::RfiRecord, "rfi_record"},
    {AuditKind::DriftReport, "drift_report"},
    {AuditKind::FairnessScreen, "fairness_screen"},
    {AuditKind::SarBatch, "sar_batch"},
    {AuditKind::Certification, "certification"},
    {AuditKind::ConfigChange, "config_change"},
}};

const char* kLogName = "audit.jsonl";
const char* kHeadName = "audit.head";
const char* kLockName = "audit.lock";

bool is_hex64(const std::string& s) {
    return s.size() == 64 &&
           std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::optional<std::string> slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes data to a temp file in the same directory, fsyncs, then renames over
// the target so readers see either the old or the new file.
void atomic_write(const std::filesystem::path& target, const std::string& data) {
    const auto tmp = target.parent_path() / (target.filename().string() + ".tmp");
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    require(fd >= 0, ErrorKind::Io, "cannot create " + tmp.string() + ": " + std::strerror(errno));
    std::size_t written = 0;
    while (written < data.size()) {
        const auto n = ::write(fd, data.data() + written, data.size() - written);
        if (n < 0 && errno == EINTR) {
            continue;
        }
        if (n <= 0) {
            const std::string msg = std::strerror(errno);
            ::close(fd);
            fail(ErrorKind::Io, "write to " + tmp.string() + " failed: " + msg);
        }
        written += static_cast<std::size_t>(n);
    }
    const bool synced = ::fsync(fd) == 0;
    ::close(fd);
    require(synced, ErrorKind::Io, "fsync of " + tmp.string() + " failed");
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    require(!ec, ErrorKind::Io, "rename to " + target.string() + " failed: " + ec.message());
}

Json entry_json(const AuditEntry& e) {
    return Json{{"sequence", e.sequence},     {"recorded_at", e.recorded_at}, {"kind", std::string(to_string(e.kind))},
                {"payload", e.payload},       {"prev_hash", e.prev_hash},     {"entry_hash", e.entry_hash}};
}

// Parses one line strictly: exact key set, types, and canonical byte form.
std::optional<AuditEntry> parse_line(const std::string& line, std::string& why) {
    Json j;
    try {
        j = Json::parse(line);
    } catch (const Json::exception&) {
        why = "malformed JSON";
        return std::nullopt;
    }
    if (!j.is_object() || j.size() != 6 || !j.contains("sequence") || !j.contains("recorded_at") ||
        !j.contains("kind") || !j.contains("payload") || !j.contains("prev_hash") || !j.contains("entry_hash")) {
        why = "entry does not have the expected fields";
        return std::nullopt;
    }
    if (!j["sequence"].is_number_integer() || !j["recorded_at"].is_string() || !j["kind"].is_string() ||
        !j["prev_hash"].is_string() || !j["entry_hash"].is_string()) {
        why = "entry field has the wrong type";
        return std::nullopt;
    }
    if (j.dump() != line) {
        why = "entry is not in canonical form";
        return std::nullopt;
    }
    AuditEntry e;
    e.sequence = j["sequence"].get<std::int64_t>();
    e.recorded_at = j["recorded_at"].get<std::string>();
    const auto kind = parse_audit_kind(j["kind"].get<std::string>());
    if (!kind) {
        why = "unknown kind";
        return std::nullopt;
    }
    e.kind = *kind;
    e.payload = j["payload"];
    e.prev_hash = j["prev_hash"].get<std::string>();
    e.entry_hash = j["entry_hash"].get<std::string>();
    if (!parse_rfc3339(e.recorded_at)) {
        why = "recorded_at is not RFC 3339 UTC";
        return std::nullopt;
    }
    if (!is_hex64(e.prev_hash) || !is_hex64(e.entry_hash)) {
        why = "hash is not 64 lowercase hex characters";
        return std::nullopt;
    }
    return e;
}

std::int64_t now_epoch() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

} // namespace

std::string_view to_string(AuditKind kind) noexcept {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

std::optional<AuditKind> parse_audit_kind(std::string_view text) {
    for (const auto& [k, name] : kKindNames) {
        if (name == text) {
            return k;
        }
    }
    return std::nullopt;
}

namespace audit {

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    require(ctx && EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) == 1 &&
                EVP_DigestUpdate(ctx.get(), data.data(), data.size()) == 1 &&
                EVP_DigestFinal_ex(ctx.get(), digest, &len) == 1,
            ErrorKind::Io, "SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string compute_hash(const AuditEntry& e) {
    std::string material = std::to_string(e.sequence);
    material += '\n';
    material += e.recorded_at;
    material += '\n';
    material += to_string(e.kind);
    material += '\n';
    material += e.payload.dump();
    material += '\n';
    material += e.prev_hash;
    return sha256_hex(material);
}

std::string to_line(const AuditEntry& entry) { return entry_json(entry).dump(); }

VerifyResult verify(const std::filesystem::path& dir) {
    VerifyResult result;
    const auto log = slurp(dir / kLogName);
    const auto head_text = slurp(dir / kHeadName);
    auto broken = [&](std::int64_t seq, std::string why) {
        result.ok = false;
        result.first_broken_sequence = seq;
        result.reason = std::move(why);
        return result;
    };
    if (!log) {
        if (head_text) {
            return broken(0, "audit.head present but audit.jsonl missing");
        }
        return result;
    }

    std::string prev = kGenesisHash;
    std::size_t pos = 0;
    std::int64_t seq = 0;
    while (pos < log->size()) {
        const auto nl = log->find('\n', pos);
        if (nl == std::string::npos) {
            return broken(seq, "last entry is not newline-terminated");
        }
        const std::string line = log->substr(pos, nl - pos);
        pos = nl + 1;
        std::string why;
        auto entry = parse_line(line, why);
        if (!entry) {
            return broken(seq, why);
        }
        if (entry->sequence != seq) {
            return broken(seq, "sequence " + std::to_string(entry->sequence) + " out of order");
        }
        if (entry->prev_hash != prev) {
            return broken(seq, "prev_hash does not match predecessor");
        }
        if (compute_hash(*entry) != entry->entry_hash) {
            return broken(seq, "entry_hash does not match contents");
        }
        prev = entry->entry_hash;
        result.entries.push_back(std::move(*entry));
        ++seq;
    }

    if (!head_text) {
        return broken(seq, "audit.head missing");
    }
    Json head;
    try {
        head = Json::parse(*head_text);
    } catch (const Json::exception&) {
        return broken(seq, "audit.head is malformed");
    }
    if (!head.is_object() || !head.contains("count") || !head["count"].is_number_integer() ||
        !head.contains("entry_hash") || !head["entry_hash"].is_string()) {
        return broken(seq, "audit.head is malformed");
    }
    const auto count = head["count"].get<std::int64_t>();
    if (count != seq) {
        // Entries past the last present one were removed, or extra ones appeared.
        return broken(std::min(count, seq), "audit.head records " + std::to_string(count) + " entries, found " +
                                                std::to_string(seq));
    }
    if (head["entry_hash"].get<std::string>() != prev) {
        return broken(seq == 0 ? 0 : seq - 1, "audit.head hash does not match last entry");
    }
    return result;
}

std::vector<AuditEntry> read(const std::filesystem::path& dir) {
    auto result = verify(dir);
    require(result.ok, ErrorKind::ChainBroken,
            "audit chain broken at sequence " + std::to_string(result.first_broken_sequence.value_or(0)) + ": " +
                result.reason);
    return std::move(result.entries);
}

Writer::Writer(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    require(!ec, ErrorKind::Io, "cannot create audit directory " + dir_.string() + ": " + ec.message());
    const auto lock_path = dir_ / kLockName;
    lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    require(lock_fd_ >= 0, ErrorKind::Io, "cannot open " + lock_path.string() + ": " + std::strerror(errno));
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        fail(ErrorKind::LockHeld, "audit store " + dir_.string() + " is locked by another writer");
    }
    try {
        entries_ = read(dir_);
    } catch (...) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw;
    }
}

Writer::~Writer() {
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

const AuditEntry& Writer::append(AuditKind kind, Json payload, std::optional<std::int64_t> recorded_at) {
    AuditEntry e;
    e.sequence = static_cast<std::int64_t>(entries_.size());
    e.recorded_at = to_rfc3339(recorded_at.value_or(now_epoch()));
    e.kind = kind;
    e.payload = std::move(payload);
    e.prev_hash = entries_.empty() ? kGenesisHash : entries_.back().entry_hash;
    e.entry_hash = compute_hash(e);

    std::string contents = slurp(dir_ / kLogName).value_or("");
    contents += to_line(e);
    contents += '\n';
    atomic_write(dir_ / kLogName, contents);
    const Json head{{"count", e.sequence + 1}, {"entry_hash", e.entry_hash}};
    atomic_write(dir_ / kHeadName, head.dump() + "\n");

    entries_.push_back(std::move(e));
    return entries_.back();
}

} // namespace audit
} // namespace rdtfg
