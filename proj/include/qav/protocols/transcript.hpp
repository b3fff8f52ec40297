#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qav::proto {

// Record kinds cover every classical message and qubit-handoff event.
// vote_encode entries are emitted by every voter with an empty payload so
// their presence and order never depend on the vote bits themselves.
enum class Rec {
    config,
    votes,
    qds,
    qubits,
    ack,
    reveal,
    decoy_verdict,
    basis,
    key_confirm,
    vote_encode,
    broadcast,
    announce,
    measure,
    verdict,
    abort_event,
    note,
};

const char* rec_name(Rec kind);

struct TranscriptRecord {
    Rec kind;
    std::string sender;
    std::string receiver;
    std::string payload;
};

// Append-only log of a protocol run. Export emits one line per record:
// seq <tab> sender <tab> receiver <tab> kind <tab> payload-digest, which is
// byte-identical across runs with equal (config, votes, seed).
class Transcript {
  public:
    explicit Transcript(bool enabled = true) : enabled_(enabled) {}

    bool enabled() const { return enabled_; }
    void record(Rec kind, std::string sender, std::string receiver, std::string payload);
    const std::vector<TranscriptRecord>& records() const { return records_; }
    std::string export_lines() const;

    // Index of the first record of `kind`, or -1.
    long long first_index(Rec kind) const;
    long long last_index(Rec kind) const;
    long long count(Rec kind) const;

  private:
    bool enabled_;
    std::vector<TranscriptRecord> records_;
};

// FNV-1a 64-bit digest rendered as 16 hex characters.
std::string payload_digest(const std::string& payload);

}  // namespace qav::proto
