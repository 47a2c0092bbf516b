#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sqrs/protocol.hpp"

namespace sqrs {

/// One JSON object per round, fields in this order: round_index, prep_kind,
/// prep_phases (quarter turns), bobs [{applied, basis, outcome}], detected, attack.
/// `attack` is null or {resent_kind, resent_phases, measured_bases, measured_outcomes}.
std::string transcript_to_jsonl(std::span<const RoundTranscript> rounds);
void write_transcript_jsonl(std::ostream &os, std::span<const RoundTranscript> rounds);

/// Inverse of transcript_to_jsonl. Throws std::runtime_error with the line number on
/// malformed input.
std::vector<RoundTranscript> read_transcript_jsonl(std::istream &is);

/// Writes `contents` to `path`, creating parent directories. Throws on I/O failure.
void write_text_file(const std::string &path, const std::string &contents);

}  // namespace sqrs
