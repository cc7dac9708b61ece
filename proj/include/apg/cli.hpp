#pragma once

#include <string>
#include <vector>

#include "apg/common.hpp"
#include "apg/json.hpp"

namespace apg::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Serializes with doubles at 12 significant digits and insertion field
/// order. Reruns with the same seed and thread flag are byte-identical.
std::string render_json(const ojson& doc);

/// Stable digest of (command, canonicalized parameter map).
std::string param_hash(const std::string& command, const ojson& params);

/// Run record: command, full parameter map, master seed, tool version,
/// timestamp, parameter hash. Written to the JSONL log, never to stdout
/// (the timestamp would break stdout determinism).
ojson make_manifest(const std::string& command, const ojson& params, u64 seed);

/// Routes a full command line (without argv[0]) to a subcommand, emits the
/// result to stdout, optionally appends {manifest, result} to a JSONL log.
/// Exit codes: 0 success, 1 usage/domain/resource error, 2 when a
/// mathematical verification fails (Weil bound, decomposition, certificate).
int dispatch(const std::vector<std::string>& args);

}  // namespace apg::cli
