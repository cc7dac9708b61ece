#pragma once

#include <json.hpp>

namespace apg {

/// Order-preserving JSON document; field order in reports is part of the
/// output contract (reruns must be byte-identical).
using ojson = nlohmann::ordered_json;

}  // namespace apg
