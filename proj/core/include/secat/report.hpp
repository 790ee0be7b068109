#pragma once

#include <string>

#include <json.hpp>

namespace secat::report {

// Ordered JSON keeps payloads byte-identical across runs.
using json = nlohmann::ordered_json;

// FNV-1a hex digest of the raw input text, for the inputs_digest field.
std::string digest(const std::string& data);

// { schema: 1, command, inputs_digest } skeleton every payload starts from.
json base(const std::string& command, const std::string& inputs);

}  // namespace secat::report
