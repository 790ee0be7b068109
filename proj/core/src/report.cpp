#include "secat/report.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>

namespace secat::report {

std::string digest(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << h;
    return ss.str();
}

json base(const std::string& command, const std::string& inputs) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    j["inputs_digest"] = digest(inputs);
    return j;
}

}  // namespace secat::report
