#pragma once

#include "qwire/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qwire {

struct RunReport {
    std::vector<std::filesystem::path> files;  ///< in writing order
    std::vector<std::string> summary;          ///< one line per notable result
};

/// Executes every selected operation and writes `<name>_<output>` files into
/// out_dir (created if missing). Output bytes depend only on the config.
RunReport run(const RunConfig& config, const std::filesystem::path& out_dir, unsigned threads = 1);

}  // namespace qwire
