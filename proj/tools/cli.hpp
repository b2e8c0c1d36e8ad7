#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "opfimb/evaluation.hpp"

namespace opfimb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct Config {
    std::string subcommand;
    std::filesystem::path input;
    std::filesystem::path output;
    std::filesystem::path report;
    std::vector<Method> methods;
    std::optional<std::uint64_t> seed;
    std::size_t runs = 20;
    std::vector<std::size_t> kmax_grid = kDefaultKmaxGrid;
    std::string label_column;
    std::optional<std::string> positive_label;
    double val_fraction = 0.15;
    bool fit_scaler_on_train = false;
    bool record_timing = false;
    /// The invocation's flags, echoed into report headers.
    std::string echo;
};

/// Parses argv and dispatches; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_resample(const Config& cfg, std::ostream& out);
int cmd_evaluate(const Config& cfg, std::ostream& out);

/// Writes through a sibling temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace opfimb::cli
