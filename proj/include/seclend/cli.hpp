#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace seclend {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoConvergence = 2;
inline constexpr int kExitTargetUnreachable = 3;

struct CommonCliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed; // overrides the config seed
    int workers = 0;                   // 0 = hardware concurrency
    std::optional<std::string> out_dir;
    bool self_check = false; // run monotonicity assertions on produced grids
};

struct CalibrateCliOptions {
    std::string csv_path;
    std::string out_dir = ".";
    bool zero_drift = false; // zero the fitted drift in the report
};

int cmd_calibrate(const CalibrateCliOptions& opts);
int cmd_haircut(const CommonCliOptions& opts);
int cmd_price(const CommonCliOptions& opts);

} // namespace seclend
