#pragma once

#include "idbounds/bounds.hpp"
#include "idbounds/levy_model.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace idbounds::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> count;
    std::optional<std::string> out;
};

// Applies command-line overrides; the result is the effective config echoed into reports.
json effective_config(json cfg, const Overrides& o);

// Builders; failures are ConfigError naming the offending field.
LevyModel model_from_config(const json& cfg);
TailBound bound_from_config(const json& cfg);

struct RunOutcome {
    int exit_code = kExitOk;
    json summary;
};

// Executes the task; artifacts go to out.dir. Throws Error on failures.
RunOutcome run(const json& cfg);

// Wraps run() and maps errors to exit code 1 with a message on `err`.
int run_main(const json& cfg, std::ostream& log, std::ostream& err);

json load_config(const std::string& path);

} // namespace idbounds::cli
