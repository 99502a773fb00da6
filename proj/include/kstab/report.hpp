/**
 * Machine-readable reports and the command-line surface.  Every command
 * returns a Report (JSON): command metadata, an echo of the inputs, the
 * results, an oracle section when cross-checks ran, and timing.  Exact
 * rationals are always emitted as "p/q" strings, never coerced to floats.
 *
 * Exit codes: 0 = computed (an Unstable verdict is a result, not an error),
 * 1 = domain rejection, 2 = input error.
 */

#ifndef KSTAB_REPORT_HPP
#define KSTAB_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kstab/blowup.hpp"
#include "kstab/moment_solver.hpp"
#include "kstab/stability.hpp"

namespace kstab::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitInput = 2;

struct Outcome {
    json report;
    int exit_code = kExitOk;
    std::optional<std::string> csv;  // sweep table, when --format csv applies
};

json rat_json(const Rat& q);
json vec_json(const RatVec& v);
json poly_json(const EpsPoly& p);
json expansion_json(const EpsExpansion& e);
json verdict_json(const StabilityVerdict& v);

Outcome cmd_validate(const std::string& path);
Outcome cmd_invariants(const std::string& path, const std::string& u_text,
                       const std::optional<std::string>& v_text);
Outcome cmd_blowup(const std::string& path, const std::string& vertex_text,
                   const std::string& u_text, const std::optional<std::string>& eps_text,
                   const std::optional<std::string>& eps2_text);
Outcome cmd_check(const std::string& path, const std::string& face_text,
                  const std::string& grid_text);
Outcome cmd_find_point(const std::string& path, const std::string& grid_text);
Outcome cmd_oracle(const std::string& path, long kmax);
Outcome cmd_solve_moment(const std::string& path, const std::string& grid_text, double tol,
                         int order);

/// Full argv interface (CLI11); writes the report to stdout or --out and
/// returns the exit code.
int run(int argc, const char* const* argv);

}  // namespace kstab::cli

#endif
