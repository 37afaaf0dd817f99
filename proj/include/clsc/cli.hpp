#pragma once

#include <iosfwd>
#include <string>

#include "clsc/instance_io.hpp"
#include "clsc/moga.hpp"
#include "clsc/scalarize.hpp"

namespace clsc {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;      // domain validation failure
inline constexpr int kExitIo = 2;           // unreadable file / malformed JSON
inline constexpr int kExitIntractable = 3;  // tractability guard

struct SolveOptions {
  std::string instance_path;
  std::string method;  // "nsga2" or "wsum"
  std::string out_dir;
  GaConfig ga;
  std::size_t grid = 10;
  std::size_t threads = 1;
};

int cmd_validate(const std::string& instance_path, std::ostream& out);
int cmd_gen_instance(const std::string& template_name, std::uint64_t seed,
                     const std::string& out_path, std::ostream& out);
int cmd_solve(const SolveOptions& opt, std::ostream& out);
int cmd_compare(const SolveOptions& opt, std::ostream& out);

/// Full argv entry point used by the binary.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Emitters are pure so the exact bytes can be tested. Fronts are emitted in
// canonical-objective order with solution_id equal to the row index.

std::string front_csv(const ParetoFront& front, const std::string& method);
std::string sweep_csv(const ParetoFront& front);
std::string stats_csv(const std::vector<GenerationStats>& stats);
std::string compare_csv(const ParetoFront& merged_front);
std::string solutions_json(const NetworkInstance& inst, const ParetoFront& front,
                           const std::string& method);

struct ParsedSolution {
  ObjectiveVector objectives;
  Solution solution;
};

/// Inverse of solutions_json for the flow/opening payload; exact round-trip.
std::vector<ParsedSolution> parse_solutions_json(const NetworkInstance& inst,
                                                 const std::string& text);

}  // namespace clsc
