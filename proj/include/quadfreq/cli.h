// Command-line front end: sparsify, verify, diagnose.
//
// Exit codes: 0 success, 1 parse or I/O error, 2 contract violation.

#ifndef QUADFREQ_CLI_H_
#define QUADFREQ_CLI_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "quadfreq/sparsifier.h"

namespace quadfreq {

inline constexpr std::string_view kToolVersion = "0.1.0";

// `args` excludes the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// The report.json document for a finished run.
nlohmann::ordered_json BuildReport(const SparsifyResult& result,
                                   const Instance& instance,
                                   const std::string& instance_path,
                                   const std::string& tour_path);

// One `u v original_distance fbar` line per edge, 1-indexed, sorted.
std::string FormatEdges(const Cycle& cycle);

}  // namespace quadfreq

#endif  // QUADFREQ_CLI_H_
