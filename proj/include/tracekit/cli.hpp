#pragma once
// The tracekit command line: generate, likelihood, reconstruct, cluster and
// bench subcommands.

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "tracekit/bench.hpp"
#include "tracekit/io.hpp"

namespace tracekit {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitIo = 3,
    kExitTargetUnreachable = 4,
};

/// Runs one invocation. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`; the return value is the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

using ExperimentOutput = std::variant<BenchReport, TraceComplexityResult>;

/// Runs every algorithm of a manifest, in order. Outputs depend only on the
/// manifest, never on `threads`.
std::vector<ExperimentOutput> run_manifest(const ExperimentManifest& manifest, unsigned threads,
                                           bool timing = false);

}  // namespace tracekit
