#pragma once

#include <ostream>
#include <string>

#include "lexiport/translator.h"

namespace lexiport::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
};

// Human-readable "key: value" lines in a fixed order, elapsed included.
std::string report_render(const TranslationReport& report);

// The report.json document: every TranslationReport field, fixed order.
std::string report_json(const TranslationReport& report);

// Runs one subcommand. Machine output goes to `out`, progress and
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lexiport::cli
