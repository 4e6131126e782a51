#pragma once

#include <functional>
#include <string>

namespace homprobe {

using WarningSink = std::function<void(const std::string&)>;

// Non-fatal diagnostics (clamped residues, narrow grids). The default sink
// writes one line per warning to stderr.
void warn(const std::string& message);

/// Replaces the process-wide sink and returns the previous one.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace homprobe
