#pragma once

#include "piatr/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace piatr {

// 17 significant digits (%.17g); "nan"/"inf"/"-inf" for
// non-finite values.
std::string format_double(double v);

inline constexpr const char* kTraceHeader = "k,fgap,vel,subgrad,xnorm,dist_xstar";

void write_trace_csv(const Trace& trace, std::ostream& out);
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);

// Reads records only. Throws ParseError (corpus.hpp) on malformed input.
std::vector<IterateRecord> read_trace_csv(const std::filesystem::path& path);

// "key = value" per line, in snapshot order.
void write_sidecar(const ConfigSnapshot& snapshot, const std::filesystem::path& path);

} // namespace piatr
