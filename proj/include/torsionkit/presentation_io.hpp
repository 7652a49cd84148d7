#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "torsionkit/presentation.hpp"

namespace torsionkit {

/// Text form of a presentation:
///
///   gens: <n> | omega
///   names: a b c          (optional)
///   rel: <word>           (zero or more)
///   stream: <constructor> (zero or more)
///
/// The first `stream:` line of an omega file must be a source: `pn <p>
/// <reset>`, `qphi <budget> <program>`, `qcomp <reset>` or
/// `universal <limit>|all`. Later lines are transformers applied in order:
/// `tf` and `kt <k>`. Blank lines and lines starting with `#` are skipped.
/// Throws ParseError with a line number on malformed input.
Presentation parse_presentation(std::string_view text);

/// Inverse of parse_presentation. Throws std::invalid_argument when the
/// presentation carries no recipe (e.g. built from a lambda stream).
std::string format_presentation(const Presentation& p);

/// Sidecar lines `rel <k>: cause <event>`, one per item.
std::string format_provenance(const std::vector<Relator>& items);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

}  // namespace torsionkit
