#include "torsionkit/presentation_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "torsionkit/computability.hpp"
#include "torsionkit/constructions.hpp"
#include "torsionkit/torsion.hpp"

namespace torsionkit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message);
}

Natural parse_natural(std::string_view s, std::size_t line) {
  Natural value = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    fail(line, "expected a natural number, got '" + std::string(s) + "'");
  }
  return value;
}

// Splits "head rest..." at the first blank.
std::pair<std::string_view, std::string_view> split_head(std::string_view s) {
  s = trim(s);
  const auto blank = s.find_first_of(" \t");
  if (blank == std::string_view::npos) return {s, {}};
  return {s.substr(0, blank), trim(s.substr(blank + 1))};
}

bool is_source(std::string_view name) {
  return name == "pn" || name == "qphi" || name == "qcomp" || name == "universal";
}

Presentation build_source(std::string_view name, std::string_view args, std::size_t line) {
  try {
    if (name == "pn") {
      auto [p, rest] = split_head(args);
      return build_Pn(parse_natural(p, line), parse_reset(rest));
    }
    if (name == "qcomp") return build_Qn_complement(parse_reset(args));
    if (name == "qphi") {
      auto [budget, rest] = split_head(args);
      return build_Qphi(Sigma2Predicate{parse_program_inline(rest), parse_natural(budget, line)});
    }
    if (args == "all") return universal_tf_assembly(std::nullopt);
    return universal_tf_assembly(parse_natural(args, line));
  } catch (const ParseError& e) {
    const std::string what = e.what();
    if (what.starts_with("line ")) throw;
    fail(line, what);
  } catch (const std::invalid_argument& e) {
    fail(line, e.what());
  }
}

Presentation apply_transformer(const Presentation& p, std::string_view name, std::string_view args, std::size_t line) {
  if (name == "tf") {
    if (!args.empty()) fail(line, "tf takes no arguments");
    return torsion_free_quotient(p);
  }
  if (name == "kt") {
    const Natural k = parse_natural(args, line);
    if (k == 0) fail(line, "kt needs k >= 1");
    return k_torsion_quotient(p, k);
  }
  fail(line, "unknown stream constructor '" + std::string(name) + "'");
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::optional<Natural> gens;
  bool omega = false;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::size_t>> rel_lines;
  std::vector<std::pair<std::string, std::size_t>> stream_lines;
  bool seen_gens = false;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) fail(line_no, "expected 'key: value'");
    const auto key = line.substr(0, colon);
    const auto value = trim(line.substr(colon + 1));
    if (!seen_gens) {
      if (key != "gens") fail(line_no, "first line must be 'gens:'");
      seen_gens = true;
      if (value == "omega") {
        omega = true;
      } else {
        gens = parse_natural(value, line_no);
      }
      continue;
    }
    if (key == "names") {
      if (!names.empty() || !rel_lines.empty() || !stream_lines.empty()) fail(line_no, "'names:' must follow 'gens:'");
      if (omega) fail(line_no, "omega presentations have no names");
      std::istringstream in{std::string(value)};
      for (std::string n; in >> n;) names.push_back(n);
      if (names.size() != *gens) fail(line_no, "expected " + std::to_string(*gens) + " names");
    } else if (key == "rel") {
      if (!stream_lines.empty()) fail(line_no, "'rel:' after 'stream:'");
      rel_lines.emplace_back(std::string(value), line_no);
    } else if (key == "stream") {
      stream_lines.emplace_back(std::string(value), line_no);
    } else {
      fail(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!seen_gens) throw ParseError("line 1: missing 'gens:'");

  Presentation p;
  std::size_t first_transformer = 0;
  if (omega) {
    if (!rel_lines.empty()) fail(rel_lines.front().second, "omega presentations take relators from a source");
    if (stream_lines.empty()) fail(line_no, "omega presentations need a 'stream:' source");
    auto [name, args] = split_head(stream_lines.front().first);
    if (!is_source(name)) fail(stream_lines.front().second, "first stream line must be a source");
    p = build_source(name, args, stream_lines.front().second);
    first_transformer = 1;
  } else {
    const NameTable table(names);
    std::vector<Word> rels;
    for (const auto& [text_line, no] : rel_lines) {
      try {
        rels.push_back(parse_word(text_line, table));
      } catch (const ParseError& e) {
        fail(no, e.what());
      }
      if (rels.back().alphabet_bound() > *gens) fail(no, "relator uses a generator outside the alphabet");
    }
    p = Presentation::finite(*gens, std::move(rels), names);
  }
  for (std::size_t i = first_transformer; i < stream_lines.size(); ++i) {
    auto [name, args] = split_head(stream_lines[i].first);
    if (is_source(name)) fail(stream_lines[i].second, "source '" + std::string(name) + "' needs 'gens: omega'");
    p = apply_transformer(p, name, args, stream_lines[i].second);
  }
  return p;
}

std::string format_presentation(const Presentation& p) {
  if (!p.serializable()) throw std::invalid_argument("presentation has no text form");
  std::string out;
  if (p.has_finite_alphabet()) {
    out += "gens: " + std::to_string(p.generator_count()) + "\n";
    if (p.names().has_custom_names()) {
      out += "names:";
      for (const auto& n : p.names().names()) out += " " + n;
      out += "\n";
    }
  } else {
    out += "gens: omega\n";
  }
  for (const auto& r : p.base_relators()) out += "rel: " + format_word(r, p.names()) + "\n";
  for (const auto& c : p.constructors()) out += "stream: " + c + "\n";
  return out;
}

std::string format_provenance(const std::vector<Relator>& items) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += "rel " + std::to_string(k) + ": cause " + items[k].cause + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace torsionkit
