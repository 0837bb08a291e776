#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace uhax {

using Symbol = std::string;
using Word = std::vector<Symbol>;

// Tiebreaking direction of a hard-attention selection: Left picks the
// smallest maximizing position, Right the largest.
enum class Tiebreak { Left, Right };

// Strict masking: Future means a position sees only strictly earlier
// positions (t' < t), Past only strictly later ones (t' > t).
enum class MaskDir { Future, Past };

// Where acceptance is read: End is the virtual position T+1 past the
// string, Start the virtual position 0 before it (used by mirrored
// recognizers).
enum class AcceptAt { End, Start };

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " (line " + std::to_string(line_) +
                           ", column " + std::to_string(column_) + ")"),
        line(line_),
        column(column_) {}
};

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resource caps for the closure-style constructions. Overridable through
// the UHAX_CAPS environment variable, e.g. "states=50000,monoid=10000".
struct Caps {
  std::size_t states = 50000;
  std::size_t monoid = 10000;
};

inline Caps parse_caps(const std::string& text, Caps base = Caps{}) {
  Caps caps = base;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("malformed cap entry '" + item + "'");
    std::string key = item.substr(0, eq);
    unsigned long long value = std::stoull(item.substr(eq + 1));
    if (key == "states")
      caps.states = static_cast<std::size_t>(value);
    else if (key == "monoid")
      caps.monoid = static_cast<std::size_t>(value);
    else
      throw std::runtime_error("unknown cap '" + key + "'");
    pos = end + 1;
  }
  return caps;
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Nesting bound for the recursive-descent parsers.
constexpr int kMaxParseDepth = 4096;

inline int parse_int(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    int value = std::stoi(text, &used);
    if (trim(text.substr(used)).empty()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError("expected an integer, got '" + trim(text) + "'", line, 1);
}


// "(q0,q1,a)" <-> {"q0","q1","a"}. Single-component tuples are rendered
// without parentheses so that plain state names round-trip.
inline std::string tuple_token(const std::vector<std::string>& parts) {
  if (parts.size() == 1) return parts[0];
  return "(" + join(parts, ",") + ")";
}

inline std::vector<std::string> split_tuple(const std::string& token) {
  if (token.size() < 2 || token.front() != '(' || token.back() != ')')
    return {token};
  std::vector<std::string> parts;
  std::string body = token.substr(1, token.size() - 2);
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) {
      parts.push_back(body.substr(pos));
      break;
    }
    parts.push_back(body.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return parts;
}

// One symbol per character; used for words over single-letter alphabets.
inline Word to_word(const std::string& text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) w.emplace_back(1, c);
  return w;
}

// Words on the command line: whitespace-separated symbols if the text
// contains whitespace, otherwise one symbol per character.
inline Word parse_word(const std::string& text) {
  if (text.find_first_of(" \t") != std::string::npos) return split_ws(text);
  return to_word(text);
}

inline std::string format_word(const Word& w) {
  bool single = true;
  for (const Symbol& s : w)
    if (s.size() != 1) single = false;
  if (single) {
    std::string out;
    for (const Symbol& s : w) out += s;
    return out;
  }
  return join(w, " ");
}

inline Word reverse_word(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

inline std::vector<Symbol> sorted_unique(std::vector<Symbol> syms) {
  std::sort(syms.begin(), syms.end());
  syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
  return syms;
}

}  // namespace uhax
