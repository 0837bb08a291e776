#pragma once

#include <array>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uhax/util.hpp"

namespace uhax {

enum class LtlOp : std::uint8_t {
  Atom,
  Not,
  And,
  Or,
  Past,
  Future,
  Since,
  Until
};

// Syntactic fragment by temporal-operator occurrence. Purely Boolean
// formulas classify as POnly.
enum class Fragment { POnly, FOnly, PF, Full };

inline const char* fragment_name(Fragment f) {
  switch (f) {
    case Fragment::POnly: return "P-only";
    case Fragment::FOnly: return "F-only";
    case Fragment::PF: return "PF";
    case Fragment::Full: return "Full";
  }
  return "?";
}

// A formula is a DAG of hash-consed nodes stored in one arena; children
// always precede parents, the root is the last reachable node. The arena
// is immutable once built.
struct LtlFormula {
  struct Node {
    LtlOp op = LtlOp::Atom;
    int sym = -1;  // alphabet index, atoms only
    int lhs = -1;
    int rhs = -1;
  };

  std::vector<Symbol> alphabet;  // sorted
  std::vector<Node> nodes;
  int root = -1;

  std::size_t node_count() const { return nodes.size(); }

  int depth() const {
    std::vector<int> d(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Node& n = nodes[i];
      if (n.op == LtlOp::Atom) continue;
      int dl = n.lhs >= 0 ? d[n.lhs] : -1;
      int dr = n.rhs >= 0 ? d[n.rhs] : -1;
      d[i] = 1 + std::max(dl, dr);
    }
    return root >= 0 ? d[root] : 0;
  }
};

// Constructs formulas with structural sharing. Identical subtrees get the
// same node index, which keeps machine-generated formulas (and their
// evaluation tables) small.
class LtlBuilder {
 public:
  explicit LtlBuilder(std::vector<Symbol> alphabet)
      : alphabet_(sorted_unique(std::move(alphabet))) {
    if (alphabet_.empty())
      throw std::runtime_error("formula alphabet must be non-empty");
    for (std::size_t i = 0; i < alphabet_.size(); ++i)
      symbol_index_[alphabet_[i]] = static_cast<int>(i);
  }

  const std::vector<Symbol>& alphabet() const { return alphabet_; }

  int atom(const Symbol& sym) {
    auto it = symbol_index_.find(sym);
    if (it == symbol_index_.end())
      throw std::runtime_error("atom symbol '" + sym +
                               "' not in the declared alphabet");
    return intern(LtlOp::Atom, it->second, -1, -1);
  }

  int negation(int c) { return intern(LtlOp::Not, -1, c, -1); }
  int conj(int a, int b) { return intern(LtlOp::And, -1, a, b); }
  int disj(int a, int b) { return intern(LtlOp::Or, -1, a, b); }
  int past(int c) { return intern(LtlOp::Past, -1, c, -1); }
  int future(int c) { return intern(LtlOp::Future, -1, c, -1); }
  int since(int a, int b) { return intern(LtlOp::Since, -1, a, b); }
  int until(int a, int b) { return intern(LtlOp::Until, -1, a, b); }

  int conj_all(const std::vector<int>& parts) {
    if (parts.empty()) return truth();
    int acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = conj(acc, parts[i]);
    return acc;
  }

  int disj_all(const std::vector<int>& parts) {
    if (parts.empty()) return falsity();
    int acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = disj(acc, parts[i]);
    return acc;
  }

  // False and true are spelled with the first alphabet symbol: a & !a and
  // its negation.
  int falsity() {
    int a = atom(alphabet_[0]);
    return conj(a, negation(a));
  }
  int truth() { return negation(falsity()); }

  // Extracts the subgraph reachable from root into a compact formula.
  LtlFormula take(int root) const {
    LtlFormula f;
    f.alphabet = alphabet_;
    std::vector<int> remap(nodes_.size(), -1);
    // Children precede parents in the arena, so one ordered pass suffices.
    std::vector<char> needed(nodes_.size(), 0);
    needed[root] = 1;
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      if (!needed[i]) continue;
      const LtlFormula::Node& n = nodes_[i];
      if (n.lhs >= 0) needed[n.lhs] = 1;
      if (n.rhs >= 0) needed[n.rhs] = 1;
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!needed[i]) continue;
      LtlFormula::Node n = nodes_[i];
      if (n.lhs >= 0) n.lhs = remap[n.lhs];
      if (n.rhs >= 0) n.rhs = remap[n.rhs];
      remap[i] = static_cast<int>(f.nodes.size());
      f.nodes.push_back(n);
    }
    f.root = remap[root];
    return f;
  }

 private:
  int intern(LtlOp op, int sym, int lhs, int rhs) {
    std::array<int, 4> key{static_cast<int>(op), sym, lhs, rhs};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    nodes_.push_back({op, sym, lhs, rhs});
    int id = static_cast<int>(nodes_.size()) - 1;
    memo_.emplace(key, id);
    return id;
  }

  std::vector<Symbol> alphabet_;
  std::map<Symbol, int> symbol_index_;
  std::vector<LtlFormula::Node> nodes_;
  std::map<std::array<int, 4>, int> memo_;
};

inline bool structurally_equal(const LtlFormula& a, const LtlFormula& b) {
  if (a.alphabet != b.alphabet) return false;
  if (a.root < 0 || b.root < 0) return a.root == b.root;
  std::set<std::pair<int, int>> seen;
  std::vector<std::pair<int, int>> stack{{a.root, b.root}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    if (!seen.insert({x, y}).second) continue;
    const auto& nx = a.nodes[x];
    const auto& ny = b.nodes[y];
    if (nx.op != ny.op || nx.sym != ny.sym) return false;
    if ((nx.lhs >= 0) != (ny.lhs >= 0) || (nx.rhs >= 0) != (ny.rhs >= 0))
      return false;
    if (nx.lhs >= 0) stack.push_back({nx.lhs, ny.lhs});
    if (nx.rhs >= 0) stack.push_back({nx.rhs, ny.rhs});
  }
  return true;
}

inline bool operator==(const LtlFormula& a, const LtlFormula& b) {
  return structurally_equal(a, b);
}

inline bool contains_op(const LtlFormula& f, LtlOp op) {
  for (const auto& n : f.nodes)
    if (n.op == op) return true;
  return false;
}

inline Fragment fragment_of(const LtlFormula& f) {
  if (contains_op(f, LtlOp::Since) || contains_op(f, LtlOp::Until))
    return Fragment::Full;
  bool p = contains_op(f, LtlOp::Past);
  bool fu = contains_op(f, LtlOp::Future);
  if (p && fu) return Fragment::PF;
  if (fu) return Fragment::FOnly;
  return Fragment::POnly;
}

// Truth table of every subformula at every position of one word.
// Positions are indexed 0..T+1: 0 and T+1 are the virtual endpoints where
// all atoms are false, and the temporal operators quantify over the real
// positions 1..T only. Past/Future are prefix/suffix disjunctions; Since
// and Until use their one-step recurrences, so the whole table costs
// O(|nodes| * T).
class LtlRun {
 public:
  LtlRun(const LtlFormula& f, const Word& w) : length_(static_cast<int>(w.size())) {
    std::vector<int> word_sym(w.size());
    {
      std::map<Symbol, int> index;
      for (std::size_t i = 0; i < f.alphabet.size(); ++i)
        index[f.alphabet[i]] = static_cast<int>(i);
      for (std::size_t i = 0; i < w.size(); ++i) {
        auto it = index.find(w[i]);
        if (it == index.end())
          throw std::runtime_error("word symbol '" + w[i] +
                                   "' outside the formula alphabet");
        word_sym[i] = it->second;
      }
    }
    const int t_max = length_ + 1;
    table_.assign(f.nodes.size(), std::vector<char>(t_max + 1, 0));
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
      const LtlFormula::Node& n = f.nodes[i];
      std::vector<char>& row = table_[i];
      switch (n.op) {
        case LtlOp::Atom:
          for (int t = 1; t <= length_; ++t) row[t] = word_sym[t - 1] == n.sym;
          break;
        case LtlOp::Not: {
          const auto& c = table_[n.lhs];
          for (int t = 0; t <= t_max; ++t) row[t] = !c[t];
          break;
        }
        case LtlOp::And: {
          const auto& a = table_[n.lhs];
          const auto& b = table_[n.rhs];
          for (int t = 0; t <= t_max; ++t) row[t] = a[t] && b[t];
          break;
        }
        case LtlOp::Or: {
          const auto& a = table_[n.lhs];
          const auto& b = table_[n.rhs];
          for (int t = 0; t <= t_max; ++t) row[t] = a[t] || b[t];
          break;
        }
        case LtlOp::Past: {
          const auto& c = table_[n.lhs];
          for (int t = 2; t <= t_max; ++t) row[t] = row[t - 1] || c[t - 1];
          break;
        }
        case LtlOp::Future: {
          const auto& c = table_[n.lhs];
          for (int t = length_ - 1; t >= 0; --t) row[t] = row[t + 1] || c[t + 1];
          break;
        }
        case LtlOp::Since: {
          const auto& a = table_[n.lhs];
          const auto& b = table_[n.rhs];
          for (int t = 2; t <= t_max; ++t)
            row[t] = b[t - 1] || (a[t - 1] && row[t - 1]);
          break;
        }
        case LtlOp::Until: {
          const auto& a = table_[n.lhs];
          const auto& b = table_[n.rhs];
          for (int t = length_ - 1; t >= 0; --t)
            row[t] = b[t + 1] || (a[t + 1] && row[t + 1]);
          break;
        }
      }
    }
    root_ = f.root;
  }

  int length() const { return length_; }

  // pos in 0..T+1.
  bool at(int pos) const {
    if (pos < 0 || pos > length_ + 1)
      throw std::out_of_range("position " + std::to_string(pos) +
                              " out of range 0.." + std::to_string(length_ + 1));
    return table_[root_][pos] != 0;
  }

 private:
  int length_;
  int root_;
  std::vector<std::vector<char>> table_;
};

// Truth of the formula at a position in 1..T+1 (T+1 is the virtual
// past-the-end position).
inline bool eval_ltl(const LtlFormula& f, const Word& w, int pos) {
  if (pos < 1 || pos > static_cast<int>(w.size()) + 1)
    throw std::out_of_range("position " + std::to_string(pos) +
                            " out of range 1.." +
                            std::to_string(w.size() + 1));
  return LtlRun(f, w).at(pos);
}

inline bool ltl_accepts(const LtlFormula& f, const Word& w,
                        AcceptAt at = AcceptAt::End) {
  LtlRun run(f, w);
  return run.at(at == AcceptAt::End ? static_cast<int>(w.size()) + 1 : 0);
}

// Rebuilds a formula inside another builder (whose alphabet must cover
// the formula's atoms); returns the root node id.
inline int import_formula(LtlBuilder& b, const LtlFormula& f) {
  std::vector<int> remap(f.nodes.size(), -1);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const LtlFormula::Node& n = f.nodes[i];
    switch (n.op) {
      case LtlOp::Atom: remap[i] = b.atom(f.alphabet[n.sym]); break;
      case LtlOp::Not: remap[i] = b.negation(remap[n.lhs]); break;
      case LtlOp::And: remap[i] = b.conj(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Or: remap[i] = b.disj(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Past: remap[i] = b.past(remap[n.lhs]); break;
      case LtlOp::Future: remap[i] = b.future(remap[n.lhs]); break;
      case LtlOp::Since: remap[i] = b.since(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Until: remap[i] = b.until(remap[n.lhs], remap[n.rhs]); break;
    }
  }
  return remap[f.root];
}

// Swaps Past<->Future and Since<->Until; Boolean structure is untouched.
inline LtlFormula mirror_ltl(const LtlFormula& f) {
  LtlBuilder b(f.alphabet);
  std::vector<int> remap(f.nodes.size(), -1);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const LtlFormula::Node& n = f.nodes[i];
    switch (n.op) {
      case LtlOp::Atom: remap[i] = b.atom(f.alphabet[n.sym]); break;
      case LtlOp::Not: remap[i] = b.negation(remap[n.lhs]); break;
      case LtlOp::And: remap[i] = b.conj(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Or: remap[i] = b.disj(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Past: remap[i] = b.future(remap[n.lhs]); break;
      case LtlOp::Future: remap[i] = b.past(remap[n.lhs]); break;
      case LtlOp::Since: remap[i] = b.until(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Until: remap[i] = b.since(remap[n.lhs], remap[n.rhs]); break;
    }
  }
  return b.take(remap[f.root]);
}

// ---------------------------------------------------------------------
// Parsing. Grammar: prefix !, P, F bind tightest, then the non-associative
// infix S and U, then &, then |. Atoms are single lowercase letters or
// "quoted" tokens. Optional first line: alphabet: a b
// ---------------------------------------------------------------------

namespace detail {

struct LtlToken {
  enum Type { TAtom, TNot, TAnd, TOr, TPast, TFuture, TSince, TUntil,
              TLParen, TRParen, TEnd };
  Type type;
  Symbol sym;
  int line;
  int col;
};

inline std::vector<LtlToken> lex_ltl(const std::string& text, int first_line) {
  std::vector<LtlToken> out;
  int line = first_line, col = 1;
  std::size_t i = 0;
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(c);
      ++i;
      continue;
    }
    LtlToken tok{LtlToken::TEnd, "", line, col};
    switch (c) {
      case '!': tok.type = LtlToken::TNot; break;
      case '&': tok.type = LtlToken::TAnd; break;
      case '|': tok.type = LtlToken::TOr; break;
      case 'P': tok.type = LtlToken::TPast; break;
      case 'F': tok.type = LtlToken::TFuture; break;
      case 'S': tok.type = LtlToken::TSince; break;
      case 'U': tok.type = LtlToken::TUntil; break;
      case '(': tok.type = LtlToken::TLParen; break;
      case ')': tok.type = LtlToken::TRParen; break;
      case '"': {
        std::size_t close = text.find('"', i + 1);
        if (close == std::string::npos)
          throw ParseError("unterminated quoted atom", line, col);
        tok.type = LtlToken::TAtom;
        tok.sym = text.substr(i + 1, close - i - 1);
        if (tok.sym.empty())
          throw ParseError("empty quoted atom", line, col);
        for (std::size_t k = i; k <= close; ++k) bump(text[k]);
        i = close + 1;
        out.push_back(tok);
        continue;
      }
      default:
        if (c >= 'a' && c <= 'z') {
          tok.type = LtlToken::TAtom;
          tok.sym = Symbol(1, c);
        } else {
          throw ParseError(std::string("unexpected character '") + c + "'",
                           line, col);
        }
    }
    bump(c);
    ++i;
    out.push_back(tok);
  }
  out.push_back({LtlToken::TEnd, "", line, col});
  return out;
}

class LtlParser {
 public:
  LtlParser(std::vector<LtlToken> toks, LtlBuilder& b)
      : toks_(std::move(toks)), b_(b) {}

  int parse() {
    int f = parse_or();
    expect(LtlToken::TEnd, "end of formula");
    return f;
  }

 private:
  struct DepthGuard {
    int& depth;
    explicit DepthGuard(int& d, const LtlToken& at) : depth(d) {
      if (++depth > kMaxParseDepth)
        throw ParseError("formula nests too deeply", at.line, at.col);
    }
    ~DepthGuard() { --depth; }
  };

  const LtlToken& peek() const { return toks_[pos_]; }
  LtlToken next() { return toks_[pos_++]; }
  void expect(LtlToken::Type t, const std::string& what) {
    if (peek().type != t)
      throw ParseError("expected " + what, peek().line, peek().col);
    ++pos_;
  }

  int parse_or() {
    DepthGuard guard(depth_, peek());
    int f = parse_and();
    while (peek().type == LtlToken::TOr) {
      next();
      f = b_.disj(f, parse_and());
    }
    return f;
  }

  int parse_and() {
    DepthGuard guard(depth_, peek());
    int f = parse_since();
    while (peek().type == LtlToken::TAnd) {
      next();
      f = b_.conj(f, parse_since());
    }
    return f;
  }

  int parse_since() {
    DepthGuard guard(depth_, peek());
    int f = parse_unary();
    if (peek().type == LtlToken::TSince || peek().type == LtlToken::TUntil) {
      bool is_since = next().type == LtlToken::TSince;
      int g = parse_unary();
      if (peek().type == LtlToken::TSince || peek().type == LtlToken::TUntil)
        throw ParseError("S and U are non-associative; parenthesize chains",
                         peek().line, peek().col);
      f = is_since ? b_.since(f, g) : b_.until(f, g);
    }
    return f;
  }

  int parse_unary() {
    DepthGuard guard(depth_, peek());
    switch (peek().type) {
      case LtlToken::TNot: next(); return b_.negation(parse_unary());
      case LtlToken::TPast: next(); return b_.past(parse_unary());
      case LtlToken::TFuture: next(); return b_.future(parse_unary());
      default: return parse_primary();
    }
  }

  int parse_primary() {
    const LtlToken& t = peek();
    if (t.type == LtlToken::TAtom) {
      next();
      try {
        return b_.atom(t.sym);
      } catch (const std::runtime_error& e) {
        throw ParseError(e.what(), t.line, t.col);
      }
    }
    if (t.type == LtlToken::TLParen) {
      next();
      int f = parse_or();
      expect(LtlToken::TRParen, "')'");
      return f;
    }
    throw ParseError("expected atom, '!', 'P', 'F' or '('", t.line, t.col);
  }

  std::vector<LtlToken> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  LtlBuilder& b_;
};

inline std::vector<Symbol> collect_atoms(const std::vector<LtlToken>& toks) {
  std::vector<Symbol> syms;
  for (const auto& t : toks)
    if (t.type == LtlToken::TAtom) syms.push_back(t.sym);
  return sorted_unique(syms);
}

}  // namespace detail

inline LtlFormula parse_ltl(const std::string& text) {
  // Optional header on the first non-blank line.
  std::string body = text;
  int first_line = 1;
  std::vector<Symbol> declared;
  bool has_header = false;
  {
    std::size_t pos = 0;
    int line = 1;
    while (pos < body.size()) {
      std::size_t eol = body.find('\n', pos);
      std::string ln = body.substr(pos, eol == std::string::npos
                                            ? std::string::npos
                                            : eol - pos);
      std::string trimmed = trim(ln);
      if (trimmed.empty()) {
        if (eol == std::string::npos) break;
        pos = eol + 1;
        ++line;
        continue;
      }
      if (trimmed.rfind("alphabet:", 0) == 0) {
        declared = split_ws(trimmed.substr(9));
        if (declared.empty())
          throw ParseError("empty alphabet declaration", line, 1);
        has_header = true;
        body = eol == std::string::npos ? "" : body.substr(eol + 1);
        first_line = line + 1;
      }
      break;
    }
  }
  auto toks = detail::lex_ltl(body, first_line);
  std::vector<Symbol> alphabet =
      has_header ? sorted_unique(declared) : detail::collect_atoms(toks);
  if (alphabet.empty())
    throw ParseError("formula declares no alphabet and contains no atoms", 1, 1);
  LtlBuilder b(alphabet);
  detail::LtlParser p(std::move(toks), b);
  return b.take(p.parse());
}

namespace detail {

inline int ltl_prec(LtlOp op) {
  switch (op) {
    case LtlOp::Or: return 1;
    case LtlOp::And: return 2;
    case LtlOp::Since:
    case LtlOp::Until: return 3;
    case LtlOp::Not:
    case LtlOp::Past:
    case LtlOp::Future: return 4;
    case LtlOp::Atom: return 5;
  }
  return 5;
}

inline void render_ltl(const LtlFormula& f, int id, int min_prec,
                       std::string& out) {
  const LtlFormula::Node& n = f.nodes[id];
  int p = ltl_prec(n.op);
  bool paren = p < min_prec;
  if (paren) out += '(';
  switch (n.op) {
    case LtlOp::Atom: {
      const Symbol& s = f.alphabet[n.sym];
      bool plain = s.size() == 1 && s[0] >= 'a' && s[0] <= 'z';
      if (plain)
        out += s;
      else
        out += '"' + s + '"';
      break;
    }
    case LtlOp::Not:
      out += '!';
      render_ltl(f, n.lhs, 4, out);
      break;
    case LtlOp::Past:
      out += "P ";
      render_ltl(f, n.lhs, 4, out);
      break;
    case LtlOp::Future:
      out += "F ";
      render_ltl(f, n.lhs, 4, out);
      break;
    case LtlOp::And:
      render_ltl(f, n.lhs, 2, out);
      out += " & ";
      render_ltl(f, n.rhs, 3, out);
      break;
    case LtlOp::Or:
      render_ltl(f, n.lhs, 1, out);
      out += " | ";
      render_ltl(f, n.rhs, 2, out);
      break;
    case LtlOp::Since:
      render_ltl(f, n.lhs, 4, out);
      out += " S ";
      render_ltl(f, n.rhs, 4, out);
      break;
    case LtlOp::Until:
      render_ltl(f, n.lhs, 4, out);
      out += " U ";
      render_ltl(f, n.rhs, 4, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

// Text form that parse_ltl maps back to an identical formula. The
// alphabet header is always emitted so formulas keep their alphabet even
// when not every symbol occurs in an atom.
inline std::string unparse_ltl(const LtlFormula& f) {
  std::string out = "alphabet: " + join(f.alphabet, " ") + "\n";
  detail::render_ltl(f, f.root, 0, out);
  out += '\n';
  return out;
}

// Optional cleanup pass: constant folding against the canonical true and
// false, double negation, and/or idempotence. Off by default in the
// translators so their output matches the constructions verbatim.
inline LtlFormula simplify_ltl(const LtlFormula& f) {
  LtlBuilder b(f.alphabet);
  const int bot = b.falsity();
  const int top = b.truth();
  auto mk_not = [&](int x) {
    if (x == bot) return top;
    if (x == top) return bot;
    return b.negation(x);
  };
  auto mk_and = [&](int x, int y) {
    if (x == bot || y == bot) return bot;
    if (x == top) return y;
    if (y == top) return x;
    if (x == y) return x;
    return b.conj(x, y);
  };
  auto mk_or = [&](int x, int y) {
    if (x == top || y == top) return top;
    if (x == bot) return y;
    if (y == bot) return x;
    if (x == y) return x;
    return b.disj(x, y);
  };
  std::vector<int> remap(f.nodes.size(), -1);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const LtlFormula::Node& n = f.nodes[i];
    switch (n.op) {
      case LtlOp::Atom: remap[i] = b.atom(f.alphabet[n.sym]); break;
      case LtlOp::Not: remap[i] = mk_not(remap[n.lhs]); break;
      case LtlOp::And: remap[i] = mk_and(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Or: remap[i] = mk_or(remap[n.lhs], remap[n.rhs]); break;
      case LtlOp::Past:
        remap[i] = remap[n.lhs] == bot ? bot : b.past(remap[n.lhs]);
        break;
      case LtlOp::Future:
        remap[i] = remap[n.lhs] == bot ? bot : b.future(remap[n.lhs]);
        break;
      case LtlOp::Since:
        remap[i] = remap[n.rhs] == bot ? bot : b.since(remap[n.lhs], remap[n.rhs]);
        break;
      case LtlOp::Until:
        remap[i] = remap[n.rhs] == bot ? bot : b.until(remap[n.lhs], remap[n.rhs]);
        break;
    }
  }
  return b.take(remap[f.root]);
}

}  // namespace uhax
