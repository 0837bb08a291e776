#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "uhax/util.hpp"

namespace uhax {

// Which position a vector reference reads: the attention query position t
// or the attended position t'.
enum class PosRef { Cur, Other };

// Boolean combination over earlier vectors: !, &, | plus the literals 0
// and 1 and references V(t) / V(t').
struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

struct BExpr {
  enum class Kind : std::uint8_t { Const, Ref, Not, And, Or };
  Kind kind = Kind::Const;
  bool value = false;  // Const
  int vec = -1;        // Ref: vector index
  PosRef at = PosRef::Cur;
  BExprPtr lhs, rhs;
};

inline BExprPtr bexpr_const(bool v) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Const;
  e->value = v;
  return e;
}

inline BExprPtr bexpr_ref(int vec, PosRef at) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Ref;
  e->vec = vec;
  e->at = at;
  return e;
}

inline BExprPtr bexpr_not(BExprPtr c) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Not;
  e->lhs = std::move(c);
  return e;
}

inline BExprPtr bexpr_and(BExprPtr a, BExprPtr b) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::And;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

inline BExprPtr bexpr_or(BExprPtr a, BExprPtr b) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Or;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

inline BExprPtr bexpr_or_all(const std::vector<BExprPtr>& parts) {
  if (parts.empty()) return bexpr_const(false);
  BExprPtr acc = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) acc = bexpr_or(acc, parts[i]);
  return acc;
}

// True when the expression only reads positions of the given kind (a
// constant qualifies for either).
inline bool bexpr_only_reads(const BExpr& e, PosRef at) {
  switch (e.kind) {
    case BExpr::Kind::Const: return true;
    case BExpr::Kind::Ref: return e.at == at;
    case BExpr::Kind::Not: return bexpr_only_reads(*e.lhs, at);
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      return bexpr_only_reads(*e.lhs, at) && bexpr_only_reads(*e.rhs, at);
  }
  return false;
}

inline bool bexpr_is_const(const BExpr& e) { return e.kind == BExpr::Kind::Const; }

inline int bexpr_max_ref(const BExpr& e) {
  switch (e.kind) {
    case BExpr::Kind::Const: return -1;
    case BExpr::Kind::Ref: return e.vec;
    case BExpr::Kind::Not: return bexpr_max_ref(*e.lhs);
    case BExpr::Kind::And:
    case BExpr::Kind::Or:
      return std::max(bexpr_max_ref(*e.lhs), bexpr_max_ref(*e.rhs));
  }
  return -1;
}

struct AttnOp {
  Tiebreak tiebreak = Tiebreak::Left;
  MaskDir mask = MaskDir::Future;
  BExprPtr score;   // over t and t'
  BExprPtr value;   // over t and t'
  BExprPtr deflt;   // over t only
};

struct VectorDef {
  enum class Kind { Atomic, PositionWise, Attention };
  std::string name;
  Kind kind = Kind::Atomic;
  int symbol = -1;  // Atomic: alphabet index
  BExprPtr expr;    // PositionWise
  AttnOp attn;      // Attention
};

// An ordered list of Boolean-vector definitions; the first |alphabet|
// vectors are the atomic indicator vectors Q_w, one per symbol, and every
// definition may reference only strictly earlier vectors.
struct BraspProgram {
  std::vector<Symbol> alphabet;  // sorted
  std::vector<VectorDef> vectors;
  int output = -1;

  int vector_index(const std::string& name) const {
    for (std::size_t i = 0; i < vectors.size(); ++i)
      if (vectors[i].name == name) return static_cast<int>(i);
    return -1;
  }
};

inline BraspProgram make_brasp_skeleton(std::vector<Symbol> alphabet) {
  BraspProgram p;
  p.alphabet = sorted_unique(std::move(alphabet));
  if (p.alphabet.empty())
    throw std::runtime_error("program alphabet must be non-empty");
  for (std::size_t i = 0; i < p.alphabet.size(); ++i) {
    VectorDef d;
    d.name = "Q_" + p.alphabet[i];
    d.kind = VectorDef::Kind::Atomic;
    d.symbol = static_cast<int>(i);
    p.vectors.push_back(std::move(d));
  }
  return p;
}

enum class Restriction { FL, FR, PL, PR, Any };

inline const char* restriction_name(Restriction r) {
  switch (r) {
    case Restriction::FL: return "FL";
    case Restriction::FR: return "FR";
    case Restriction::PL: return "PL";
    case Restriction::PR: return "PR";
    case Restriction::Any: return "any";
  }
  return "?";
}

inline Restriction restriction_from_name(const std::string& s) {
  if (s == "FL") return Restriction::FL;
  if (s == "FR") return Restriction::FR;
  if (s == "PL") return Restriction::PL;
  if (s == "PR") return Restriction::PR;
  if (s == "any") return Restriction::Any;
  throw std::runtime_error("unknown restriction '" + s + "'");
}

struct RestrictionViolation {
  std::string vector_name;
  Tiebreak tiebreak;
  MaskDir mask;
};

// Lists every attention op whose mask/tiebreak pair differs from the
// restriction; an empty list means the program complies.
inline std::vector<RestrictionViolation> validate_restriction(
    const BraspProgram& p, Restriction r) {
  std::vector<RestrictionViolation> out;
  if (r == Restriction::Any) return out;
  MaskDir mask = (r == Restriction::FL || r == Restriction::FR)
                     ? MaskDir::Future
                     : MaskDir::Past;
  Tiebreak tie = (r == Restriction::FL || r == Restriction::PL)
                     ? Tiebreak::Left
                     : Tiebreak::Right;
  for (const auto& v : p.vectors) {
    if (v.kind != VectorDef::Kind::Attention) continue;
    if (v.attn.mask != mask || v.attn.tiebreak != tie)
      out.push_back({v.name, v.attn.tiebreak, v.attn.mask});
  }
  return out;
}

// Boolean matrix indexed [vector][position-1], positions 1..T.
using RunTrace = std::vector<std::vector<char>>;

// Per attention cell: the attended position (1-based, -1 when the
// maximizer set was empty and the default was used).
struct AttnObservation {
  int vec;
  int pos;
  int chosen;
};

namespace detail {

inline bool eval_bexpr(const BExpr& e, const RunTrace& trace, int t, int t_other) {
  switch (e.kind) {
    case BExpr::Kind::Const: return e.value;
    case BExpr::Kind::Ref: {
      int p = e.at == PosRef::Cur ? t : t_other;
      return trace[e.vec][p - 1] != 0;
    }
    case BExpr::Kind::Not: return !eval_bexpr(*e.lhs, trace, t, t_other);
    case BExpr::Kind::And:
      return eval_bexpr(*e.lhs, trace, t, t_other) &&
             eval_bexpr(*e.rhs, trace, t, t_other);
    case BExpr::Kind::Or:
      return eval_bexpr(*e.lhs, trace, t, t_other) ||
             eval_bexpr(*e.rhs, trace, t, t_other);
  }
  return false;
}

}  // namespace detail

// Runs the program: vectors are computed in order; an attention cell takes
// the value predicate at the unique selected position (min of the
// maximizer set for Left, max for Right) and the default when no unmasked
// position scores 1.
inline RunTrace run_brasp(const BraspProgram& p, const Word& w,
                          std::vector<AttnObservation>* observations = nullptr) {
  const int len = static_cast<int>(w.size());
  std::vector<int> word_sym(w.size());
  {
    std::map<Symbol, int> index;
    for (std::size_t i = 0; i < p.alphabet.size(); ++i)
      index[p.alphabet[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto it = index.find(w[i]);
      if (it == index.end())
        throw std::runtime_error("word symbol '" + w[i] +
                                 "' outside the program alphabet");
      word_sym[i] = it->second;
    }
  }
  RunTrace trace(p.vectors.size(), std::vector<char>(len, 0));
  for (std::size_t i = 0; i < p.vectors.size(); ++i) {
    const VectorDef& v = p.vectors[i];
    switch (v.kind) {
      case VectorDef::Kind::Atomic:
        for (int t = 1; t <= len; ++t)
          trace[i][t - 1] = word_sym[t - 1] == v.symbol;
        break;
      case VectorDef::Kind::PositionWise:
        for (int t = 1; t <= len; ++t)
          trace[i][t - 1] = detail::eval_bexpr(*v.expr, trace, t, t);
        break;
      case VectorDef::Kind::Attention: {
        const AttnOp& op = v.attn;
        for (int t = 1; t <= len; ++t) {
          int chosen = -1;
          int lo = op.mask == MaskDir::Future ? 1 : t + 1;
          int hi = op.mask == MaskDir::Future ? t - 1 : len;
          if (op.tiebreak == Tiebreak::Left) {
            for (int u = lo; u <= hi; ++u)
              if (detail::eval_bexpr(*op.score, trace, t, u)) {
                chosen = u;
                break;
              }
          } else {
            for (int u = hi; u >= lo; --u)
              if (detail::eval_bexpr(*op.score, trace, t, u)) {
                chosen = u;
                break;
              }
          }
          bool cell = chosen >= 0
                          ? detail::eval_bexpr(*op.value, trace, t, chosen)
                          : detail::eval_bexpr(*op.deflt, trace, t, t);
          trace[i][t - 1] = cell;
          if (observations)
            observations->push_back({static_cast<int>(i), t, chosen});
        }
        break;
      }
    }
  }
  return trace;
}

// Acceptance reads the output vector at position T (position 1 for
// mirrored programs). The empty string is rejected by every program: with
// T = 0 there is no output position to read.
inline bool brasp_accepts(const BraspProgram& p, const Word& w,
                          AcceptAt at = AcceptAt::End) {
  if (w.empty()) return false;
  RunTrace trace = run_brasp(p, w);
  int pos = at == AcceptAt::End ? static_cast<int>(w.size()) : 1;
  return trace[p.output][pos - 1] != 0;
}

// Swaps Future<->Past masks and Left<->Right tiebreaks throughout. The
// mirrored program recognizes the reverse language when acceptance is
// read at position 1.
inline BraspProgram mirror_brasp(const BraspProgram& p) {
  BraspProgram out = p;
  for (auto& v : out.vectors) {
    if (v.kind != VectorDef::Kind::Attention) continue;
    v.attn.mask = v.attn.mask == MaskDir::Future ? MaskDir::Past : MaskDir::Future;
    v.attn.tiebreak =
        v.attn.tiebreak == Tiebreak::Left ? Tiebreak::Right : Tiebreak::Left;
  }
  return out;
}

// Replaces every leftmost attention with the two-step rightmost
// simulation: first gather, per position, whether some earlier position
// scores 1; the leftmost scorer is then the unique position that scores 1
// but has no earlier scorer, and a rightmost attention over that predicate
// finds it. Requires future masking and unary score/value on every
// leftmost op.
inline BraspProgram rewrite_leftmost_to_rightmost(const BraspProgram& p) {
  auto fresh_name = [&p](const std::string& base) {
    std::string name = base;
    int k = 1;
    while (p.vector_index(name) >= 0) name = base + std::to_string(++k);
    return name;
  };

  BraspProgram out;
  out.alphabet = p.alphabet;
  // old index -> new index
  std::vector<int> remap(p.vectors.size(), -1);
  auto remap_expr = [&remap](const BExprPtr& e) {
    // References survive structurally; only indices shift.
    struct Rec {
      const std::vector<int>& remap;
      BExprPtr operator()(const BExprPtr& x) const {
        switch (x->kind) {
          case BExpr::Kind::Const: return x;
          case BExpr::Kind::Ref: return bexpr_ref(remap[x->vec], x->at);
          case BExpr::Kind::Not: return bexpr_not((*this)(x->lhs));
          case BExpr::Kind::And: return bexpr_and((*this)(x->lhs), (*this)(x->rhs));
          case BExpr::Kind::Or: return bexpr_or((*this)(x->lhs), (*this)(x->rhs));
        }
        return x;
      }
    };
    return Rec{remap}(e);
  };

  for (std::size_t i = 0; i < p.vectors.size(); ++i) {
    const VectorDef& v = p.vectors[i];
    if (v.kind != VectorDef::Kind::Attention ||
        v.attn.tiebreak != Tiebreak::Left) {
      VectorDef copy = v;
      if (v.kind == VectorDef::Kind::PositionWise) {
        copy.expr = remap_expr(v.expr);
      } else if (v.kind == VectorDef::Kind::Attention) {
        copy.attn.score = remap_expr(v.attn.score);
        copy.attn.value = remap_expr(v.attn.value);
        copy.attn.deflt = remap_expr(v.attn.deflt);
      }
      remap[i] = static_cast<int>(out.vectors.size());
      out.vectors.push_back(std::move(copy));
      continue;
    }
    if (v.attn.mask != MaskDir::Future)
      throw std::runtime_error("leftmost op '" + v.name +
                               "' is past-masked; mirror the program first");
    if (!bexpr_only_reads(*v.attn.score, PosRef::Other) ||
        !bexpr_only_reads(*v.attn.value, PosRef::Other))
      throw std::runtime_error("leftmost op '" + v.name +
                               "' has a binary score or value; the rewrite "
                               "requires unary form");
    BExprPtr score = remap_expr(v.attn.score);

    VectorDef gather;
    gather.name = fresh_name(v.name + "_pre");
    gather.kind = VectorDef::Kind::Attention;
    gather.attn.tiebreak = Tiebreak::Right;
    gather.attn.mask = MaskDir::Future;
    gather.attn.score = score;
    gather.attn.value = score;
    gather.attn.deflt = bexpr_const(false);
    int gather_idx = static_cast<int>(out.vectors.size());
    out.vectors.push_back(std::move(gather));

    VectorDef select;
    select.name = v.name;
    select.kind = VectorDef::Kind::Attention;
    select.attn.tiebreak = Tiebreak::Right;
    select.attn.mask = MaskDir::Future;
    select.attn.score =
        bexpr_and(score, bexpr_not(bexpr_ref(gather_idx, PosRef::Other)));
    select.attn.value = remap_expr(v.attn.value);
    select.attn.deflt = remap_expr(v.attn.deflt);
    remap[i] = static_cast<int>(out.vectors.size());
    out.vectors.push_back(std::move(select));
  }
  out.output = remap[p.output];
  return out;
}

// ---------------------------------------------------------------------
// Program file format:
//   alphabet: a b
//   V2(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0
//   V3(t) = V2(t) & !Q_b(t)
//   output: V3
// Atomic vectors are implicitly named Q_<symbol>. Comments start with #.
// ---------------------------------------------------------------------

namespace detail {

struct BraspLine {
  std::string text;
  int line;
};

class BExprParser {
 public:
  BExprParser(const std::string& text, int line, const BraspProgram& prog,
              int max_vec, bool allow_other, bool allow_cur)
      : text_(text),
        line_(line),
        prog_(prog),
        max_vec_(max_vec),
        allow_other_(allow_other),
        allow_cur_(allow_cur) {}

  // Parses a full expression and requires the trailing input be empty.
  BExprPtr parse_all() {
    BExprPtr e = parse_or();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("trailing input after expression", line_, col());
    return e;
  }

  // Parses one expression, leaving the cursor after it.
  BExprPtr parse_prefix(std::size_t* end) {
    BExprPtr e = parse_or();
    *end = pos_;
    return e;
  }

  void seek(std::size_t pos) { pos_ = pos; }

 private:
  int col() const { return static_cast<int>(pos_) + 1; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  struct DepthGuard {
    int& depth;
    DepthGuard(int& d, int line, int col) : depth(d) {
      if (++depth > kMaxParseDepth)
        throw ParseError("expression nests too deeply", line, col);
    }
    ~DepthGuard() { --depth; }
  };

  BExprPtr parse_or() {
    BExprPtr e = parse_and();
    while (eat('|')) e = bexpr_or(e, parse_and());
    return e;
  }

  BExprPtr parse_and() {
    BExprPtr e = parse_not();
    while (eat('&')) e = bexpr_and(e, parse_not());
    return e;
  }

  BExprPtr parse_not() {
    DepthGuard guard(depth_, line_, col());
    if (eat('!')) return bexpr_not(parse_not());
    return parse_primary();
  }

  BExprPtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size())
      throw ParseError("expected expression", line_, col());
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BExprPtr e = parse_or();
      if (!eat(')')) throw ParseError("expected ')'", line_, col());
      return e;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return bexpr_const(c == '1');
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (!eat('('))
        throw ParseError("vector reference '" + name + "' needs (t) or (t')",
                         line_, col());
      skip_ws();
      PosRef at;
      if (pos_ + 1 < text_.size() && text_[pos_] == 't' && text_[pos_ + 1] == '\'') {
        at = PosRef::Other;
        pos_ += 2;
      } else if (pos_ < text_.size() && text_[pos_] == 't') {
        at = PosRef::Cur;
        pos_ += 1;
      } else {
        throw ParseError("expected t or t'", line_, col());
      }
      if (!eat(')')) throw ParseError("expected ')'", line_, col());
      int idx = prog_.vector_index(name);
      if (idx < 0)
        throw ParseError("unknown vector '" + name + "'", line_, col());
      if (idx >= max_vec_)
        throw ParseError("forward reference to vector '" + name + "'", line_,
                         col());
      if (at == PosRef::Other && !allow_other_)
        throw ParseError("t' is not allowed in this expression", line_, col());
      if (at == PosRef::Cur && !allow_cur_)
        throw ParseError("t is not allowed in this expression", line_, col());
      return bexpr_ref(idx, at);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_,
                     col());
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  int line_;
  const BraspProgram& prog_;
  int max_vec_;
  bool allow_other_;
  bool allow_cur_;
};

}  // namespace detail

inline BraspProgram parse_brasp(const std::string& text) {
  std::vector<detail::BraspLine> lines;
  {
    std::size_t pos = 0;
    int lineno = 1;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string ln = text.substr(
          pos, eol == std::string::npos ? std::string::npos : eol - pos);
      std::size_t hash = ln.find('#');
      if (hash != std::string::npos) ln = ln.substr(0, hash);
      ln = trim(ln);
      if (!ln.empty()) lines.push_back({ln, lineno});
      if (eol == std::string::npos) break;
      pos = eol + 1;
      ++lineno;
    }
  }
  if (lines.empty()) throw ParseError("empty program", 1, 1);
  if (lines[0].text.rfind("alphabet:", 0) != 0)
    throw ParseError("program must start with an alphabet: line",
                     lines[0].line, 1);
  BraspProgram p = make_brasp_skeleton(split_ws(lines[0].text.substr(9)));

  std::string output_name;
  int output_line = -1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& [ln, lineno] = lines[li];
    if (ln.rfind("output:", 0) == 0) {
      if (output_line >= 0)
        throw ParseError("duplicate output: line", lineno, 1);
      output_name = trim(ln.substr(7));
      output_line = lineno;
      continue;
    }
    if (output_line >= 0)
      throw ParseError("definitions after the output: line", lineno, 1);
    // NAME(t) = RHS
    std::size_t eq = ln.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected NAME(t) = ...", lineno, 1);
    std::string head = trim(ln.substr(0, eq));
    if (head.size() < 4 || head.substr(head.size() - 3) != "(t)")
      throw ParseError("definition head must be NAME(t)", lineno, 1);
    std::string name = trim(head.substr(0, head.size() - 3));
    if (name.empty() || p.vector_index(name) >= 0)
      throw ParseError("duplicate or empty vector name '" + name + "'",
                       lineno, 1);
    std::string rhs = trim(ln.substr(eq + 1));

    VectorDef def;
    def.name = name;
    int self_idx = static_cast<int>(p.vectors.size());

    bool is_left = rhs.rfind("lmost", 0) == 0;
    bool is_right = rhs.rfind("rmost", 0) == 0;
    if (is_left || is_right) {
      def.kind = VectorDef::Kind::Attention;
      def.attn.tiebreak = is_left ? Tiebreak::Left : Tiebreak::Right;
      std::string rest = trim(rhs.substr(5));
      if (rest.empty() || rest[0] != '[')
        throw ParseError("expected '[' after lmost/rmost", lineno, 1);
      // mask: t' < t  |  t' > t
      std::size_t comma = rest.find(',');
      if (comma == std::string::npos)
        throw ParseError("expected ',' after the mask", lineno, 1);
      std::string mask = trim(rest.substr(1, comma - 1));
      std::string squeezed;
      for (char c : mask)
        if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
      if (squeezed == "t'<t")
        def.attn.mask = MaskDir::Future;
      else if (squeezed == "t'>t")
        def.attn.mask = MaskDir::Past;
      else
        throw ParseError("mask must be t' < t or t' > t", lineno, 1);
      std::size_t close = rest.rfind(']');
      if (close == std::string::npos || close < comma)
        throw ParseError("expected ']' closing the attention op", lineno, 1);
      std::string score_text = trim(rest.substr(comma + 1, close - comma - 1));
      std::string tail = trim(rest.substr(close + 1));
      std::size_t colon = tail.rfind(':');
      if (colon == std::string::npos)
        throw ParseError("expected ': DEFAULT' after the value", lineno, 1);
      std::string value_text = trim(tail.substr(0, colon));
      std::string default_text = trim(tail.substr(colon + 1));
      def.attn.score = detail::BExprParser(score_text, lineno, p, self_idx,
                                           true, true)
                           .parse_all();
      def.attn.value = detail::BExprParser(value_text, lineno, p, self_idx,
                                           true, true)
                           .parse_all();
      def.attn.deflt = detail::BExprParser(default_text, lineno, p, self_idx,
                                           false, true)
                           .parse_all();
    } else {
      def.kind = VectorDef::Kind::PositionWise;
      def.expr =
          detail::BExprParser(rhs, lineno, p, self_idx, false, true).parse_all();
    }
    p.vectors.push_back(std::move(def));
  }
  if (output_line < 0) throw ParseError("missing output: line", 1, 1);
  p.output = p.vector_index(output_name);
  if (p.output < 0)
    throw ParseError("output names unknown vector '" + output_name + "'",
                     output_line, 1);
  return p;
}

namespace detail {

inline int bexpr_prec(BExpr::Kind k) {
  switch (k) {
    case BExpr::Kind::Or: return 1;
    case BExpr::Kind::And: return 2;
    case BExpr::Kind::Not: return 3;
    default: return 4;
  }
}

inline void render_bexpr(const BExpr& e, const BraspProgram& p, int min_prec,
                         std::string& out) {
  int prec = bexpr_prec(e.kind);
  bool paren = prec < min_prec;
  if (paren) out += '(';
  switch (e.kind) {
    case BExpr::Kind::Const: out += e.value ? '1' : '0'; break;
    case BExpr::Kind::Ref:
      out += p.vectors[e.vec].name;
      out += e.at == PosRef::Cur ? "(t)" : "(t')";
      break;
    case BExpr::Kind::Not:
      out += '!';
      render_bexpr(*e.lhs, p, 3, out);
      break;
    case BExpr::Kind::And:
      render_bexpr(*e.lhs, p, 2, out);
      out += " & ";
      render_bexpr(*e.rhs, p, 3, out);
      break;
    case BExpr::Kind::Or:
      render_bexpr(*e.lhs, p, 1, out);
      out += " | ";
      render_bexpr(*e.rhs, p, 2, out);
      break;
  }
  if (paren) out += ')';
}

}  // namespace detail

inline std::string unparse_brasp(const BraspProgram& p) {
  std::string out = "alphabet: " + join(p.alphabet, " ") + "\n";
  for (const auto& v : p.vectors) {
    switch (v.kind) {
      case VectorDef::Kind::Atomic: break;
      case VectorDef::Kind::PositionWise: {
        out += v.name + "(t) = ";
        detail::render_bexpr(*v.expr, p, 0, out);
        out += '\n';
        break;
      }
      case VectorDef::Kind::Attention: {
        out += v.name + "(t) = ";
        out += v.attn.tiebreak == Tiebreak::Left ? "lmost" : "rmost";
        out += v.attn.mask == MaskDir::Future ? "[t' < t, " : "[t' > t, ";
        detail::render_bexpr(*v.attn.score, p, 0, out);
        out += "] ";
        detail::render_bexpr(*v.attn.value, p, 0, out);
        out += " : ";
        detail::render_bexpr(*v.attn.deflt, p, 0, out);
        out += '\n';
        break;
      }
    }
  }
  out += "output: " + p.vectors[p.output].name + "\n";
  return out;
}

}  // namespace uhax
