#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uhax/util.hpp"

namespace uhax {

// Token of a contextual representation: an alphabet index, or Bottom for
// the attend-to-nothing placeholder.
using Token = int;
constexpr Token kBottom = -1;

// A layer-l representation is a tuple of 2^l tokens; the first half is the
// position's previous-layer representation (residual copy), the second the
// attended one.
using Rep = std::vector<Token>;

struct PatternAtom {
  bool on_key = true;  // key[i]=TOK vs query[i]=TOK
  int component = 0;
  Token token = kBottom;
};

// First matching rule wins; an empty atom list (written *) matches every
// query/key pair. Unmatched pairs score 0.
struct ScoreRule {
  std::vector<PatternAtom> atoms;
  int score = 0;
};

struct UhatLayer {
  Tiebreak tiebreak = Tiebreak::Left;
  MaskDir mask = MaskDir::Future;
  std::vector<ScoreRule> rules;
};

// Finite-precision unique-hard-attention transformer in tuple normal
// form: no positional encodings, strict masking, integer scores, residual
// concatenation. The end marker is a reserved symbol appended to every
// input (at the front for mirrored, past-masked models); acceptance tests
// the end marker's final representation against the accept set.
struct UhatModel {
  std::vector<Symbol> alphabet;  // user symbols sorted, then the end marker
  int eos = -1;                  // index of the end marker
  AcceptAt eos_at = AcceptAt::End;
  std::vector<UhatLayer> layers;
  std::vector<Rep> accept;  // level-L tuples, first component the end marker

  int num_layers() const { return static_cast<int>(layers.size()); }

  std::vector<Symbol> input_alphabet() const {
    std::vector<Symbol> out = alphabet;
    out.erase(out.begin() + eos);
    return out;
  }

  int symbol_index(const Symbol& s) const {
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == s) return static_cast<int>(i);
    return -1;
  }
};

inline UhatModel make_uhat_skeleton(std::vector<Symbol> input_alphabet,
                                    int layers) {
  UhatModel m;
  m.alphabet = sorted_unique(std::move(input_alphabet));
  for (const Symbol& s : m.alphabet)
    if (s == "EOS")
      throw std::runtime_error("EOS is reserved and may not appear in the input alphabet");
  if (m.alphabet.empty())
    throw std::runtime_error("model alphabet must be non-empty");
  if (layers < 1) throw std::runtime_error("model needs at least one layer");
  m.eos = static_cast<int>(m.alphabet.size());
  m.alphabet.push_back("EOS");
  m.layers.resize(layers);
  return m;
}

inline std::string format_rep(const UhatModel& m, const Rep& r) {
  std::vector<std::string> parts;
  for (Token t : r) parts.push_back(t == kBottom ? "_" : m.alphabet[t]);
  return "(" + join(parts, ",") + ")";
}

inline int score_pair(const UhatLayer& layer, const Rep& query, const Rep& key) {
  for (const ScoreRule& rule : layer.rules) {
    bool match = true;
    for (const PatternAtom& a : rule.atoms) {
      const Rep& side = a.on_key ? key : query;
      if (a.component >= static_cast<int>(side.size()) ||
          side[a.component] != a.token) {
        match = false;
        break;
      }
    }
    if (match) return rule.score;
  }
  return 0;
}

// Representations and attended positions for one input, per layer and
// position. Positions are 0-based over the marker-extended sequence.
struct UhatTrace {
  std::vector<std::vector<Rep>> reps;      // reps[layer][pos], layer 0..L
  std::vector<std::vector<int>> attended;  // attended[layer-1][pos], -1 none
  int eos_pos = 0;
};

inline UhatTrace run_uhat(const UhatModel& m, const Word& w) {
  std::vector<int> seq;
  for (const Symbol& s : w) {
    int x = m.symbol_index(s);
    if (x < 0)
      throw std::runtime_error("word symbol '" + s +
                               "' outside the model alphabet");
    if (x == m.eos)
      throw std::runtime_error("the end marker may not occur inside the input");
    seq.push_back(x);
  }
  UhatTrace trace;
  if (m.eos_at == AcceptAt::End) {
    seq.push_back(m.eos);
    trace.eos_pos = static_cast<int>(seq.size()) - 1;
  } else {
    seq.insert(seq.begin(), m.eos);
    trace.eos_pos = 0;
  }
  const int n = static_cast<int>(seq.size());

  trace.reps.resize(m.num_layers() + 1);
  trace.attended.resize(m.num_layers());
  trace.reps[0].resize(n);
  for (int t = 0; t < n; ++t) trace.reps[0][t] = Rep{seq[t]};

  for (int l = 1; l <= m.num_layers(); ++l) {
    const UhatLayer& layer = m.layers[l - 1];
    const auto& prev = trace.reps[l - 1];
    trace.reps[l].resize(n);
    trace.attended[l - 1].assign(n, -1);
    const std::size_t half = std::size_t{1} << (l - 1);
    for (int t = 0; t < n; ++t) {
      int lo = layer.mask == MaskDir::Future ? 0 : t + 1;
      int hi = layer.mask == MaskDir::Future ? t - 1 : n - 1;
      int best = -1;
      int best_score = 0;
      for (int u = lo; u <= hi; ++u) {
        int s = score_pair(layer, prev[t], prev[u]);
        if (best < 0 || s > best_score ||
            (s == best_score && layer.tiebreak == Tiebreak::Right)) {
          best = u;
          best_score = s;
        }
      }
      Rep next = prev[t];
      if (best >= 0) {
        next.insert(next.end(), prev[best].begin(), prev[best].end());
        trace.attended[l - 1][t] = best;
      } else {
        next.insert(next.end(), half, kBottom);
      }
      trace.reps[l][t] = std::move(next);
    }
  }
  return trace;
}

inline bool uhat_accepts(const UhatModel& m, const Word& w) {
  UhatTrace trace = run_uhat(m, w);
  const Rep& final_rep = trace.reps[m.num_layers()][trace.eos_pos];
  return std::find(m.accept.begin(), m.accept.end(), final_rep) !=
         m.accept.end();
}

// Swaps masks, tiebreaks and the side the end marker is appended to; the
// mirrored model recognizes the reverse language.
inline UhatModel mirror_uhat(const UhatModel& m) {
  UhatModel out = m;
  for (auto& layer : out.layers) {
    layer.mask = layer.mask == MaskDir::Future ? MaskDir::Past : MaskDir::Future;
    layer.tiebreak =
        layer.tiebreak == Tiebreak::Left ? Tiebreak::Right : Tiebreak::Left;
  }
  out.eos_at = m.eos_at == AcceptAt::End ? AcceptAt::Start : AcceptAt::End;
  return out;
}

inline bool is_future_leftmost(const UhatModel& m) {
  if (m.eos_at != AcceptAt::End) return false;
  for (const auto& layer : m.layers)
    if (layer.mask != MaskDir::Future || layer.tiebreak != Tiebreak::Left)
      return false;
  return true;
}

// ---------------------------------------------------------------------
// Reachable-state exploration for future-masked leftmost models.
//
// A state is, per layer, the ordered subset of representations seen so
// far (each kept at its first occurrence). Under leftmost tiebreaking and
// strict future masking this determines the attended representation at
// the next position, so the state space is a deterministic automaton over
// the input alphabet; it is finite because representation counts are
// bounded per layer.
// ---------------------------------------------------------------------

struct UhatStateSpace {
  // Interned representations per layer 0..L; ids are BFS-discovery order.
  std::vector<std::vector<Rep>> rep_pool;
  // Per state and layer, the ordered subset of rep ids.
  struct State {
    std::vector<std::vector<int>> subsets;
    bool operator<(const State& o) const { return subsets < o.subsets; }
  };
  std::vector<State> states;  // states[0] = all-empty initial state
  std::vector<std::vector<int>> delta;  // [state][input symbol]
  std::vector<Rep> eos_final;  // end-marker representation at the last layer
  // End-marker representations per layer, collected over all states.
  std::vector<std::set<Rep>> eos_reps;
  std::vector<Symbol> input_alphabet;
};

namespace detail {

// Leftmost hard attention over an ordered subset: the first maximizer in
// first-occurrence order is the representation at the leftmost maximizing
// position.
inline int attend_leftmost(const UhatLayer& layer, const Rep& query,
                           const std::vector<Rep>& pool,
                           const std::vector<int>& subset) {
  int best = -1, best_score = 0;
  for (int id : subset) {
    int s = score_pair(layer, query, pool[id]);
    if (best < 0 || s > best_score) {
      best = id;
      best_score = s;
    }
  }
  return best;
}

}  // namespace detail

inline UhatStateSpace explore_uhat(const UhatModel& m, std::size_t state_cap) {
  if (!is_future_leftmost(m))
    throw std::runtime_error(
        "state exploration requires future masking and leftmost tiebreaking "
        "on every layer");
  const int L = m.num_layers();
  UhatStateSpace space;
  space.input_alphabet = m.input_alphabet();
  space.rep_pool.resize(L + 1);
  space.eos_reps.resize(L + 1);
  std::vector<std::map<Rep, int>> rep_id(L + 1);
  auto intern = [&](int layer, const Rep& r) {
    auto [it, fresh] =
        rep_id[layer].emplace(r, static_cast<int>(space.rep_pool[layer].size()));
    if (fresh) space.rep_pool[layer].push_back(r);
    return it->second;
  };

  std::map<UhatStateSpace::State, int> state_id;
  UhatStateSpace::State init;
  init.subsets.assign(L + 1, {});
  space.states.push_back(init);
  state_id[init] = 0;

  auto eos_walk = [&](const UhatStateSpace::State& st) {
    // The end marker's representation per layer, attending over the sets
    // of real-position representations.
    std::vector<Rep> out(L + 1);
    out[0] = Rep{m.eos};
    for (int l = 1; l <= L; ++l) {
      const UhatLayer& layer = m.layers[l - 1];
      int att = detail::attend_leftmost(layer, out[l - 1], space.rep_pool[l - 1],
                                        st.subsets[l - 1]);
      Rep next = out[l - 1];
      if (att >= 0) {
        const Rep& a = space.rep_pool[l - 1][att];
        next.insert(next.end(), a.begin(), a.end());
      } else {
        next.insert(next.end(), std::size_t{1} << (l - 1), kBottom);
      }
      out[l] = std::move(next);
    }
    return out;
  };

  const int k = static_cast<int>(space.input_alphabet.size());
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    {
      std::vector<Rep> eos_line = eos_walk(space.states[i]);
      for (int l = 0; l <= L; ++l) space.eos_reps[l].insert(eos_line[l]);
      space.eos_final.push_back(eos_line[L]);
    }
    space.delta.emplace_back(k, -1);
    for (int s = 0; s < k; ++s) {
      UhatStateSpace::State cur = space.states[i];
      // New position reading symbol s: representation per layer, then the
      // per-layer subsets absorb it.
      int sym = m.symbol_index(space.input_alphabet[s]);
      Rep x{sym};
      std::vector<int> new_ids(L + 1);
      new_ids[0] = intern(0, x);
      for (int l = 1; l <= L; ++l) {
        const UhatLayer& layer = m.layers[l - 1];
        int att = detail::attend_leftmost(layer, x, space.rep_pool[l - 1],
                                          cur.subsets[l - 1]);
        if (att >= 0) {
          const Rep& a = space.rep_pool[l - 1][att];
          x.insert(x.end(), a.begin(), a.end());
        } else {
          x.insert(x.end(), std::size_t{1} << (l - 1), kBottom);
        }
        new_ids[l] = intern(l, x);
      }
      UhatStateSpace::State next = cur;
      for (int l = 0; l <= L; ++l) {
        auto& sub = next.subsets[l];
        if (std::find(sub.begin(), sub.end(), new_ids[l]) == sub.end())
          sub.push_back(new_ids[l]);
      }
      auto [it, fresh] =
          state_id.emplace(next, static_cast<int>(space.states.size()));
      if (fresh) {
        if (space.states.size() >= state_cap)
          throw CapExceeded("reachable state count exceeds cap of " +
                            std::to_string(state_cap));
        space.states.push_back(next);
      }
      space.delta[i][s] = it->second;
    }
  }
  return space;
}

// Per-layer sets of representations reachable on any input, end-marker
// representations included. Layer l never holds more than
// (|alphabet|+1)^(2^l) distinct tuples.
inline std::vector<std::set<Rep>> reachable_representations(
    const UhatModel& m, int max_layer, std::size_t state_cap = 50000) {
  if (max_layer < 0 || max_layer > m.num_layers())
    throw std::runtime_error("layer index out of range");
  UhatStateSpace space = explore_uhat(m, state_cap);
  std::vector<std::set<Rep>> out(max_layer + 1);
  for (int l = 0; l <= max_layer; ++l) {
    for (const Rep& r : space.rep_pool[l]) out[l].insert(r);
    for (const Rep& r : space.eos_reps[l]) out[l].insert(r);
  }
  return out;
}

// ---------------------------------------------------------------------
// Model file format:
//   alphabet: a b
//   layers: 1
//   layer 1: tiebreak=left mask=future
//   score: key[0]=a => 1
//   accept: (EOS,a)
// Optional: eos: end|start (default end). Tokens in patterns and accept
// tuples are symbols, EOS, or _ for the bottom placeholder.
// ---------------------------------------------------------------------

namespace detail {

inline Token parse_token(const UhatModel& m, const std::string& tok, int lineno) {
  if (tok == "_") return kBottom;
  int x = m.symbol_index(tok);
  if (x < 0) throw ParseError("unknown token '" + tok + "'", lineno, 1);
  return x;
}

}  // namespace detail

inline UhatModel parse_uhat(const std::string& text) {
  std::vector<std::pair<std::string, int>> lines;
  {
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string ln = text.substr(
          pos, eol == std::string::npos ? std::string::npos : eol - pos);
      ++lineno;
      if (eol == std::string::npos) pos = text.size() + 1;
      else pos = eol + 1;
      std::size_t hash = ln.find('#');
      if (hash != std::string::npos) ln = ln.substr(0, hash);
      ln = trim(ln);
      if (!ln.empty()) lines.emplace_back(ln, lineno);
    }
  }
  if (lines.empty() || lines[0].first.rfind("alphabet:", 0) != 0)
    throw ParseError("model must start with an alphabet: line", 1, 1);
  std::vector<Symbol> input_alphabet = split_ws(lines[0].first.substr(9));

  int layer_count = -1;
  std::size_t li = 1;
  AcceptAt eos_at = AcceptAt::End;
  if (li < lines.size() && lines[li].first.rfind("eos:", 0) == 0) {
    std::string v = trim(lines[li].first.substr(4));
    if (v == "end") eos_at = AcceptAt::End;
    else if (v == "start") eos_at = AcceptAt::Start;
    else throw ParseError("eos: must be end or start", lines[li].second, 1);
    ++li;
  }
  if (li >= lines.size() || lines[li].first.rfind("layers:", 0) != 0)
    throw ParseError("expected layers: line", li < lines.size() ? lines[li].second : 1, 1);
  layer_count = parse_int(lines[li].first.substr(7), lines[li].second);
  ++li;

  UhatModel m = make_uhat_skeleton(input_alphabet, layer_count);
  m.eos_at = eos_at;

  int current_layer = -1;
  for (; li < lines.size(); ++li) {
    const auto& [ln, lineno] = lines[li];
    if (ln.rfind("layer ", 0) == 0) {
      std::size_t colon = ln.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected layer K: tiebreak=... mask=...", lineno, 1);
      int k = parse_int(ln.substr(6, colon - 6), lineno);
      if (k < 1 || k > layer_count)
        throw ParseError("layer index out of range", lineno, 1);
      current_layer = k - 1;
      for (const std::string& item : split_ws(ln.substr(colon + 1))) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
          throw ParseError("expected key=value in layer line", lineno, 1);
        std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "tiebreak") {
          if (value == "left") m.layers[current_layer].tiebreak = Tiebreak::Left;
          else if (value == "right") m.layers[current_layer].tiebreak = Tiebreak::Right;
          else throw ParseError("tiebreak must be left or right", lineno, 1);
        } else if (key == "mask") {
          if (value == "future") m.layers[current_layer].mask = MaskDir::Future;
          else if (value == "past") m.layers[current_layer].mask = MaskDir::Past;
          else throw ParseError("mask must be future or past", lineno, 1);
        } else {
          throw ParseError("unknown layer attribute '" + key + "'", lineno, 1);
        }
      }
    } else if (ln.rfind("score:", 0) == 0) {
      if (current_layer < 0)
        throw ParseError("score: before any layer line", lineno, 1);
      std::string rest = trim(ln.substr(6));
      std::size_t arrow = rest.find("=>");
      if (arrow == std::string::npos)
        throw ParseError("expected score: PATTERNS => INT", lineno, 1);
      ScoreRule rule;
      rule.score = parse_int(rest.substr(arrow + 2), lineno);
      std::string pats = trim(rest.substr(0, arrow));
      for (const std::string& pat : split_ws(pats)) {
        if (pat == "*") continue;
        PatternAtom atom;
        std::string body;
        if (pat.rfind("key[", 0) == 0) {
          atom.on_key = true;
          body = pat.substr(4);
        } else if (pat.rfind("query[", 0) == 0) {
          atom.on_key = false;
          body = pat.substr(6);
        } else {
          throw ParseError("pattern must be key[i]=TOK, query[i]=TOK or *",
                           lineno, 1);
        }
        std::size_t close = body.find(']');
        if (close == std::string::npos || close + 1 >= body.size() ||
            body[close + 1] != '=')
          throw ParseError("pattern must be key[i]=TOK or query[i]=TOK",
                           lineno, 1);
        atom.component = parse_int(body.substr(0, close), lineno);
        std::size_t width = std::size_t{1} << current_layer;
        if (atom.component < 0 || atom.component >= static_cast<int>(width))
          throw ParseError("pattern component out of range for this layer",
                           lineno, 1);
        atom.token = detail::parse_token(m, body.substr(close + 2), lineno);
        rule.atoms.push_back(atom);
      }
      m.layers[current_layer].rules.push_back(std::move(rule));
    } else if (ln.rfind("accept:", 0) == 0) {
      const std::size_t width = std::size_t{1} << layer_count;
      for (const std::string& tok : split_ws(ln.substr(7))) {
        std::vector<std::string> parts = split_tuple(tok);
        if (parts.size() != width)
          throw ParseError("accept tuple must have " + std::to_string(width) +
                               " components",
                           lineno, 1);
        Rep r;
        for (const auto& p : parts) r.push_back(detail::parse_token(m, p, lineno));
        if (r[0] != m.eos)
          throw ParseError("accept tuples must start with EOS", lineno, 1);
        m.accept.push_back(std::move(r));
      }
    } else {
      throw ParseError("unrecognized line '" + ln + "'", lineno, 1);
    }
  }
  std::sort(m.accept.begin(), m.accept.end());
  m.accept.erase(std::unique(m.accept.begin(), m.accept.end()), m.accept.end());
  return m;
}

inline std::string unparse_uhat(const UhatModel& m) {
  std::string out = "alphabet: " + join(m.input_alphabet(), " ") + "\n";
  if (m.eos_at == AcceptAt::Start) out += "eos: start\n";
  out += "layers: " + std::to_string(m.num_layers()) + "\n";
  for (int l = 0; l < m.num_layers(); ++l) {
    const UhatLayer& layer = m.layers[l];
    out += "layer " + std::to_string(l + 1) + ": tiebreak=";
    out += layer.tiebreak == Tiebreak::Left ? "left" : "right";
    out += " mask=";
    out += layer.mask == MaskDir::Future ? "future" : "past";
    out += "\n";
    for (const ScoreRule& rule : layer.rules) {
      out += "score:";
      if (rule.atoms.empty()) {
        out += " *";
      } else {
        for (const PatternAtom& a : rule.atoms) {
          out += a.on_key ? " key[" : " query[";
          out += std::to_string(a.component) + "]=";
          out += a.token == kBottom ? "_" : m.alphabet[a.token];
        }
      }
      out += " => " + std::to_string(rule.score) + "\n";
    }
  }
  out += "accept:";
  for (const Rep& r : m.accept) out += " " + format_rep(m, r);
  out += "\n";
  return out;
}

}  // namespace uhax
