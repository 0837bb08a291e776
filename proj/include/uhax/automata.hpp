#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uhax/util.hpp"

namespace uhax {

// Total (or, inside cascade constructions, partial) transition system
// without acceptance; delta[state][symbol] is a state index or -1.
struct Semiautomaton {
  std::vector<Symbol> alphabet;  // sorted
  std::vector<std::string> states;
  std::vector<std::vector<int>> delta;
  int initial = -1;

  int symbol_index(const Symbol& s) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end() || *it != s) return -1;
    return static_cast<int>(it - alphabet.begin());
  }

  int state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<int>(i);
    return -1;
  }

  bool total() const {
    for (const auto& row : delta)
      for (int x : row)
        if (x < 0) return false;
    return true;
  }
};

struct Dfa {
  std::vector<Symbol> alphabet;  // sorted
  std::vector<std::string> states;
  std::vector<std::vector<int>> delta;  // total
  int initial = 0;
  std::vector<char> finals;  // indexed by state

  int symbol_index(const Symbol& s) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end() || *it != s) return -1;
    return static_cast<int>(it - alphabet.begin());
  }

  int state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == name) return static_cast<int>(i);
    return -1;
  }
};

inline Semiautomaton dfa_semiautomaton(const Dfa& d) {
  return Semiautomaton{d.alphabet, d.states, d.delta, d.initial};
}

inline bool dfa_accepts(const Dfa& d, const Word& w) {
  int q = d.initial;
  for (const Symbol& s : w) {
    int x = d.symbol_index(s);
    if (x < 0)
      throw std::runtime_error("word symbol '" + s +
                               "' outside the automaton alphabet");
    q = d.delta[q][x];
  }
  return d.finals[q] != 0;
}

// Language-equivalent DFA with the minimum number of states: unreachable
// states dropped, Moore partition refinement, then canonical renaming
// q0,q1,... in BFS order over the sorted alphabet so equal languages give
// byte-identical automata.
inline Dfa minimize_dfa(const Dfa& d) {
  const int n = static_cast<int>(d.states.size());
  const int k = static_cast<int>(d.alphabet.size());

  std::vector<int> reach;
  std::vector<int> reach_id(n, -1);
  reach.push_back(d.initial);
  reach_id[d.initial] = 0;
  for (std::size_t i = 0; i < reach.size(); ++i)
    for (int s = 0; s < k; ++s) {
      int t = d.delta[reach[i]][s];
      if (reach_id[t] < 0) {
        reach_id[t] = static_cast<int>(reach.size());
        reach.push_back(t);
      }
    }
  const int m = static_cast<int>(reach.size());

  std::vector<int> part(m);
  for (int i = 0; i < m; ++i) part[i] = d.finals[reach[i]] ? 1 : 0;
  int classes = 2;
  while (true) {
    std::map<std::vector<int>, int> sig_class;
    std::vector<int> next(m);
    for (int i = 0; i < m; ++i) {
      std::vector<int> sig(k + 1);
      sig[0] = part[i];
      for (int s = 0; s < k; ++s) sig[s + 1] = part[reach_id[d.delta[reach[i]][s]]];
      auto [it, fresh] = sig_class.emplace(sig, static_cast<int>(sig_class.size()));
      (void)fresh;
      next[i] = it->second;
    }
    int next_classes = static_cast<int>(sig_class.size());
    part = next;
    if (next_classes == classes) break;
    classes = next_classes;
  }

  // Representative per class and BFS order from the initial class.
  std::vector<int> class_rep(classes, -1);
  for (int i = 0; i < m; ++i)
    if (class_rep[part[i]] < 0) class_rep[part[i]] = i;
  std::vector<int> order_id(classes, -1);
  std::vector<int> order;
  int c0 = part[reach_id[d.initial]];
  order_id[c0] = 0;
  order.push_back(c0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    int rep = class_rep[order[i]];
    for (int s = 0; s < k; ++s) {
      int c = part[reach_id[d.delta[reach[rep]][s]]];
      if (order_id[c] < 0) {
        order_id[c] = static_cast<int>(order.size());
        order.push_back(c);
      }
    }
  }

  Dfa out;
  out.alphabet = d.alphabet;
  const int mm = static_cast<int>(order.size());
  out.states.resize(mm);
  out.delta.assign(mm, std::vector<int>(k, 0));
  out.finals.assign(mm, 0);
  out.initial = 0;
  for (int i = 0; i < mm; ++i) {
    out.states[i] = "q" + std::to_string(i);
    int rep = class_rep[order[i]];
    out.finals[i] = d.finals[reach[rep]];
    for (int s = 0; s < k; ++s)
      out.delta[i][s] = order_id[part[reach_id[d.delta[reach[rep]][s]]]];
  }
  return out;
}

struct PofaResult {
  bool ok = true;
  std::string witness_a, witness_b;  // two distinct mutually reachable states
};

// The reachability preorder on states is a partial order exactly when
// every strongly connected component of the transition graph is a
// singleton (self-loops allowed). Iterative Tarjan; the witness is the
// lexicographically first offending pair by state index.
inline PofaResult is_pofa(const Dfa& d) {
  const int n = static_cast<int>(d.states.size());
  std::vector<std::vector<int>> adj(n);
  for (int q = 0; q < n; ++q) {
    std::set<int> targets;
    for (int t : d.delta[q])
      if (t != q) targets.insert(t);
    adj[q].assign(targets.begin(), targets.end());
  }

  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  int best_a = -1, best_b = -1;

  struct Frame {
    int v;
    std::size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.child < adj[f.v].size()) {
        int w = adj[f.v][f.child++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> comp;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp.push_back(w);
            if (w == v) break;
          }
          if (comp.size() > 1) {
            std::sort(comp.begin(), comp.end());
            if (best_a < 0 || comp[0] < best_a) {
              best_a = comp[0];
              best_b = comp[1];
            }
          }
        }
      }
    }
  }
  if (best_a >= 0)
    return {false, d.states[best_a], d.states[best_b]};
  return {};
}

// Minimal DFA of the reverse language: reverse the transitions, run the
// subset construction from the old final set, accept subsets containing
// the old initial state, minimize.
inline Dfa reverse_dfa(const Dfa& d) {
  Dfa m = minimize_dfa(d);
  const int n = static_cast<int>(m.states.size());
  const int k = static_cast<int>(m.alphabet.size());

  std::vector<char> start(n, 0);
  for (int q = 0; q < n; ++q) start[q] = m.finals[q];

  std::map<std::vector<char>, int> subset_id;
  std::vector<std::vector<char>> subsets{start};
  subset_id[start] = 0;
  std::vector<std::vector<int>> delta;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    std::vector<char> cur = subsets[i];
    delta.emplace_back(k, -1);
    for (int s = 0; s < k; ++s) {
      std::vector<char> next(n, 0);
      for (int q = 0; q < n; ++q)
        if (cur[m.delta[q][s]]) next[q] = 1;
      auto [it, fresh] = subset_id.emplace(next, static_cast<int>(subsets.size()));
      if (fresh) subsets.push_back(next);
      delta[i][s] = it->second;
    }
  }

  Dfa rev;
  rev.alphabet = m.alphabet;
  rev.initial = 0;
  rev.delta = delta;
  rev.states.resize(subsets.size());
  rev.finals.resize(subsets.size());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    rev.states[i] = "r" + std::to_string(i);
    rev.finals[i] = subsets[i][m.initial];
  }
  return minimize_dfa(rev);
}

inline bool is_rpofa(const Dfa& d) { return is_pofa(reverse_dfa(d)).ok; }

// Transformation monoid: all maps Q -> Q realized by words, as a
// composition table. table[i][j] is the element realized by any word of i
// followed by any word of j. Element 0 is the identity. The caller should
// pass a minimal DFA when the syntactic monoid is intended.
struct Monoid {
  std::vector<std::vector<int>> elements;  // state images
  std::vector<std::vector<int>> table;
  int identity = 0;

  std::size_t size() const { return elements.size(); }
};

inline Monoid transition_monoid(const Dfa& d, std::size_t cap = 10000) {
  const int n = static_cast<int>(d.states.size());
  const int k = static_cast<int>(d.alphabet.size());
  std::vector<std::vector<int>> gens(k, std::vector<int>(n));
  for (int s = 0; s < k; ++s)
    for (int q = 0; q < n; ++q) gens[s][q] = d.delta[q][s];

  Monoid mon;
  std::map<std::vector<int>, int> index;
  std::vector<int> id(n);
  for (int q = 0; q < n; ++q) id[q] = q;
  mon.elements.push_back(id);
  index[id] = 0;
  for (std::size_t i = 0; i < mon.elements.size(); ++i) {
    std::vector<int> base = mon.elements[i];
    for (int s = 0; s < k; ++s) {
      std::vector<int> img(n);
      for (int q = 0; q < n; ++q) img[q] = gens[s][base[q]];
      auto [it, fresh] =
          index.emplace(img, static_cast<int>(mon.elements.size()));
      (void)it;
      if (fresh) {
        if (mon.elements.size() >= cap)
          throw CapExceeded("transition monoid exceeds cap of " +
                            std::to_string(cap) + " elements");
        mon.elements.push_back(std::move(img));
      }
    }
  }

  const int sz = static_cast<int>(mon.elements.size());
  mon.table.assign(sz, std::vector<int>(sz, -1));
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) {
      std::vector<int> img(n);
      for (int q = 0; q < n; ++q) img[q] = mon.elements[j][mon.elements[i][q]];
      mon.table[i][j] = index.at(img);
    }
  return mon;
}

// m1 m2 m3 = m1 implies m1 m2 = m1, exhaustively. The inner existential
// is precomputed as right-ideal membership.
inline bool is_r_trivial(const Monoid& m) {
  const int sz = static_cast<int>(m.size());
  std::vector<std::vector<char>> right_ideal(sz, std::vector<char>(sz, 0));
  for (int x = 0; x < sz; ++x)
    for (int kk = 0; kk < sz; ++kk) right_ideal[x][m.table[x][kk]] = 1;
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) {
      int ij = m.table[i][j];
      if (ij != i && right_ideal[ij][i]) return false;
    }
  return true;
}

inline Monoid opposite_monoid(const Monoid& m) {
  Monoid out = m;
  const int sz = static_cast<int>(m.size());
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j) out.table[i][j] = m.table[j][i];
  return out;
}

// m3 m2 m1 = m1 implies m2 m1 = m1; equivalently, the opposite monoid is
// R-trivial.
inline bool is_l_trivial(const Monoid& m) {
  return is_r_trivial(opposite_monoid(m));
}

// Every element reaches a power with m^k = m^{k+1}.
inline bool is_aperiodic(const Monoid& m) {
  const int sz = static_cast<int>(m.size());
  for (int i = 0; i < sz; ++i) {
    int p = i;
    bool settled = false;
    for (int step = 0; step <= sz; ++step) {
      int np = m.table[p][i];
      if (np == p) {
        settled = true;
        break;
      }
      p = np;
    }
    if (!settled) return false;
  }
  return true;
}

// ---------------------------------------------------------------------
// Cascade products of half-resets and automaton homomorphisms.
// ---------------------------------------------------------------------

// Alphabet partition Sigma0 | Sigma1 of a two-state forward fork: symbols
// in Sigma1 move q0 to q1 irrevocably, everything fixes q1.
struct HalfReset {
  std::vector<Symbol> alphabet;  // sorted
  std::vector<Symbol> sigma1;    // sorted, non-empty, proper subset
};

inline HalfReset make_half_reset(std::vector<Symbol> alphabet,
                                 std::vector<Symbol> sigma1) {
  HalfReset h{sorted_unique(std::move(alphabet)), sorted_unique(std::move(sigma1))};
  if (h.sigma1.empty())
    throw std::runtime_error("half-reset needs a non-empty sigma1");
  for (const Symbol& s : h.sigma1)
    if (std::find(h.alphabet.begin(), h.alphabet.end(), s) == h.alphabet.end())
      throw std::runtime_error("half-reset sigma1 symbol '" + s +
                               "' outside its alphabet");
  if (h.sigma1.size() == h.alphabet.size())
    throw std::runtime_error("half-reset needs a non-empty sigma0");
  return h;
}

inline Semiautomaton half_reset_automaton(const HalfReset& h) {
  Semiautomaton a;
  a.alphabet = h.alphabet;
  a.states = {"q0", "q1"};
  a.delta.assign(2, std::vector<int>(h.alphabet.size(), 1));
  for (std::size_t s = 0; s < h.alphabet.size(); ++s)
    if (!std::binary_search(h.sigma1.begin(), h.sigma1.end(), h.alphabet[s]))
      a.delta[0][s] = 0;
  a.initial = 0;
  return a;
}

// Pair alphabet of a cascade: states of the first factor crossed with its
// input alphabet, rendered as flattened tuples like (q0,q1,a).
inline std::vector<Symbol> cascade_pair_alphabet(const Semiautomaton& b1) {
  std::vector<Symbol> out;
  for (const auto& q : b1.states)
    for (const auto& w : b1.alphabet) {
      std::vector<std::string> parts = split_tuple(q);
      parts.push_back(w);
      out.push_back(tuple_token(parts));
    }
  return sorted_unique(out);
}

// Cascade product: the second factor reads pairs (state of the first,
// input symbol). The second factor may be partial, but its definedness
// must be uniform in the input symbol for every state pair.
inline Semiautomaton cascade(const Semiautomaton& b1, const Semiautomaton& b2) {
  if (!b1.total())
    throw std::runtime_error("cascade: the first factor must be total");
  std::vector<Symbol> expected = cascade_pair_alphabet(b1);
  if (b2.alphabet != expected)
    throw std::runtime_error(
        "cascade: the second factor's alphabet must be the pair alphabet of "
        "the first");

  const int n1 = static_cast<int>(b1.states.size());
  const int n2 = static_cast<int>(b2.states.size());
  const int k = static_cast<int>(b1.alphabet.size());

  // pair_sym[i1][s] = symbol index of (state i1, symbol s) in b2.
  std::vector<std::vector<int>> pair_sym(n1, std::vector<int>(k));
  for (int i1 = 0; i1 < n1; ++i1)
    for (int s = 0; s < k; ++s) {
      std::vector<std::string> parts = split_tuple(b1.states[i1]);
      parts.push_back(b1.alphabet[s]);
      pair_sym[i1][s] = b2.symbol_index(tuple_token(parts));
    }

  std::vector<std::vector<char>> defined(n2, std::vector<char>(n1, 0));
  for (int i2 = 0; i2 < n2; ++i2)
    for (int i1 = 0; i1 < n1; ++i1) {
      bool any = false, all = true;
      for (int s = 0; s < k; ++s) {
        bool def = b2.delta[i2][pair_sym[i1][s]] >= 0;
        any = any || def;
        all = all && def;
      }
      if (any != all)
        throw std::runtime_error(
            "cascade: non-uniform partiality at state pair (" +
            b1.states[i1] + "," + b2.states[i2] + ")");
      defined[i2][i1] = all;
    }

  Semiautomaton c;
  c.alphabet = b1.alphabet;
  std::vector<std::vector<int>> pair_id(n1, std::vector<int>(n2, -1));
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) {
      if (!defined[i2][i1]) continue;
      std::vector<std::string> parts = split_tuple(b1.states[i1]);
      parts.push_back(b2.states[i2]);
      pair_id[i1][i2] = static_cast<int>(c.states.size());
      c.states.push_back(tuple_token(parts));
    }
  c.delta.assign(c.states.size(), std::vector<int>(k, -1));
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) {
      int id = pair_id[i1][i2];
      if (id < 0) continue;
      for (int s = 0; s < k; ++s) {
        int j1 = b1.delta[i1][s];
        int j2 = b2.delta[i2][pair_sym[i1][s]];
        c.delta[id][s] = pair_id[j1][j2];
      }
    }
  if (b1.initial >= 0 && b2.initial >= 0)
    c.initial = pair_id[b1.initial][b2.initial];
  return c;
}

struct HomCheck {
  bool ok = true;
  std::string detail;  // violating (state, symbol) pair or surjectivity note
};

// phi(delta(q, w)) = delta'(phi(q), w) for every state and symbol; phi
// must be total and surjective.
inline HomCheck check_homomorphism(const Semiautomaton& src,
                                   const Semiautomaton& dst,
                                   const std::map<std::string, std::string>& phi) {
  if (src.alphabet != dst.alphabet)
    return {false, "alphabets differ"};
  std::vector<int> image(src.states.size(), -1);
  for (std::size_t q = 0; q < src.states.size(); ++q) {
    auto it = phi.find(src.states[q]);
    if (it == phi.end())
      return {false, "phi is undefined on state " + src.states[q]};
    image[q] = dst.state_index(it->second);
    if (image[q] < 0)
      return {false, "phi maps " + src.states[q] + " to unknown state " +
                         it->second};
  }
  std::vector<char> hit(dst.states.size(), 0);
  for (int x : image) hit[x] = 1;
  for (std::size_t q = 0; q < dst.states.size(); ++q)
    if (!hit[q])
      return {false, "phi is not surjective: " + dst.states[q] + " has no preimage"};
  for (std::size_t q = 0; q < src.states.size(); ++q)
    for (std::size_t s = 0; s < src.alphabet.size(); ++s) {
      int t = src.delta[q][s];
      if (t < 0) continue;
      if (image[t] != dst.delta[image[q]][s])
        return {false, "phi(delta(" + src.states[q] + "," + src.alphabet[s] +
                           ")) != delta'(phi(" + src.states[q] + ")," +
                           src.alphabet[s] + ")"};
    }
  return {};
}

// A stack of half-resets: level k reads pairs of (product state of levels
// < k, input symbol), flattened into tuple tokens. The homomorphism maps
// cascade states onto the target automaton whose finals are given.
struct CascadeSpec {
  std::vector<Symbol> alphabet;
  std::vector<std::vector<Symbol>> level_sigma1;
  std::map<std::string, std::string> hom;
  std::vector<std::string> finals;
};

struct CascadeBuild {
  Semiautomaton product;        // initialized at the all-q0 state
  std::vector<HalfReset> levels;
  Dfa target;                   // homomorphic image with the given finals
};

inline CascadeBuild build_cascade(const CascadeSpec& spec) {
  if (spec.level_sigma1.empty())
    throw std::runtime_error("cascade needs at least one level");
  CascadeBuild out;
  HalfReset h0 = make_half_reset(spec.alphabet, spec.level_sigma1[0]);
  out.levels.push_back(h0);
  Semiautomaton c = half_reset_automaton(h0);
  for (std::size_t level = 1; level < spec.level_sigma1.size(); ++level) {
    HalfReset h = make_half_reset(cascade_pair_alphabet(c),
                                  spec.level_sigma1[level]);
    out.levels.push_back(h);
    c = cascade(c, half_reset_automaton(h));
  }
  out.product = c;

  // Derive the target by collapsing along phi, then verify the collapse is
  // consistent on every preimage.
  std::vector<std::string> target_states;
  for (const auto& q : c.states) {
    auto it = spec.hom.find(q);
    if (it == spec.hom.end())
      throw std::runtime_error("hom is undefined on cascade state " + q);
    target_states.push_back(it->second);
  }
  target_states = sorted_unique(target_states);

  Dfa target;
  target.alphabet = c.alphabet;
  target.states = target_states;
  target.delta.assign(target_states.size(),
                      std::vector<int>(c.alphabet.size(), -1));
  auto target_index = [&target](const std::string& name) {
    int i = target.state_index(name);
    if (i < 0) throw std::runtime_error("unknown target state " + name);
    return i;
  };
  for (std::size_t q = 0; q < c.states.size(); ++q) {
    int tq = target_index(spec.hom.at(c.states[q]));
    for (std::size_t s = 0; s < c.alphabet.size(); ++s) {
      int img = target_index(spec.hom.at(c.states[c.delta[q][s]]));
      if (target.delta[tq][s] < 0) target.delta[tq][s] = img;
    }
  }
  target.initial = target_index(spec.hom.at(c.states[c.initial]));
  target.finals.assign(target.states.size(), 0);
  for (const auto& f : spec.finals) target.finals[target_index(f)] = 1;

  HomCheck hc = check_homomorphism(c, dfa_semiautomaton(target), spec.hom);
  if (!hc.ok)
    throw std::runtime_error("homomorphism check failed: " + hc.detail);
  out.target = std::move(target);
  return out;
}

// Cascade file format:
//   alphabet: a b
//   levels: 2
//   halfreset 0: sigma1 = a
//   halfreset 1: sigma1 = (q1,b)
//   hom: (q0,q0) -> s0
//   finals: s1
inline CascadeSpec parse_cascade(const std::string& text) {
  CascadeSpec spec;
  int levels = -1;
  std::vector<char> seen_level;
  std::size_t pos = 0;
  int lineno = 0;
  bool have_alphabet = false, have_finals = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string ln = text.substr(
        pos, eol == std::string::npos ? std::string::npos : eol - pos);
    ++lineno;
    std::size_t hash = ln.find('#');
    if (hash != std::string::npos) ln = ln.substr(0, hash);
    ln = trim(ln);
    if (eol == std::string::npos) pos = text.size() + 1;
    else pos = eol + 1;
    if (ln.empty()) continue;

    if (ln.rfind("alphabet:", 0) == 0) {
      spec.alphabet = sorted_unique(split_ws(ln.substr(9)));
      have_alphabet = true;
    } else if (ln.rfind("levels:", 0) == 0) {
      levels = parse_int(ln.substr(7), lineno);
      if (levels < 1) throw ParseError("levels must be >= 1", lineno, 1);
      spec.level_sigma1.assign(levels, {});
      seen_level.assign(levels, 0);
    } else if (ln.rfind("halfreset", 0) == 0) {
      std::size_t colon = ln.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected halfreset K: sigma1 = ...", lineno, 1);
      int k = parse_int(ln.substr(9, colon - 9), lineno);
      if (levels < 0 || k < 0 || k >= levels)
        throw ParseError("halfreset level out of range", lineno, 1);
      std::string rest = trim(ln.substr(colon + 1));
      if (rest.rfind("sigma1", 0) != 0)
        throw ParseError("expected sigma1 = ...", lineno, 1);
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos)
        throw ParseError("expected sigma1 = ...", lineno, 1);
      spec.level_sigma1[k] = split_ws(rest.substr(eq + 1));
      seen_level[k] = 1;
    } else if (ln.rfind("hom:", 0) == 0) {
      std::string rest = trim(ln.substr(4));
      std::size_t arrow = rest.find("->");
      if (arrow == std::string::npos)
        throw ParseError("expected hom: STATE -> STATE", lineno, 1);
      std::string from = trim(rest.substr(0, arrow));
      std::string to = trim(rest.substr(arrow + 2));
      if (from.empty() || to.empty())
        throw ParseError("expected hom: STATE -> STATE", lineno, 1);
      spec.hom[from] = to;
    } else if (ln.rfind("finals:", 0) == 0) {
      spec.finals = split_ws(ln.substr(7));
      have_finals = true;
    } else {
      throw ParseError("unrecognized line '" + ln + "'", lineno, 1);
    }
  }
  if (!have_alphabet) throw ParseError("missing alphabet: line", 1, 1);
  if (levels < 0) throw ParseError("missing levels: line", 1, 1);
  for (int k = 0; k < levels; ++k)
    if (!seen_level[k])
      throw ParseError("missing halfreset " + std::to_string(k) + ": line", 1, 1);
  if (!have_finals) throw ParseError("missing finals: line", 1, 1);
  return spec;
}

// ---------------------------------------------------------------------
// R-expressions: finite unions of Sigma0* w1 Sigma1* ... wn Sigman* with
// w_t not in Sigma_{t-1}.
// ---------------------------------------------------------------------

struct RExpression {
  struct Branch {
    std::vector<std::vector<Symbol>> sets;  // n+1 entries, each sorted
    std::vector<Symbol> words;              // n entries
  };
  std::vector<Symbol> alphabet;
  std::vector<Branch> branches;
};

inline RExpression make_r_expression(std::vector<Symbol> alphabet,
                                     std::vector<RExpression::Branch> branches) {
  RExpression e;
  e.alphabet = sorted_unique(std::move(alphabet));
  for (auto& br : branches) {
    if (br.sets.size() != br.words.size() + 1)
      throw std::runtime_error("branch needs n+1 symbol sets for n letters");
    for (auto& set : br.sets) {
      set = sorted_unique(set);
      for (const auto& s : set)
        if (!std::binary_search(e.alphabet.begin(), e.alphabet.end(), s))
          throw std::runtime_error("branch set symbol '" + s +
                                   "' outside the alphabet");
    }
    for (std::size_t t = 0; t < br.words.size(); ++t) {
      if (!std::binary_search(e.alphabet.begin(), e.alphabet.end(), br.words[t]))
        throw std::runtime_error("branch letter '" + br.words[t] +
                                 "' outside the alphabet");
      if (std::binary_search(br.sets[t].begin(), br.sets[t].end(), br.words[t]))
        throw std::runtime_error("letter '" + br.words[t] +
                                 "' may not belong to the preceding set");
    }
    e.branches.push_back(std::move(br));
  }
  return e;
}

// Greedy matching per branch: consume Sigma_t maximally, then demand the
// next letter. Complete because w_{t+1} never belongs to Sigma_t, so
// stopping earlier can never help.
inline bool match_r_expression(const RExpression& e, const Word& w) {
  for (const auto& br : e.branches) {
    std::size_t i = 0;
    bool ok = true;
    for (std::size_t t = 0; t < br.words.size() && ok; ++t) {
      while (i < w.size() &&
             std::binary_search(br.sets[t].begin(), br.sets[t].end(), w[i]))
        ++i;
      if (i >= w.size() || w[i] != br.words[t])
        ok = false;
      else
        ++i;
    }
    if (!ok) continue;
    const auto& last = br.sets.back();
    while (i < w.size() && std::binary_search(last.begin(), last.end(), w[i]))
      ++i;
    if (i == w.size()) return true;
  }
  return false;
}

// Product of the per-branch matchers; accepting when any branch is in its
// final slot.
inline Dfa r_expression_to_dfa(const RExpression& e) {
  const int k = static_cast<int>(e.alphabet.size());
  const int nb = static_cast<int>(e.branches.size());
  // Branch automaton: states 0..n (position in the pattern), n+1 = dead.
  auto branch_step = [&](const RExpression::Branch& br, int state, int sym) {
    int n = static_cast<int>(br.words.size());
    if (state > n) return n + 1;
    const Symbol& c = e.alphabet[sym];
    if (state < n && c == br.words[state]) return state + 1;
    if (std::binary_search(br.sets[state].begin(), br.sets[state].end(), c))
      return state;
    return n + 1;
  };

  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> tuples{std::vector<int>(nb, 0)};
  id[tuples[0]] = 0;
  Dfa d;
  d.alphabet = e.alphabet;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    std::vector<int> cur = tuples[i];
    d.delta.emplace_back(k, -1);
    for (int s = 0; s < k; ++s) {
      std::vector<int> next(nb);
      for (int b = 0; b < nb; ++b) next[b] = branch_step(e.branches[b], cur[b], s);
      auto [it, fresh] = id.emplace(next, static_cast<int>(tuples.size()));
      if (fresh) tuples.push_back(next);
      d.delta[i][s] = it->second;
    }
  }
  d.initial = 0;
  d.states.resize(tuples.size());
  d.finals.resize(tuples.size());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    d.states[i] = "p" + std::to_string(i);
    bool acc = false;
    for (int b = 0; b < nb; ++b)
      if (tuples[i][b] == static_cast<int>(e.branches[b].words.size()))
        acc = true;
    d.finals[i] = acc;
  }
  return d;
}

// ---------------------------------------------------------------------
// Language classification.
// ---------------------------------------------------------------------

struct Classification {
  bool in_ltlP = false;
  bool in_ltlF = false;
  bool star_free = false;
  std::size_t monoid_size = 0;
};

// in_ltlP by the partial-order check, in_ltlF by the same check on the
// reverse automaton, star-freeness by monoid aperiodicity. The monoid
// R/L-triviality checks run as independent routes and any disagreement is
// an internal inconsistency, never a result.
inline Classification classify_language(const Dfa& d, std::size_t monoid_cap = 10000) {
  Dfa m = minimize_dfa(d);
  bool pofa = is_pofa(m).ok;
  bool rpofa = is_rpofa(m);
  Monoid mon = transition_monoid(m, monoid_cap);
  bool rtriv = is_r_trivial(mon);
  bool ltriv = is_l_trivial(mon);
  if (pofa != rtriv)
    throw std::logic_error(
        "internal inconsistency: partial-order and R-triviality disagree");
  if (rpofa != ltriv)
    throw std::logic_error(
        "internal inconsistency: reverse partial-order and L-triviality disagree");
  return {pofa, rpofa, is_aperiodic(mon), mon.size()};
}

// ---------------------------------------------------------------------
// DFA file format and DOT emission.
//   alphabet: a b
//   states: q0 q1
//   initial: q0
//   finals: q1
//   q0 a q1
// ---------------------------------------------------------------------

inline Dfa parse_dfa(const std::string& text) {
  std::vector<Symbol> alphabet;
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> finals;
  std::vector<std::array<std::string, 3>> transitions;
  bool have_alphabet = false, have_states = false, have_initial = false,
       have_finals = false;

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
    if (ln.empty()) continue;
    if (ln.rfind("alphabet:", 0) == 0) {
      alphabet = split_ws(ln.substr(9));
      have_alphabet = true;
    } else if (ln.rfind("states:", 0) == 0) {
      states = split_ws(ln.substr(7));
      have_states = true;
    } else if (ln.rfind("initial:", 0) == 0) {
      initial = trim(ln.substr(8));
      have_initial = true;
    } else if (ln.rfind("finals:", 0) == 0) {
      finals = split_ws(ln.substr(7));
      have_finals = true;
    } else {
      auto parts = split_ws(ln);
      if (parts.size() != 3)
        throw ParseError("expected 'STATE SYMBOL STATE'", lineno, 1);
      transitions.push_back({parts[0], parts[1], parts[2]});
    }
  }
  if (!have_alphabet) throw ParseError("missing alphabet: line", 1, 1);
  if (!have_states) throw ParseError("missing states: line", 1, 1);
  if (!have_initial) throw ParseError("missing initial: line", 1, 1);
  if (!have_finals) throw ParseError("missing finals: line", 1, 1);

  Dfa d;
  d.alphabet = sorted_unique(alphabet);
  d.states = states;
  d.delta.assign(states.size(), std::vector<int>(d.alphabet.size(), -1));
  d.finals.assign(states.size(), 0);
  d.initial = d.state_index(initial);
  if (d.initial < 0) throw std::runtime_error("unknown initial state " + initial);
  for (const auto& f : finals) {
    int i = d.state_index(f);
    if (i < 0) throw std::runtime_error("unknown final state " + f);
    d.finals[i] = 1;
  }
  for (const auto& [from, sym, to] : transitions) {
    int q = d.state_index(from);
    int s = d.symbol_index(sym);
    int t = d.state_index(to);
    if (q < 0) throw std::runtime_error("unknown state " + from);
    if (s < 0) throw std::runtime_error("unknown symbol " + sym);
    if (t < 0) throw std::runtime_error("unknown state " + to);
    if (d.delta[q][s] >= 0)
      throw std::runtime_error("duplicate transition for (" + from + "," + sym + ")");
    d.delta[q][s] = t;
  }
  for (std::size_t q = 0; q < d.states.size(); ++q)
    for (std::size_t s = 0; s < d.alphabet.size(); ++s)
      if (d.delta[q][s] < 0)
        throw std::runtime_error("missing transition for (" + d.states[q] +
                                 "," + d.alphabet[s] + ")");
  return d;
}

inline std::string unparse_dfa(const Dfa& d) {
  std::string out = "alphabet: " + join(d.alphabet, " ") + "\n";
  out += "states: " + join(d.states, " ") + "\n";
  out += "initial: " + d.states[d.initial] + "\n";
  out += "finals:";
  for (std::size_t q = 0; q < d.states.size(); ++q)
    if (d.finals[q]) out += " " + d.states[q];
  out += "\n";
  for (std::size_t q = 0; q < d.states.size(); ++q)
    for (std::size_t s = 0; s < d.alphabet.size(); ++s)
      out += d.states[q] + " " + d.alphabet[s] + " " +
             d.states[d.delta[q][s]] + "\n";
  return out;
}

// Deterministic node ordering: declaration order, parallel edges merged
// into one comma-separated label.
inline std::string to_dot(const Dfa& d, const std::string& name = "dfa") {
  std::string out = "digraph " + name + " {\n  rankdir=LR;\n";
  out += "  __start [shape=point];\n";
  for (std::size_t q = 0; q < d.states.size(); ++q)
    out += "  \"" + d.states[q] + "\" [shape=" +
           (d.finals[q] ? "doublecircle" : "circle") + "];\n";
  out += "  __start -> \"" + d.states[d.initial] + "\";\n";
  for (std::size_t q = 0; q < d.states.size(); ++q) {
    std::map<int, std::vector<Symbol>> grouped;
    for (std::size_t s = 0; s < d.alphabet.size(); ++s)
      grouped[d.delta[q][s]].push_back(d.alphabet[s]);
    for (const auto& [target, syms] : grouped)
      out += "  \"" + d.states[q] + "\" -> \"" + d.states[target] +
             "\" [label=\"" + join(syms, ",") + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace uhax
