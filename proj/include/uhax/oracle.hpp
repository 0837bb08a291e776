#pragma once

#include <functional>
#include <memory>
#include <set>
#include <random>
#include <thread>
#include <vector>

#include "uhax/automata.hpp"
#include "uhax/brasp.hpp"
#include "uhax/ltl.hpp"
#include "uhax/uhat.hpp"

namespace uhax {

// Uniform wrapper: a total, deterministic membership function over the
// alphabet, optionally with per-position values. The acceptance
// convention travels with the recognizer; min_len = 1 marks recognizers
// with no defined behaviour on the empty string (programs reading an
// output position), and equivalence checks start enumeration there.
struct Recognizer {
  std::string label;
  std::vector<Symbol> alphabet;
  int min_len = 0;
  std::function<bool(const Word&)> accepts;
  std::function<bool(const Word&, int)> value;  // positions 1..T

  bool positionwise() const { return static_cast<bool>(value); }
};

inline Recognizer make_recognizer(const LtlFormula& f,
                                  AcceptAt at = AcceptAt::End) {
  auto ff = std::make_shared<const LtlFormula>(f);
  Recognizer r;
  r.label = std::string("ltl@") + (at == AcceptAt::End ? "end" : "start");
  r.alphabet = f.alphabet;
  r.accepts = [ff, at](const Word& w) { return ltl_accepts(*ff, w, at); };
  r.value = [ff](const Word& w, int pos) { return eval_ltl(*ff, w, pos); };
  return r;
}

inline Recognizer make_recognizer(const BraspProgram& p,
                                  AcceptAt at = AcceptAt::End) {
  auto pp = std::make_shared<const BraspProgram>(p);
  Recognizer r;
  r.label = std::string("brasp@") + (at == AcceptAt::End ? "end" : "start");
  r.alphabet = p.alphabet;
  r.min_len = 1;
  r.accepts = [pp, at](const Word& w) { return brasp_accepts(*pp, w, at); };
  r.value = [pp](const Word& w, int pos) {
    RunTrace trace = run_brasp(*pp, w);
    return trace[pp->output][pos - 1] != 0;
  };
  return r;
}

inline Recognizer make_recognizer(const Dfa& d) {
  auto dd = std::make_shared<const Dfa>(d);
  Recognizer r;
  r.label = "dfa";
  r.alphabet = d.alphabet;
  r.accepts = [dd](const Word& w) { return dfa_accepts(*dd, w); };
  return r;
}

inline Recognizer make_recognizer(const UhatModel& m) {
  auto mm = std::make_shared<const UhatModel>(m);
  Recognizer r;
  r.label = "uhat";
  r.alphabet = m.input_alphabet();
  r.accepts = [mm](const Word& w) { return uhat_accepts(*mm, w); };
  return r;
}

// All strings of length 0..max_len in length-then-lexicographic order
// over the sorted alphabet.
inline std::vector<Word> enumerate_strings(std::vector<Symbol> alphabet,
                                           int max_len) {
  alphabet = sorted_unique(std::move(alphabet));
  std::vector<Word> out{Word{}};
  std::size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i)
      for (const Symbol& s : alphabet) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

enum class EquivMode { Language, Positionwise };

// Equal up to the checked length, or the shortest (then lexicographically
// least) distinguishing string.
struct EquivResult {
  bool equal = true;
  int max_len_checked = 0;
  Word counterexample;
  bool value_a = false;
  bool value_b = false;
  int position = -1;  // positionwise mode only
};

inline EquivResult check_equiv(const Recognizer& a, const Recognizer& b,
                               int max_len,
                               EquivMode mode = EquivMode::Language,
                               int jobs = 1) {
  if (sorted_unique(a.alphabet) != sorted_unique(b.alphabet))
    throw std::runtime_error("recognizer alphabets differ");
  if (mode == EquivMode::Positionwise && (!a.positionwise() || !b.positionwise()))
    throw std::runtime_error("both recognizers must expose per-position values");
  const int min_len = std::max(a.min_len, b.min_len);
  std::vector<Word> words = enumerate_strings(a.alphabet, max_len);

  struct Hit {
    std::size_t index;
    bool va, vb;
    int pos;
  };
  auto probe = [&](const Word& w, Hit& hit) {
    if (static_cast<int>(w.size()) < min_len) return false;
    if (mode == EquivMode::Language) {
      bool va = a.accepts(w), vb = b.accepts(w);
      if (va != vb) {
        hit.va = va;
        hit.vb = vb;
        hit.pos = -1;
        return true;
      }
      return false;
    }
    for (int pos = 1; pos <= static_cast<int>(w.size()); ++pos) {
      bool va = a.value(w, pos), vb = b.value(w, pos);
      if (va != vb) {
        hit.va = va;
        hit.vb = vb;
        hit.pos = pos;
        return true;
      }
    }
    return false;
  };

  Hit first{words.size(), false, false, -1};
  if (jobs <= 1) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      Hit h{i, false, false, -1};
      if (probe(words[i], h)) {
        first = h;
        first.index = i;
        break;
      }
    }
  } else {
    std::vector<Hit> local(jobs, Hit{words.size(), false, false, -1});
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j)
      threads.emplace_back([&, j]() {
        for (std::size_t i = j; i < words.size(); i += jobs) {
          Hit h{i, false, false, -1};
          if (probe(words[i], h)) {
            h.index = i;
            local[j] = h;
            break;
          }
        }
      });
    for (auto& t : threads) t.join();
    for (const Hit& h : local)
      if (h.index < first.index) first = h;
  }

  EquivResult res;
  res.max_len_checked = max_len;
  if (first.index < words.size()) {
    res.equal = false;
    res.counterexample = words[first.index];
    res.value_a = first.va;
    res.value_b = first.vb;
    res.position = first.pos;
  }
  return res;
}

// ---------------------------------------------------------------------
// Seeded generators: pure functions of (seed, params).
// ---------------------------------------------------------------------

struct FormulaGenParams {
  int depth = 3;
  std::vector<Symbol> alphabet = {"a", "b"};
  Fragment fragment = Fragment::Full;
};

inline LtlFormula generate_formula(std::uint64_t seed,
                                   const FormulaGenParams& params) {
  std::mt19937_64 rng(seed);
  LtlBuilder b(params.alphabet);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_sym(
      0, static_cast<int>(b.alphabet().size()) - 1);
  std::function<int(int)> gen = [&](int depth) -> int {
    if (depth <= 0) return b.atom(b.alphabet()[pick_sym(rng)]);
    double r = unit(rng);
    if (r < 0.22) return b.atom(b.alphabet()[pick_sym(rng)]);
    if (r < 0.38) return b.negation(gen(depth - 1));
    if (r < 0.54) {
      int lhs = gen(depth - 1);
      return b.conj(lhs, gen(depth - 1));
    }
    if (r < 0.68) {
      int lhs = gen(depth - 1);
      return b.disj(lhs, gen(depth - 1));
    }
    switch (params.fragment) {
      case Fragment::POnly: return b.past(gen(depth - 1));
      case Fragment::FOnly: return b.future(gen(depth - 1));
      case Fragment::PF:
        return unit(rng) < 0.5 ? b.past(gen(depth - 1))
                               : b.future(gen(depth - 1));
      case Fragment::Full: {
        double t = unit(rng);
        if (t < 0.3) return b.past(gen(depth - 1));
        if (t < 0.6) return b.future(gen(depth - 1));
        int lhs = gen(depth - 1);
        return t < 0.8 ? b.since(lhs, gen(depth - 1))
                       : b.until(lhs, gen(depth - 1));
      }
    }
    return b.atom(b.alphabet()[0]);
  };
  return b.take(gen(params.depth));
}

struct BraspGenParams {
  int vectors = 3;  // non-atomic definitions
  std::vector<Symbol> alphabet = {"a", "b"};
  Restriction restriction = Restriction::FL;
};

inline BraspProgram generate_brasp(std::uint64_t seed,
                                   const BraspGenParams& params) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BraspProgram p = make_brasp_skeleton(params.alphabet);

  std::function<BExprPtr(int, PosRef)> gen_expr = [&](int depth,
                                                      PosRef at) -> BExprPtr {
    std::uniform_int_distribution<int> pick_vec(
        0, static_cast<int>(p.vectors.size()) - 1);
    double r = unit(rng);
    if (depth <= 0 || r < 0.45) {
      if (r < 0.08) return bexpr_const(unit(rng) < 0.5);
      return bexpr_ref(pick_vec(rng), at);
    }
    if (r < 0.62) return bexpr_not(gen_expr(depth - 1, at));
    BExprPtr lhs = gen_expr(depth - 1, at);
    BExprPtr rhs = gen_expr(depth - 1, at);
    return r < 0.82 ? bexpr_and(lhs, rhs) : bexpr_or(lhs, rhs);
  };

  for (int i = 0; i < params.vectors; ++i) {
    VectorDef def;
    def.name = "V" + std::to_string(p.vectors.size());
    if (unit(rng) < 0.45) {
      def.kind = VectorDef::Kind::PositionWise;
      def.expr = gen_expr(2, PosRef::Cur);
    } else {
      def.kind = VectorDef::Kind::Attention;
      switch (params.restriction) {
        case Restriction::FL:
          def.attn.mask = MaskDir::Future;
          def.attn.tiebreak = Tiebreak::Left;
          break;
        case Restriction::FR:
          def.attn.mask = MaskDir::Future;
          def.attn.tiebreak = Tiebreak::Right;
          break;
        case Restriction::PL:
          def.attn.mask = MaskDir::Past;
          def.attn.tiebreak = Tiebreak::Left;
          break;
        case Restriction::PR:
          def.attn.mask = MaskDir::Past;
          def.attn.tiebreak = Tiebreak::Right;
          break;
        case Restriction::Any:
          def.attn.mask = unit(rng) < 0.5 ? MaskDir::Future : MaskDir::Past;
          def.attn.tiebreak = unit(rng) < 0.5 ? Tiebreak::Left : Tiebreak::Right;
          break;
      }
      def.attn.score = unit(rng) < 0.12 ? bexpr_const(true)
                                        : gen_expr(1, PosRef::Other);
      def.attn.value = gen_expr(1, PosRef::Other);
      def.attn.deflt = gen_expr(1, PosRef::Cur);
    }
    p.vectors.push_back(std::move(def));
  }
  p.output = static_cast<int>(p.vectors.size()) - 1;
  return p;
}

struct DfaGenParams {
  int max_states = 4;
  std::vector<Symbol> alphabet = {"a", "b"};
};

inline Dfa generate_dfa(std::uint64_t seed, const DfaGenParams& params) {
  std::mt19937_64 rng(seed);
  Dfa d;
  d.alphabet = sorted_unique(params.alphabet);
  std::uniform_int_distribution<int> pick_n(1, params.max_states);
  const int n = pick_n(rng);
  std::uniform_int_distribution<int> pick_q(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  d.states.resize(n);
  d.delta.assign(n, std::vector<int>(d.alphabet.size()));
  d.finals.resize(n);
  d.initial = 0;
  for (int q = 0; q < n; ++q) {
    d.states[q] = "q" + std::to_string(q);
    d.finals[q] = unit(rng) < 0.4;
    for (std::size_t s = 0; s < d.alphabet.size(); ++s)
      d.delta[q][s] = pick_q(rng);
  }
  return d;
}

struct UhatGenParams {
  int layers = 1;
  std::vector<Symbol> alphabet = {"a", "b"};
  int max_rules = 3;
  std::size_t state_cap = 50000;
};

inline UhatModel generate_uhat(std::uint64_t seed, const UhatGenParams& params) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  UhatModel m = make_uhat_skeleton(params.alphabet, params.layers);
  std::uniform_int_distribution<int> pick_score(0, 2);
  std::uniform_int_distribution<int> pick_tok(-1,
      static_cast<int>(m.alphabet.size()) - 1);
  for (int l = 0; l < params.layers; ++l) {
    UhatLayer& layer = m.layers[l];
    std::uniform_int_distribution<int> pick_comp(0, (1 << l) - 1);
    std::uniform_int_distribution<int> pick_rules(1, params.max_rules);
    int rules = pick_rules(rng);
    for (int r = 0; r < rules; ++r) {
      ScoreRule rule;
      rule.score = pick_score(rng);
      if (unit(rng) >= 0.15) {
        int atoms = unit(rng) < 0.75 ? 1 : 2;
        for (int a = 0; a < atoms; ++a) {
          PatternAtom atom;
          atom.on_key = unit(rng) < 0.8;
          atom.component = pick_comp(rng);
          atom.token = pick_tok(rng);
          rule.atoms.push_back(atom);
        }
      }
      layer.rules.push_back(std::move(rule));
    }
  }
  // Accepting set: a seeded subset of the end-marker representations the
  // model can actually produce.
  UhatStateSpace space = explore_uhat(m, params.state_cap);
  std::set<Rep> finals(space.eos_final.begin(), space.eos_final.end());
  for (const Rep& r : finals)
    if (unit(rng) < 0.5) m.accept.push_back(r);
  std::sort(m.accept.begin(), m.accept.end());
  return m;
}

}  // namespace uhax
