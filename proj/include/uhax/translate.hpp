#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "uhax/automata.hpp"
#include "uhax/brasp.hpp"
#include "uhax/ltl.hpp"
#include "uhax/uhat.hpp"

namespace uhax {

// ---------------------------------------------------------------------
// Past-fragment formulas to leftmost/future-masked programs: atoms are
// the atomic vectors, Boolean nodes become position-wise ops, and P psi
// becomes a leftmost future-masked attention whose score and value are
// the child's vector with default 0.
// ---------------------------------------------------------------------

inline BraspProgram ltl_to_brasp(const LtlFormula& f) {
  if (fragment_of(f) != Fragment::POnly)
    throw std::runtime_error(
        "only past-fragment formulas translate to leftmost/future programs");
  BraspProgram p = make_brasp_skeleton(f.alphabet);
  std::vector<int> vec_of(f.nodes.size(), -1);
  for (std::size_t i = 0; i < f.nodes.size(); ++i) {
    const LtlFormula::Node& n = f.nodes[i];
    switch (n.op) {
      case LtlOp::Atom:
        vec_of[i] = n.sym;  // atomic vectors are ordered like the alphabet
        continue;
      case LtlOp::Not:
      case LtlOp::And:
      case LtlOp::Or: {
        VectorDef def;
        def.kind = VectorDef::Kind::PositionWise;
        BExprPtr lhs = bexpr_ref(vec_of[n.lhs], PosRef::Cur);
        if (n.op == LtlOp::Not)
          def.expr = bexpr_not(lhs);
        else if (n.op == LtlOp::And)
          def.expr = bexpr_and(lhs, bexpr_ref(vec_of[n.rhs], PosRef::Cur));
        else
          def.expr = bexpr_or(lhs, bexpr_ref(vec_of[n.rhs], PosRef::Cur));
        def.name = "V" + std::to_string(p.vectors.size());
        vec_of[i] = static_cast<int>(p.vectors.size());
        p.vectors.push_back(std::move(def));
        continue;
      }
      case LtlOp::Past: {
        VectorDef def;
        def.kind = VectorDef::Kind::Attention;
        def.attn.tiebreak = Tiebreak::Left;
        def.attn.mask = MaskDir::Future;
        def.attn.score = bexpr_ref(vec_of[n.lhs], PosRef::Other);
        def.attn.value = bexpr_ref(vec_of[n.lhs], PosRef::Other);
        def.attn.deflt = bexpr_const(false);
        def.name = "V" + std::to_string(p.vectors.size());
        vec_of[i] = static_cast<int>(p.vectors.size());
        p.vectors.push_back(std::move(def));
        continue;
      }
      default:
        throw std::logic_error("unexpected operator in past fragment");
    }
  }
  p.output = vec_of[f.root];
  return p;
}

// ---------------------------------------------------------------------
// Programs to formulas, one formula per vector. Leftmost future-masked
// attention becomes
//     (P (psiS & !P psiS & psiV)) | (!(P psiS) & psiD)
// where psiS & !P psiS pins the globally leftmost scoring position;
// rightmost attention needs Since:
//     (!psiS S (psiS & psiV)) | (!(P psiS) & psiD).
// Past-masked programs are translated by mirroring, translating, and
// mirroring the formulas back.
// ---------------------------------------------------------------------

struct BraspToLtl {
  LtlFormula acceptance;            // formula of the output vector
  std::vector<LtlFormula> vectors;  // indexed like the program's vectors
};

namespace detail {

inline int bexpr_to_formula(const BExpr& e, const std::vector<int>& vec_formula,
                            LtlBuilder& b) {
  switch (e.kind) {
    case BExpr::Kind::Const: return e.value ? b.truth() : b.falsity();
    case BExpr::Kind::Ref: return vec_formula[e.vec];
    case BExpr::Kind::Not: return b.negation(bexpr_to_formula(*e.lhs, vec_formula, b));
    case BExpr::Kind::And:
      return b.conj(bexpr_to_formula(*e.lhs, vec_formula, b),
                    bexpr_to_formula(*e.rhs, vec_formula, b));
    case BExpr::Kind::Or:
      return b.disj(bexpr_to_formula(*e.lhs, vec_formula, b),
                    bexpr_to_formula(*e.rhs, vec_formula, b));
  }
  throw std::logic_error("unreachable expression kind");
}

}  // namespace detail

inline BraspToLtl brasp_to_ltl(const BraspProgram& p, bool simplify = false) {
  bool any_future = false, any_past = false;
  for (const auto& v : p.vectors)
    if (v.kind == VectorDef::Kind::Attention) {
      (v.attn.mask == MaskDir::Future ? any_future : any_past) = true;
    }
  if (any_past && any_future)
    throw std::runtime_error(
        "programs mixing future- and past-masked attention do not translate");
  if (any_past) {
    BraspToLtl mirrored = brasp_to_ltl(mirror_brasp(p), simplify);
    BraspToLtl out;
    out.acceptance = mirror_ltl(mirrored.acceptance);
    for (auto& f : mirrored.vectors) out.vectors.push_back(mirror_ltl(f));
    return out;
  }

  LtlBuilder b(p.alphabet);
  std::vector<int> vec_formula(p.vectors.size(), -1);
  for (std::size_t i = 0; i < p.vectors.size(); ++i) {
    const VectorDef& v = p.vectors[i];
    switch (v.kind) {
      case VectorDef::Kind::Atomic:
        vec_formula[i] = b.atom(p.alphabet[v.symbol]);
        break;
      case VectorDef::Kind::PositionWise:
        vec_formula[i] = detail::bexpr_to_formula(*v.expr, vec_formula, b);
        break;
      case VectorDef::Kind::Attention: {
        if (!bexpr_only_reads(*v.attn.score, PosRef::Other) ||
            !bexpr_only_reads(*v.attn.value, PosRef::Other))
          throw std::runtime_error("attention op '" + v.name +
                                   "' has a binary score or value; only unary "
                                   "form translates");
        int psi_s = detail::bexpr_to_formula(*v.attn.score, vec_formula, b);
        int psi_v = detail::bexpr_to_formula(*v.attn.value, vec_formula, b);
        int psi_d = detail::bexpr_to_formula(*v.attn.deflt, vec_formula, b);
        int no_score_before = b.negation(b.past(psi_s));
        int hit;
        if (v.attn.tiebreak == Tiebreak::Left) {
          hit = b.past(b.conj(b.conj(psi_s, b.negation(b.past(psi_s))), psi_v));
        } else {
          hit = b.since(b.negation(psi_s), b.conj(psi_s, psi_v));
        }
        vec_formula[i] = b.disj(hit, b.conj(no_score_before, psi_d));
        break;
      }
    }
  }

  BraspToLtl out;
  for (std::size_t i = 0; i < p.vectors.size(); ++i) {
    LtlFormula f = b.take(vec_formula[i]);
    out.vectors.push_back(simplify ? simplify_ltl(f) : f);
  }
  out.acceptance = out.vectors[p.output];
  return out;
}

// ---------------------------------------------------------------------
// Cascades of half-resets to leftmost/future programs. Per level, the
// "still in q0" vector attends to the leftmost earlier occurrence of a
// sigma1 token (value 0, default 1); level k's tokens pair the previous
// levels' state with the input symbol. The homomorphism then yields
// per-state vectors A_q (state before reading position t) and Y_q (after
// reading it); the output is the disjunction of Y_q over final states.
// ---------------------------------------------------------------------

namespace detail {

inline std::string sanitize_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
      out += c;
    else if (c == ',')
      out += '_';
  }
  return out;
}

}  // namespace detail

inline BraspProgram cascade_to_brasp(const CascadeSpec& spec) {
  CascadeBuild build = build_cascade(spec);
  BraspProgram p = make_brasp_skeleton(spec.alphabet);
  const auto& sigma = p.alphabet;

  auto fresh = [&p](std::string base) {
    base = detail::sanitize_name(base);
    std::string name = base;
    int k = 1;
    while (p.vector_index(name) >= 0) name = base + "_" + std::to_string(++k);
    return name;
  };

  // Current fold: state names and the index of each state's indicator
  // vector (true when the fold is in that state before reading t).
  std::vector<std::string> fold_states;
  std::vector<int> fold_vec;

  for (std::size_t level = 0; level < build.levels.size(); ++level) {
    const HalfReset& h = build.levels[level];
    // Score tokens: level 0 reads input symbols directly, later levels
    // read (fold state, symbol) pairs materialized as position-wise
    // vectors.
    std::map<Symbol, int> token_vec;
    if (level == 0) {
      for (std::size_t s = 0; s < sigma.size(); ++s) token_vec[sigma[s]] = static_cast<int>(s);
    } else {
      for (std::size_t fs = 0; fs < fold_states.size(); ++fs)
        for (std::size_t s = 0; s < sigma.size(); ++s) {
          std::vector<std::string> parts = split_tuple(fold_states[fs]);
          parts.push_back(sigma[s]);
          Symbol token = tuple_token(parts);
          VectorDef def;
          def.kind = VectorDef::Kind::PositionWise;
          def.expr = bexpr_and(bexpr_ref(fold_vec[fs], PosRef::Cur),
                               bexpr_ref(static_cast<int>(s), PosRef::Cur));
          def.name = fresh("E" + std::to_string(level) + "_" + token);
          token_vec[token] = static_cast<int>(p.vectors.size());
          p.vectors.push_back(std::move(def));
        }
    }

    std::vector<BExprPtr> sigma1_refs;
    for (const Symbol& tok : h.sigma1)
      sigma1_refs.push_back(bexpr_ref(token_vec.at(tok), PosRef::Other));

    VectorDef in_q0;
    in_q0.kind = VectorDef::Kind::Attention;
    in_q0.attn.tiebreak = Tiebreak::Left;
    in_q0.attn.mask = MaskDir::Future;
    in_q0.attn.score = bexpr_or_all(sigma1_refs);
    in_q0.attn.value = bexpr_const(false);
    in_q0.attn.deflt = bexpr_const(true);
    in_q0.name = fresh("B" + std::to_string(level) + "_q0");
    int q0_vec = static_cast<int>(p.vectors.size());
    p.vectors.push_back(std::move(in_q0));

    VectorDef in_q1;
    in_q1.kind = VectorDef::Kind::PositionWise;
    in_q1.expr = bexpr_not(bexpr_ref(q0_vec, PosRef::Cur));
    in_q1.name = fresh("B" + std::to_string(level) + "_q1");
    int q1_vec = static_cast<int>(p.vectors.size());
    p.vectors.push_back(std::move(in_q1));

    if (level == 0) {
      fold_states = {"q0", "q1"};
      fold_vec = {q0_vec, q1_vec};
    } else {
      std::vector<std::string> next_states;
      std::vector<int> next_vec;
      for (std::size_t fs = 0; fs < fold_states.size(); ++fs)
        for (int q = 0; q < 2; ++q) {
          std::vector<std::string> parts = split_tuple(fold_states[fs]);
          parts.push_back(q == 0 ? "q0" : "q1");
          std::string name = tuple_token(parts);
          VectorDef def;
          def.kind = VectorDef::Kind::PositionWise;
          def.expr = bexpr_and(bexpr_ref(fold_vec[fs], PosRef::Cur),
                               bexpr_ref(q == 0 ? q0_vec : q1_vec, PosRef::Cur));
          def.name = fresh("C" + std::to_string(level) + "_" + name);
          next_states.push_back(name);
          next_vec.push_back(static_cast<int>(p.vectors.size()));
          p.vectors.push_back(std::move(def));
        }
      fold_states = std::move(next_states);
      fold_vec = std::move(next_vec);
    }
  }

  // Collapse along the homomorphism: A_q is the state of the target
  // before reading t.
  const Dfa& target = build.target;
  std::vector<int> before_vec(target.states.size(), -1);
  for (std::size_t tq = 0; tq < target.states.size(); ++tq) {
    std::vector<BExprPtr> parts;
    for (std::size_t fs = 0; fs < fold_states.size(); ++fs)
      if (spec.hom.at(fold_states[fs]) == target.states[tq])
        parts.push_back(bexpr_ref(fold_vec[fs], PosRef::Cur));
    VectorDef def;
    def.kind = VectorDef::Kind::PositionWise;
    def.expr = bexpr_or_all(parts);
    def.name = fresh("A_" + target.states[tq]);
    before_vec[tq] = static_cast<int>(p.vectors.size());
    p.vectors.push_back(std::move(def));
  }

  // Y_q: the target is in q after reading position t, i.e. some p,w with
  // delta(p,w)=q has A_p true and symbol w at t.
  std::vector<int> after_vec(target.states.size(), -1);
  for (std::size_t tq = 0; tq < target.states.size(); ++tq) {
    std::vector<BExprPtr> parts;
    for (std::size_t pq = 0; pq < target.states.size(); ++pq)
      for (std::size_t s = 0; s < target.alphabet.size(); ++s)
        if (target.delta[pq][s] == static_cast<int>(tq))
          parts.push_back(bexpr_and(bexpr_ref(before_vec[pq], PosRef::Cur),
                                    bexpr_ref(static_cast<int>(s), PosRef::Cur)));
    VectorDef def;
    def.kind = VectorDef::Kind::PositionWise;
    def.expr = bexpr_or_all(parts);
    def.name = fresh("Y_" + target.states[tq]);
    after_vec[tq] = static_cast<int>(p.vectors.size());
    p.vectors.push_back(std::move(def));
  }

  std::vector<BExprPtr> accept_parts;
  for (std::size_t tq = 0; tq < target.states.size(); ++tq)
    if (target.finals[tq])
      accept_parts.push_back(bexpr_ref(after_vec[tq], PosRef::Cur));
  VectorDef out_def;
  out_def.kind = VectorDef::Kind::PositionWise;
  out_def.expr = bexpr_or_all(accept_parts);
  out_def.name = fresh("Y");
  p.output = static_cast<int>(p.vectors.size());
  p.vectors.push_back(std::move(out_def));
  return p;
}

// ---------------------------------------------------------------------
// Leftmost/future transformers to automata: the state tracks, per layer,
// the ordered subset of representations seen so far; reading a symbol
// appends the new position's representations, which only ever grows the
// state, so the result is partially ordered. A state is final when the
// end marker's representation computed from it lands in the accept set.
// ---------------------------------------------------------------------

inline Dfa uhat_to_pofa(const UhatModel& m, std::size_t state_cap = 50000) {
  UhatStateSpace space = explore_uhat(m, state_cap);
  Dfa d;
  d.alphabet = space.input_alphabet;
  d.initial = 0;
  d.delta = space.delta;
  d.states.resize(space.states.size());
  d.finals.resize(space.states.size());
  std::set<Rep> accept(m.accept.begin(), m.accept.end());
  for (std::size_t i = 0; i < space.states.size(); ++i) {
    d.states[i] = "s" + std::to_string(i);
    d.finals[i] = accept.count(space.eos_final[i]) > 0;
  }
  return d;
}

// ---------------------------------------------------------------------
// Leftmost/future transformers to past-fragment formulas.
//
// For representations x, y of the layer below, add(l, x, y) says that a
// position currently holding x gets y attended at layer l. It guesses the
// ordered subset X of representations in the strict past (restricted to
// the reachable ones), checks it with order(...), and then checks that y
// is the leftmost maximum-score representation: no higher-scoring key
// occurs in the past, and some occurrence of y has no equally-scored key
// before it. pi(l, x) pins a position's whole representation by conjoining
// the adds of all layers below; the acceptance formula is the disjunction
// of pi over accepting end-marker representations, with the end-marker
// atom itself dropped (the formula is evaluated at the virtual end
// position, which carries no symbol).
// ---------------------------------------------------------------------

namespace detail {

class UhatLtlBuilder {
 public:
  UhatLtlBuilder(const UhatModel& m, const UhatStateSpace& space)
      : model_(m), space_(space), b_(m.input_alphabet()) {
    const int L = m.num_layers();
    rep_id_.resize(L + 1);
    for (int l = 0; l <= L; ++l)
      for (std::size_t i = 0; i < space.rep_pool[l].size(); ++i)
        rep_id_[l][space.rep_pool[l][i]] = static_cast<int>(i);
    subsets_.resize(L + 1);
    for (const auto& st : space.states)
      for (int l = 0; l <= L; ++l) subsets_[l].insert(st.subsets[l]);
  }

  LtlFormula build() {
    const int L = model_.num_layers();
    std::set<Rep> accept(model_.accept.begin(), model_.accept.end());
    std::set<Rep> reachable_finals;
    for (const Rep& r : space_.eos_final)
      if (accept.count(r)) reachable_finals.insert(r);
    std::vector<int> parts;
    for (const Rep& r : reachable_finals) parts.push_back(pi_eos(L, r));
    return b_.take(b_.disj_all(parts));
  }

 private:
  int score(int layer, const Rep& q, const Rep& k) const {
    return score_pair(model_.layers[layer - 1], q, k);
  }

  bool is_bottom(const Rep& r) const {
    for (Token t : r)
      if (t != kBottom) return false;
    return true;
  }

  // pi for reachable real-position representations, by interned id.
  int pi_real(int l, int id) {
    auto key = std::make_pair(l, id);
    auto it = pi_real_memo_.find(key);
    if (it != pi_real_memo_.end()) return it->second;
    const Rep& x = space_.rep_pool[l][id];
    int node;
    if (l == 0) {
      node = b_.atom(model_.alphabet[x[0]]);
    } else {
      const std::size_t half = x.size() / 2;
      Rep front(x.begin(), x.begin() + half);
      Rep back(x.begin() + half, x.end());
      int front_id = rep_id_[l - 1].at(front);
      node = b_.conj(pi_real(l - 1, front_id), add_real(l, front_id, back));
    }
    pi_real_memo_[key] = node;
    return node;
  }

  // order over layer-l representations: the chain asserts the subset's
  // elements occur (first occurrences in subset order), the rest excludes
  // every other reachable representation from the past.
  int order(int l, const std::vector<int>& subset) {
    auto key = std::make_pair(l, subset);
    auto it = order_memo_.find(key);
    if (it != order_memo_.end()) return it->second;
    std::vector<int> parts;
    if (!subset.empty()) {
      int chain = b_.past(pi_real(l, subset[0]));
      for (std::size_t j = 1; j < subset.size(); ++j)
        chain = b_.past(b_.conj(pi_real(l, subset[j]), chain));
      parts.push_back(chain);
    }
    std::set<int> in_subset(subset.begin(), subset.end());
    for (std::size_t id = 0; id < space_.rep_pool[l].size(); ++id)
      if (!in_subset.count(static_cast<int>(id)))
        parts.push_back(b_.negation(b_.past(pi_real(l, static_cast<int>(id)))));
    int node = parts.empty() ? b_.truth() : b_.conj_all(parts);
    order_memo_[key] = node;
    return node;
  }

  // Score-comparison conjuncts shared by the real and end-marker paths;
  // pi_self is the current position's representation constraint (or -1 to
  // omit it, for the end marker at level 0).
  int best_given(int l, const Rep& query, int pi_self, int key_id,
                 const std::vector<int>& subset) {
    std::vector<int> parts;
    if (pi_self >= 0) parts.push_back(pi_self);
    const Rep& key = space_.rep_pool[l - 1][key_id];
    int sy = score(l, query, key);
    for (int z : subset) {
      if (score(l, query, space_.rep_pool[l - 1][z]) > sy)
        parts.push_back(b_.negation(b_.past(pi_real(l - 1, z))));
    }
    std::vector<int> inner{pi_real(l - 1, key_id)};
    for (int z : subset) {
      if (z == key_id) continue;
      if (score(l, query, space_.rep_pool[l - 1][z]) == sy)
        inner.push_back(b_.negation(b_.past(pi_real(l - 1, z))));
    }
    parts.push_back(b_.past(b_.conj_all(inner)));
    return b_.conj_all(parts);
  }

  // add for real query representations (by id). back is the attended
  // tuple; an all-bottom back means the past was empty.
  int add_real(int l, int query_id, const Rep& back) {
    auto key = std::make_tuple(l, query_id, back);
    auto it = add_real_memo_.find(key);
    if (it != add_real_memo_.end()) return it->second;
    int node;
    if (is_bottom(back)) {
      node = order(l - 1, {});
    } else {
      const Rep& query = space_.rep_pool[l - 1][query_id];
      int key_id = rep_id_[l - 1].at(back);
      std::vector<int> branches;
      for (const auto& subset : subsets_[l - 1])
        branches.push_back(
            b_.conj(order(l - 1, subset),
                    best_given(l, query, pi_real(l - 1, query_id), key_id, subset)));
      node = b_.disj_all(branches);
    }
    add_real_memo_[key] = node;
    return node;
  }

  // pi along the end marker's representation; level 0 contributes no
  // constraint. Returns -1 for "no constraint".
  int pi_eos(int l, const Rep& x) {
    if (l == 0) return -1;
    auto key = std::make_pair(l, x);
    auto it = pi_eos_memo_.find(key);
    if (it != pi_eos_memo_.end()) return it->second;
    const std::size_t half = x.size() / 2;
    Rep front(x.begin(), x.begin() + half);
    Rep back(x.begin() + half, x.end());
    int below = pi_eos(l - 1, front);
    int add = add_eos(l, front, back);
    int node = below >= 0 ? b_.conj(below, add) : add;
    pi_eos_memo_[key] = node;
    return node;
  }

  int add_eos(int l, const Rep& query, const Rep& back) {
    auto key = std::make_tuple(l, query, back);
    auto it = add_eos_memo_.find(key);
    if (it != add_eos_memo_.end()) return it->second;
    int node;
    if (is_bottom(back)) {
      node = order(l - 1, {});
    } else {
      int key_id = rep_id_[l - 1].at(back);
      int pi_self = pi_eos(l - 1, query);
      std::vector<int> branches;
      for (const auto& subset : subsets_[l - 1])
        branches.push_back(b_.conj(order(l - 1, subset),
                                   best_given(l, query, pi_self, key_id, subset)));
      node = b_.disj_all(branches);
    }
    add_eos_memo_[key] = node;
    return node;
  }

  const UhatModel& model_;
  const UhatStateSpace& space_;
  LtlBuilder b_;
  std::vector<std::map<Rep, int>> rep_id_;
  std::vector<std::set<std::vector<int>>> subsets_;
  std::map<std::pair<int, int>, int> pi_real_memo_;
  std::map<std::pair<int, std::vector<int>>, int> order_memo_;
  std::map<std::tuple<int, int, Rep>, int> add_real_memo_;
  std::map<std::pair<int, Rep>, int> pi_eos_memo_;
  std::map<std::tuple<int, Rep, Rep>, int> add_eos_memo_;
};

}  // namespace detail

inline LtlFormula uhat_to_ltl(const UhatModel& m, std::size_t state_cap = 50000) {
  UhatStateSpace space = explore_uhat(m, state_cap);
  detail::UhatLtlBuilder builder(m, space);
  return builder.build();
}

}  // namespace uhax
