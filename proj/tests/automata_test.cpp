#include "uhax/automata.hpp"

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "uhax/oracle.hpp"

using namespace uhax;
using uhax::test::W;

namespace {

Dfa contains_a() {
  return parse_dfa(
      "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinals: q1\n"
      "q0 a q1\nq0 b q0\nq1 a q1\nq1 b q1\n");
}

Dfa ends_with_a() {
  return parse_dfa(
      "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinals: q1\n"
      "q0 a q1\nq0 b q0\nq1 a q1\nq1 b q0\n");
}

Dfa parity_of_a() {
  return parse_dfa(
      "alphabet: a b\nstates: q0 q1\ninitial: q0\nfinals: q1\n"
      "q0 a q1\nq0 b q0\nq1 a q0\nq1 b q1\n");
}

// a Sigma* b: starts with a and ends with b.
Dfa a_sigma_b() {
  return parse_dfa(
      "alphabet: a b\nstates: s p f d\ninitial: s\nfinals: f\n"
      "s a p\ns b d\np a p\np b f\nf a p\nf b f\nd a d\nd b d\n");
}

// Exactly the two-letter string "ab".
Dfa only_ab() {
  return parse_dfa(
      "alphabet: a b\nstates: s0 s1 s2 d\ninitial: s0\nfinals: s2\n"
      "s0 a s1\ns0 b d\ns1 a d\ns1 b s2\ns2 a d\ns2 b d\nd a d\nd b d\n");
}

bool languages_equal(const Dfa& x, const Dfa& y, int max_len) {
  return check_equiv(make_recognizer(x), make_recognizer(y), max_len).equal;
}

// Seeded generator for R-expressions with n <= 2 letters per branch over
// up to three symbols; every preceding set leaves room for the next
// letter.
RExpression random_r_expression(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Symbol> alphabet = {"a", "b"};
  if (unit(rng) < 0.5) alphabet.push_back("c");
  std::uniform_int_distribution<int> pick_branches(1, 2);
  std::uniform_int_distribution<int> pick_n(0, 2);
  std::vector<RExpression::Branch> branches;
  int nb = pick_branches(rng);
  for (int bidx = 0; bidx < nb; ++bidx) {
    RExpression::Branch br;
    int n = pick_n(rng);
    for (int t = 0; t < n; ++t) {
      std::vector<Symbol> set;
      std::vector<Symbol> rest;
      for (const Symbol& s : alphabet)
        (unit(rng) < 0.5 ? set : rest).push_back(s);
      if (rest.empty()) {
        rest.push_back(set.back());
        set.pop_back();
      }
      br.sets.push_back(set);
      std::uniform_int_distribution<int> pick_rest(
          0, static_cast<int>(rest.size()) - 1);
      br.words.push_back(rest[pick_rest(rng)]);
    }
    std::vector<Symbol> last;
    for (const Symbol& s : alphabet)
      if (unit(rng) < 0.6) last.push_back(s);
    br.sets.push_back(last);
    branches.push_back(std::move(br));
  }
  return make_r_expression(alphabet, std::move(branches));
}

}  // namespace

TEST(DfaAccepts, HalfResetShape) {
  Dfa d = contains_a();
  EXPECT_TRUE(dfa_accepts(d, W("ba")));
  EXPECT_FALSE(dfa_accepts(d, W("bb")));
  EXPECT_FALSE(dfa_accepts(d, W("")));
  EXPECT_THROW(dfa_accepts(d, W("xz")), std::runtime_error);
}

TEST(DfaFile, RoundTripAndErrors) {
  Dfa d = a_sigma_b();
  EXPECT_EQ(unparse_dfa(parse_dfa(unparse_dfa(d))), unparse_dfa(d));
  EXPECT_THROW(parse_dfa("alphabet: a\nstates: q0\ninitial: q0\nfinals:\n"),
               std::runtime_error);  // missing transition
}

TEST(DfaMinimize, Idempotent) {
  Dfa m = minimize_dfa(contains_a());
  EXPECT_EQ(m.states.size(), 2u);
  EXPECT_EQ(unparse_dfa(minimize_dfa(m)), unparse_dfa(m));
}

TEST(DfaMinimize, CollapsesRedundantState) {
  // Three-state variant of "contains a" with a duplicated accepting state.
  Dfa d = parse_dfa(
      "alphabet: a b\nstates: q0 q1 q2\ninitial: q0\nfinals: q1 q2\n"
      "q0 a q1\nq0 b q0\nq1 a q2\nq1 b q2\nq2 a q1\nq2 b q1\n");
  Dfa m = minimize_dfa(d);
  EXPECT_EQ(m.states.size(), 2u);
  EXPECT_TRUE(languages_equal(d, m, 6));
}

TEST(DfaMinimize, PreservesLanguageOnRandomPopulation) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    DfaGenParams params;
    params.max_states = 5;
    Dfa d = generate_dfa(seed, params);
    Dfa m = minimize_dfa(d);
    EXPECT_LE(m.states.size(), d.states.size());
    ASSERT_TRUE(languages_equal(d, m, 6)) << unparse_dfa(d);
  }
}

TEST(PartialOrder, HalfResetIsOrdered) {
  EXPECT_TRUE(is_pofa(contains_a()).ok);
}

TEST(PartialOrder, TwoCycleIsNot) {
  PofaResult r = is_pofa(ends_with_a());
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.witness_a, "q0");
  EXPECT_EQ(r.witness_b, "q1");
  EXPECT_FALSE(is_pofa(parity_of_a()).ok);
}

TEST(Reverse, EndsWithBecomesStartsWith) {
  Dfa starts_with_a = parse_dfa(
      "alphabet: a b\nstates: s acc dead\ninitial: s\nfinals: acc\n"
      "s a acc\ns b dead\nacc a acc\nacc b acc\ndead a dead\ndead b dead\n");
  EXPECT_TRUE(languages_equal(reverse_dfa(ends_with_a()),
                              minimize_dfa(starts_with_a), 6));
}

TEST(Reverse, ChainReverses) {
  Dfa r = reverse_dfa(only_ab());
  for (const Word& w : enumerate_strings({"a", "b"}, 4))
    EXPECT_EQ(dfa_accepts(r, w), w == W("ba")) << format_word(w);
}

TEST(Reverse, InvolutionOnLanguages) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Dfa d = generate_dfa(seed, {});
    ASSERT_TRUE(languages_equal(reverse_dfa(reverse_dfa(d)), d, 6));
  }
}

TEST(Reverse, ReverseRecognizesReversedWords) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    Dfa d = generate_dfa(seed, {});
    Dfa r = reverse_dfa(d);
    for (const Word& w : enumerate_strings({"a", "b"}, 5))
      ASSERT_EQ(dfa_accepts(d, w), dfa_accepts(r, reverse_word(w)));
  }
}

TEST(ReversePartialOrder, Examples) {
  EXPECT_TRUE(is_rpofa(ends_with_a()));
  EXPECT_TRUE(is_rpofa(contains_a()));
  Dfa asb = minimize_dfa(a_sigma_b());
  EXPECT_FALSE(is_rpofa(asb));
  EXPECT_FALSE(is_pofa(asb).ok);
}

TEST(Monoid, SizesOnKnownLanguages) {
  EXPECT_EQ(transition_monoid(minimize_dfa(contains_a())).size(), 2u);
  EXPECT_EQ(transition_monoid(minimize_dfa(ends_with_a())).size(), 3u);
  Dfa one = parse_dfa("alphabet: a\nstates: q0\ninitial: q0\nfinals:\nq0 a q0\n");
  EXPECT_EQ(transition_monoid(one).size(), 1u);
}

TEST(Monoid, IdentityAndClosureLaws) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Monoid mon = transition_monoid(minimize_dfa(generate_dfa(seed, {})));
    const int sz = static_cast<int>(mon.size());
    for (int i = 0; i < sz; ++i) {
      ASSERT_EQ(mon.table[mon.identity][i], i);
      ASSERT_EQ(mon.table[i][mon.identity], i);
      for (int j = 0; j < sz; ++j) {
        ASSERT_GE(mon.table[i][j], 0);
        ASSERT_LT(mon.table[i][j], sz);
      }
    }
  }
}

TEST(Monoid, CapIsEnforced) {
  EXPECT_THROW(transition_monoid(minimize_dfa(ends_with_a()), 2), CapExceeded);
}

TEST(Monoid, TrivialityExamples) {
  Monoid contains = transition_monoid(minimize_dfa(contains_a()));
  EXPECT_TRUE(is_r_trivial(contains));
  Monoid ends = transition_monoid(minimize_dfa(ends_with_a()));
  EXPECT_FALSE(is_r_trivial(ends));
  EXPECT_TRUE(is_l_trivial(ends));
  EXPECT_TRUE(is_aperiodic(ends));
  Monoid parity = transition_monoid(minimize_dfa(parity_of_a()));
  EXPECT_FALSE(is_aperiodic(parity));
}

TEST(Cascade, SubsequenceAbProduct) {
  CascadeSpec spec = parse_cascade(
      "alphabet: a b\n"
      "levels: 2\n"
      "halfreset 0: sigma1 = a\n"
      "halfreset 1: sigma1 = (q1,b)\n"
      "hom: (q0,q0) -> (q0,q0)\n"
      "hom: (q0,q1) -> (q0,q1)\n"
      "hom: (q1,q0) -> (q1,q0)\n"
      "hom: (q1,q1) -> (q1,q1)\n"
      "finals: (q1,q1)\n");
  CascadeBuild build = build_cascade(spec);
  EXPECT_EQ(build.product.states.size(), 4u);  // both factors total
  EXPECT_TRUE(build.product.total());
  auto has_subseq_ab = [](const Word& w) {
    bool seen_a = false;
    for (const Symbol& s : w) {
      if (s == "a") seen_a = true;
      else if (s == "b" && seen_a) return true;
    }
    return false;
  };
  for (const Word& w : enumerate_strings({"a", "b"}, 6))
    ASSERT_EQ(dfa_accepts(build.target, w), has_subseq_ab(w)) << format_word(w);
}

TEST(Cascade, NonUniformPartialityRejected) {
  Semiautomaton b1 = half_reset_automaton(make_half_reset({"a", "b"}, {"a"}));
  Semiautomaton b2;
  b2.alphabet = cascade_pair_alphabet(b1);
  b2.states = {"q0"};
  b2.delta = {{0, -1, 0, 0}};  // defined for some symbols of a pair only
  EXPECT_THROW(cascade(b1, b2), std::runtime_error);
}

TEST(Cascade, TwoHalfResetsAlwaysPartiallyOrdered) {
  const std::vector<std::vector<Symbol>> level0 = {{"a"}, {"b"}};
  for (const auto& sigma1 : level0) {
    Semiautomaton first = half_reset_automaton(make_half_reset({"a", "b"}, sigma1));
    std::vector<Symbol> pairs = cascade_pair_alphabet(first);
    // Every non-empty proper subset of the four pair tokens.
    for (unsigned mask = 1; mask + 1 < (1u << pairs.size()); ++mask) {
      std::vector<Symbol> sigma1_next;
      for (std::size_t i = 0; i < pairs.size(); ++i)
        if (mask & (1u << i)) sigma1_next.push_back(pairs[i]);
      Semiautomaton second =
          half_reset_automaton(make_half_reset(pairs, sigma1_next));
      Semiautomaton prod = cascade(first, second);
      Dfa d;
      d.alphabet = prod.alphabet;
      d.states = prod.states;
      d.delta = prod.delta;
      d.initial = prod.initial;
      d.finals.assign(prod.states.size(), 0);
      ASSERT_TRUE(is_pofa(d).ok);
    }
  }
}

TEST(Homomorphism, IdentityAlwaysHolds) {
  Semiautomaton a = half_reset_automaton(make_half_reset({"a", "b"}, {"a"}));
  std::map<std::string, std::string> id{{"q0", "q0"}, {"q1", "q1"}};
  EXPECT_TRUE(check_homomorphism(a, a, id).ok);
}

TEST(Homomorphism, CollapseOfCascade) {
  CascadeSpec spec = parse_cascade(
      "alphabet: a b\n"
      "levels: 2\n"
      "halfreset 0: sigma1 = a\n"
      "halfreset 1: sigma1 = (q1,b)\n"
      "hom: (q0,q0) -> s0\n"
      "hom: (q1,q0) -> s1\n"
      "hom: (q0,q1) -> s2\n"
      "hom: (q1,q1) -> s2\n"
      "finals: s2\n");
  CascadeBuild build = build_cascade(spec);
  EXPECT_EQ(build.target.states.size(), 3u);
  HomCheck hc = check_homomorphism(build.product,
                                   dfa_semiautomaton(build.target), spec.hom);
  EXPECT_TRUE(hc.ok) << hc.detail;
}

TEST(Homomorphism, ViolationReported) {
  Semiautomaton a = half_reset_automaton(make_half_reset({"a", "b"}, {"a"}));
  Semiautomaton bad;
  bad.alphabet = a.alphabet;
  bad.states = {"s0", "s1"};
  bad.delta = {{0, 0}, {1, 1}};  // s0 never reaches s1
  std::map<std::string, std::string> phi{{"q0", "s0"}, {"q1", "s1"}};
  HomCheck hc = check_homomorphism(a, bad, phi);
  EXPECT_FALSE(hc.ok);
  EXPECT_NE(hc.detail.find("q0"), std::string::npos);
}

TEST(Homomorphism, CollapseToSelfLoopState) {
  Semiautomaton a = half_reset_automaton(make_half_reset({"a", "b"}, {"a"}));
  Semiautomaton one;
  one.alphabet = a.alphabet;
  one.states = {"s"};
  one.delta = {{0, 0}};
  std::map<std::string, std::string> phi{{"q0", "s"}, {"q1", "s"}};
  EXPECT_TRUE(check_homomorphism(a, one, phi).ok);
}

TEST(RExpr, GreedyMatching) {
  RExpression e = make_r_expression(
      {"a", "b"}, {RExpression::Branch{{{"a"}, {"a", "b"}}, {"b"}}});
  EXPECT_TRUE(match_r_expression(e, W("aab")));
  EXPECT_FALSE(match_r_expression(e, W("aaa")));
  RExpression all = make_r_expression({"a", "b"},
                                      {RExpression::Branch{{{"a", "b"}}, {}}});
  EXPECT_TRUE(match_r_expression(all, W("")));
}

TEST(RExpr, ConstraintEnforced) {
  EXPECT_THROW(make_r_expression(
                   {"a", "b"}, {RExpression::Branch{{{"a"}, {"a", "b"}}, {"a"}}}),
               std::runtime_error);
}

TEST(RExpr, CompiledDfaAgreesWithMatcher) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RExpression e = random_r_expression(seed);
    Dfa d = r_expression_to_dfa(e);
    int max_len = e.alphabet.size() >= 3 ? 4 : 6;
    for (const Word& w : enumerate_strings(e.alphabet, max_len))
      ASSERT_EQ(dfa_accepts(d, w), match_r_expression(e, w)) << format_word(w);
  }
}

TEST(RExpr, LanguagesArePastFragment) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RExpression e = random_r_expression(seed);
    Classification c = classify_language(r_expression_to_dfa(e));
    ASSERT_TRUE(c.in_ltlP);
  }
}

TEST(Classify, Goldens) {
  Classification c1 = classify_language(contains_a());
  EXPECT_TRUE(c1.in_ltlP);
  EXPECT_TRUE(c1.in_ltlF);
  EXPECT_TRUE(c1.star_free);

  Classification c2 = classify_language(ends_with_a());
  EXPECT_FALSE(c2.in_ltlP);
  EXPECT_TRUE(c2.in_ltlF);
  EXPECT_TRUE(c2.star_free);

  Classification c3 = classify_language(a_sigma_b());
  EXPECT_FALSE(c3.in_ltlP);
  EXPECT_FALSE(c3.in_ltlF);
  EXPECT_TRUE(c3.star_free);

  Classification c4 = classify_language(parity_of_a());
  EXPECT_FALSE(c4.in_ltlP);
  EXPECT_FALSE(c4.in_ltlF);
  EXPECT_FALSE(c4.star_free);
}

TEST(Classify, CrossChecksOnRandomPopulation) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Dfa d = generate_dfa(seed, {});
    Dfa m = minimize_dfa(d);
    Monoid mon = transition_monoid(m);
    ASSERT_EQ(is_pofa(m).ok, is_r_trivial(mon)) << unparse_dfa(m);
    ASSERT_EQ(is_rpofa(m), is_l_trivial(mon)) << unparse_dfa(m);
    if (is_pofa(m).ok) {
      ASSERT_TRUE(is_aperiodic(mon));
    }
    EXPECT_NO_THROW(classify_language(d));
  }
}

TEST(Dot, DeterministicOutput) {
  std::string dot = to_dot(contains_a());
  EXPECT_NE(dot.find("doublecircle"), std::string::npos);
  EXPECT_EQ(dot, to_dot(contains_a()));
}
