#include "uhax/brasp.hpp"

#include <gtest/gtest.h>

#include "helpers.hpp"
#include "uhax/oracle.hpp"

using namespace uhax;
using uhax::test::W;

namespace {

const char* kLeftmostABefore =
    "alphabet: a b\n"
    "V2(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\n"
    "output: V2\n";

const char* kPrevValue =
    "alphabet: a b\n"
    "V2(t) = rmost[t' < t, 1] Q_a(t') : 0\n"
    "output: V2\n";

std::vector<char> output_row(const BraspProgram& p, const Word& w) {
  return run_brasp(p, w)[p.output];
}

}  // namespace

TEST(BraspParse, AttentionOp) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  ASSERT_EQ(p.vectors.size(), 3u);  // Q_a, Q_b, V2
  const VectorDef& v = p.vectors[2];
  EXPECT_EQ(v.kind, VectorDef::Kind::Attention);
  EXPECT_EQ(v.attn.tiebreak, Tiebreak::Left);
  EXPECT_EQ(v.attn.mask, MaskDir::Future);
  EXPECT_EQ(v.attn.score->kind, BExpr::Kind::Ref);
  EXPECT_EQ(v.attn.score->at, PosRef::Other);
  EXPECT_EQ(v.attn.deflt->kind, BExpr::Kind::Const);
  EXPECT_FALSE(v.attn.deflt->value);
  EXPECT_EQ(p.output, 2);
}

TEST(BraspParse, PositionWiseOp) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\n"
      "V3(t) = V2(t) & !Q_b(t)\n"
      "output: V3\n");
  EXPECT_EQ(p.vectors[3].kind, VectorDef::Kind::PositionWise);
}

TEST(BraspParse, ForwardReferenceRejected) {
  EXPECT_THROW(parse_brasp("alphabet: a\n"
                           "V1(t) = V2(t)\n"
                           "V2(t) = Q_a(t)\n"
                           "output: V2\n"),
               ParseError);
}

TEST(BraspParse, UnknownVectorAndMissingOutput) {
  EXPECT_THROW(parse_brasp("alphabet: a\nV1(t) = Qz(t)\noutput: V1\n"),
               ParseError);
  EXPECT_THROW(parse_brasp("alphabet: a\nV1(t) = Q_a(t)\n"), ParseError);
}

TEST(BraspParse, DefaultMayNotReadOther) {
  EXPECT_THROW(parse_brasp("alphabet: a\n"
                           "V1(t) = lmost[t' < t, Q_a(t')] Q_a(t') : Q_a(t')\n"
                           "output: V1\n"),
               ParseError);
}

TEST(BraspParse, DeepNestingRejected) {
  std::string bangs = "alphabet: a\nV1(t) = " + std::string(100000, '!') +
                      "Q_a(t)\noutput: V1\n";
  EXPECT_THROW(parse_brasp(bangs), ParseError);
}

TEST(BraspParse, RoundTrip) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = rmost[t' > t, Q_a(t') | Q_b(t)] !Q_b(t') : 1\n"
      "V3(t) = (V2(t) | Q_a(t)) & !Q_b(t)\n"
      "output: V3\n");
  EXPECT_EQ(unparse_brasp(parse_brasp(unparse_brasp(p))), unparse_brasp(p));
}

TEST(BraspRestriction, Reports) {
  BraspProgram fl = parse_brasp(kLeftmostABefore);
  EXPECT_TRUE(validate_restriction(fl, Restriction::FL).empty());
  EXPECT_TRUE(validate_restriction(fl, Restriction::Any).empty());
  BraspProgram fr = parse_brasp(kPrevValue);
  auto violations = validate_restriction(fr, Restriction::FL);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].vector_name, "V2");
  EXPECT_TRUE(validate_restriction(fr, Restriction::FR).empty());
}

TEST(BraspRun, RightmostConstantScoreReadsPreviousValue) {
  BraspProgram p = parse_brasp(kPrevValue);
  EXPECT_EQ(output_row(p, W("ab")), (std::vector<char>{0, 1}));
  EXPECT_EQ(output_row(p, W("ba")), (std::vector<char>{0, 0}));
}

TEST(BraspRun, LeftmostABeforeT) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  EXPECT_EQ(output_row(p, W("aba")), (std::vector<char>{0, 1, 1}));
}

TEST(BraspRun, SymbolOutsideAlphabetRejected) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  EXPECT_THROW(run_brasp(p, W("ac")), std::runtime_error);
}

TEST(BraspAccepts, OutputAtLastPosition) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  EXPECT_TRUE(brasp_accepts(p, W("aa")));
  EXPECT_FALSE(brasp_accepts(p, W("a")));
  EXPECT_FALSE(brasp_accepts(p, W("")));
}

TEST(BraspRewrite, ConstantScoreSelectsPositionOne) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = lmost[t' < t, 1] Q_a(t') : 0\n"
      "output: V2\n");
  BraspProgram q = rewrite_leftmost_to_rightmost(p);
  for (const auto& v : q.vectors) {
    if (v.kind == VectorDef::Kind::Attention) {
      EXPECT_EQ(v.attn.tiebreak, Tiebreak::Right);
    }
  }
  for (const Word& w : enumerate_strings({"a", "b"}, 5))
    EXPECT_EQ(output_row(p, w), output_row(q, w)) << format_word(w);
}

TEST(BraspRewrite, EmptyMaximizersKeepDefaults) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = lmost[t' < t, 0] Q_a(t') : Q_b(t)\n"
      "output: V2\n");
  BraspProgram q = rewrite_leftmost_to_rightmost(p);
  for (const Word& w : enumerate_strings({"a", "b"}, 5)) {
    EXPECT_EQ(output_row(p, w), output_row(q, w));
    if (!w.empty()) {
      // Both run on defaults everywhere.
      std::vector<char> want;
      for (const Symbol& s : w) want.push_back(s == "b");
      EXPECT_EQ(output_row(p, w), want);
    }
  }
}

TEST(BraspRewrite, SeededProgramsKeepTraces) {
  for (std::uint64_t seed = 40; seed <= 60; ++seed) {
    BraspGenParams params;
    params.vectors = 4;
    params.restriction = Restriction::FL;
    BraspProgram p = generate_brasp(seed, params);
    BraspProgram q = rewrite_leftmost_to_rightmost(p);
    EXPECT_TRUE(validate_restriction(q, Restriction::FR).empty());
    for (const Word& w : enumerate_strings({"a", "b"}, 5))
      ASSERT_EQ(output_row(p, w), output_row(q, w))
          << unparse_brasp(p) << "on " << format_word(w);
  }
}

TEST(BraspRewrite, BinaryScoreRejected) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = lmost[t' < t, Q_a(t') & Q_b(t)] Q_a(t') : 0\n"
      "output: V2\n");
  EXPECT_THROW(rewrite_leftmost_to_rightmost(p), std::runtime_error);
}

TEST(BraspRewrite, PastMaskedLeftmostRejected) {
  BraspProgram p = parse_brasp(
      "alphabet: a b\n"
      "V2(t) = lmost[t' > t, Q_a(t')] Q_a(t') : 0\n"
      "output: V2\n");
  EXPECT_THROW(rewrite_leftmost_to_rightmost(p), std::runtime_error);
}

TEST(BraspMirror, SyntacticSwap) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  BraspProgram m = mirror_brasp(p);
  EXPECT_EQ(m.vectors[2].attn.tiebreak, Tiebreak::Right);
  EXPECT_EQ(m.vectors[2].attn.mask, MaskDir::Past);
  EXPECT_EQ(unparse_brasp(mirror_brasp(m)), unparse_brasp(p));
}

TEST(BraspMirror, ReversalLawForABefore) {
  BraspProgram p = parse_brasp(kLeftmostABefore);
  BraspProgram m = mirror_brasp(p);
  for (const Word& w : enumerate_strings({"a", "b"}, 5))
    EXPECT_EQ(brasp_accepts(p, w, AcceptAt::End),
              brasp_accepts(m, reverse_word(w), AcceptAt::Start))
        << format_word(w);
}

TEST(BraspMirror, ReversalLawAllVariants) {
  for (Restriction r : {Restriction::FL, Restriction::FR, Restriction::PL,
                        Restriction::PR}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      BraspGenParams params;
      params.restriction = r;
      BraspProgram p = generate_brasp(seed, params);
      BraspProgram m = mirror_brasp(p);
      for (const Word& w : enumerate_strings({"a", "b"}, 5))
        ASSERT_EQ(brasp_accepts(p, w, AcceptAt::End),
                  brasp_accepts(m, reverse_word(w), AcceptAt::Start))
            << restriction_name(r) << " seed " << seed << " on "
            << format_word(w);
    }
  }
}

TEST(BraspInvariant, EmptyMaximizerUsesDefault) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    BraspGenParams params;
    params.restriction = Restriction::Any;
    BraspProgram p = generate_brasp(seed, params);
    for (const Word& w : enumerate_strings({"a", "b"}, 4)) {
      std::vector<AttnObservation> obs;
      RunTrace trace = run_brasp(p, w, &obs);
      for (const AttnObservation& o : obs) {
        if (o.chosen >= 0) continue;
        const AttnOp& op = p.vectors[o.vec].attn;
        bool deflt = detail::eval_bexpr(*op.deflt, trace, o.pos, o.pos);
        ASSERT_EQ(trace[o.vec][o.pos - 1] != 0, deflt);
      }
    }
  }
}

TEST(BraspInvariant, PrefixLocalityUnderFutureMasking) {
  for (Restriction r : {Restriction::FL, Restriction::FR}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      BraspGenParams params;
      params.restriction = r;
      BraspProgram p = generate_brasp(seed, params);
      for (const Word& w : enumerate_strings({"a", "b"}, 4)) {
        RunTrace base = run_brasp(p, w);
        for (const Symbol& s : p.alphabet) {
          Word ext = w;
          ext.push_back(s);
          RunTrace longer = run_brasp(p, ext);
          for (std::size_t v = 0; v < base.size(); ++v)
            for (std::size_t t = 0; t < w.size(); ++t)
              ASSERT_EQ(base[v][t], longer[v][t]);
        }
      }
    }
  }
}

TEST(BraspInvariant, RunIsDeterministic) {
  BraspProgram p = generate_brasp(7, {});
  for (const Word& w : enumerate_strings({"a", "b"}, 4))
    EXPECT_EQ(run_brasp(p, w), run_brasp(p, w));
}
