#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

const std::string kCli = UHAX_CLI_PATH;
const std::string kSamples = UHAX_SAMPLES_DIR;

struct CmdResult {
  int status = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  CmdResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string sample(const std::string& name) { return kSamples + "/" + name; }

}  // namespace

TEST(Cli, EvalLtlLanguageMode) {
  CmdResult r = run_cmd("eval-ltl -f " + sample("pa.ltl") + " -w \"\" --lang");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "false\n");
  EXPECT_EQ(run_cmd("eval-ltl -f " + sample("pa.ltl") + " -w ba --lang").out,
            "true\n");
  EXPECT_EQ(run_cmd("eval-ltl -f " + sample("pa.ltl") + " -w ab --pos 1").out,
            "false\n");
}

TEST(Cli, EvalLtlStartConvention) {
  // Mirrored formula read at the virtual start position recognizes the
  // reverse language.
  std::string mirrored = "/tmp/uhax_cli_fa.ltl";
  EXPECT_EQ(run_cmd("translate mirror-ltl -i " + sample("pa.ltl") + " -o " +
                    mirrored)
                .status,
            0);
  EXPECT_EQ(slurp(mirrored), "alphabet: a b\nF a\n");
  EXPECT_EQ(run_cmd("eval-ltl -f " + mirrored +
                    " -w ab --lang --convention start")
                .out,
            "true\n");
}

TEST(Cli, RunBraspTrace) {
  CmdResult r =
      run_cmd("run-brasp -p " + sample("pa.brasp") + " -w aba --trace");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "Q_a: 1 0 1\n"
            "Q_b: 0 1 0\n"
            "V2: 0 1 1\n"
            "true\n");
}

TEST(Cli, RunUhatTrace) {
  CmdResult r =
      run_cmd("run-uhat -m " + sample("leftmost_a.uhat") + " -w ba --trace");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "layer 0: (b) (a) (EOS)\n"
            "layer 1: (b,_) (a,b) (EOS,a)\n"
            "attends 1: - 1 2\n"
            "true\n");
}

TEST(Cli, ClassifyGoldens) {
  EXPECT_EQ(run_cmd("classify -a " + sample("contains_a.dfa")).out,
            "{\"in_ltlP\": true, \"in_ltlF\": true, \"star_free\": true, "
            "\"monoid_size\": 2}\n");
  EXPECT_EQ(run_cmd("classify -a " + sample("endswith_a.dfa")).out,
            "{\"in_ltlP\": false, \"in_ltlF\": true, \"star_free\": true, "
            "\"monoid_size\": 3}\n");
  // Monoid of "starts with a and ends with b": id, a, b, ab, ba (bb = b).
  EXPECT_EQ(run_cmd("classify -a " + sample("a_sigma_b.dfa")).out,
            "{\"in_ltlP\": false, \"in_ltlF\": false, \"star_free\": true, "
            "\"monoid_size\": 5}\n");
  EXPECT_EQ(run_cmd("classify -a " + sample("parity.dfa")).out,
            "{\"in_ltlP\": false, \"in_ltlF\": false, \"star_free\": false, "
            "\"monoid_size\": 2}\n");
}

TEST(Cli, EquivEqualAndCounterexample) {
  CmdResult eq = run_cmd("equiv -a ltl:" + sample("pa.ltl") + " -b brasp:" +
                         sample("pa.brasp") + " --max-len 5 --positionwise");
  EXPECT_EQ(eq.status, 0);
  EXPECT_EQ(eq.out, "EQUAL up to 5\n");

  std::string mirrored = "/tmp/uhax_cli_fa2.ltl";
  run_cmd("translate mirror-ltl -i " + sample("pa.ltl") + " -o " + mirrored);
  CmdResult cx =
      run_cmd("equiv -a ltl:" + sample("pa.ltl") + " -b ltl:" + mirrored +
              " --max-len 6");
  EXPECT_EQ(cx.status, 0);  // a found counterexample is a successful run
  EXPECT_EQ(cx.out, "COUNTEREXAMPLE \"a\" a=true b=false\n");

  CmdResult js =
      run_cmd("equiv -a ltl:" + sample("pa.ltl") + " -b ltl:" + mirrored +
              " --max-len 6 --json");
  EXPECT_EQ(js.out,
            "{\"schema\":1,\"equal\":false,\"counterexample\":\"a\","
            "\"a\":true,\"b\":false}\n");
}

TEST(Cli, EquivJobsAgree) {
  CmdResult one = run_cmd("equiv -a dfa:" + sample("contains_a.dfa") +
                          " -b uhat:" + sample("leftmost_a.uhat") +
                          " --max-len 6");
  CmdResult four = run_cmd("equiv -a dfa:" + sample("contains_a.dfa") +
                           " -b uhat:" + sample("leftmost_a.uhat") +
                           " --max-len 6 --jobs 4");
  EXPECT_EQ(one.out, "EQUAL up to 6\n");
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, TranslateRoundTripFiles) {
  std::string prog = "/tmp/uhax_cli_pa.brasp";
  EXPECT_EQ(run_cmd("translate ltl-to-brasp -i " + sample("pa.ltl") + " -o " +
                    prog)
                .status,
            0);
  EXPECT_EQ(slurp(prog),
            "alphabet: a b\n"
            "V2(t) = lmost[t' < t, Q_a(t')] Q_a(t') : 0\n"
            "output: V2\n");
  std::string back = "/tmp/uhax_cli_pa_back.ltl";
  EXPECT_EQ(
      run_cmd("translate brasp-to-ltl -i " + prog + " -o " + back).status, 0);
  EXPECT_EQ(slurp(back), "alphabet: a b\nP (a & !P a & a) | !P a & (a & !a)\n");
}

TEST(Cli, TranslateCascadeAndModel) {
  std::string prog = "/tmp/uhax_cli_casc.brasp";
  EXPECT_EQ(run_cmd("translate cascade-to-brasp -i " +
                    sample("contains_a.cascade") + " -o " + prog)
                .status,
            0);
  EXPECT_EQ(run_cmd("equiv -a brasp:" + prog + " -b dfa:" +
                    sample("contains_a.dfa") + " --max-len 6")
                .out,
            "EQUAL up to 6\n");

  std::string pofa = "/tmp/uhax_cli_lma.dfa";
  EXPECT_EQ(run_cmd("translate uhat-to-pofa -i " + sample("leftmost_a.uhat") +
                    " -o " + pofa)
                .status,
            0);
  EXPECT_EQ(run_cmd("equiv -a dfa:" + pofa + " -b dfa:" +
                    sample("contains_a.dfa") + " --max-len 6")
                .out,
            "EQUAL up to 6\n");

  std::string formula = "/tmp/uhax_cli_lma.ltl";
  EXPECT_EQ(run_cmd("translate uhat-to-ltl -i " + sample("leftmost_a.uhat") +
                    " -o " + formula)
                .status,
            0);
  EXPECT_EQ(run_cmd("equiv -a ltl:" + formula + " -b uhat:" +
                    sample("leftmost_a.uhat") + " --max-len 5")
                .out,
            "EQUAL up to 5\n");
}

TEST(Cli, TranslateLeftToRight) {
  std::string out = "/tmp/uhax_cli_l2r.brasp";
  EXPECT_EQ(run_cmd("translate left-to-right -i " + sample("pa.brasp") +
                    " -o " + out)
                .status,
            0);
  EXPECT_EQ(slurp(out),
            "alphabet: a b\n"
            "V2_pre(t) = rmost[t' < t, Q_a(t')] Q_a(t') : 0\n"
            "V2(t) = rmost[t' < t, Q_a(t') & !V2_pre(t')] Q_a(t') : 0\n"
            "output: V2\n");
  EXPECT_EQ(run_cmd("equiv -a brasp:" + out + " -b brasp:" +
                    sample("pa.brasp") + " --max-len 5 --positionwise")
                .out,
            "EQUAL up to 5\n");
}

TEST(Cli, DotEmission) {
  std::string out = "/tmp/uhax_cli.dot";
  EXPECT_EQ(
      run_cmd("dot -a " + sample("contains_a.dfa") + " -o " + out).status, 0);
  std::string dot = slurp(out);
  EXPECT_NE(dot.find("digraph"), std::string::npos);
  EXPECT_NE(dot.find("\"q1\" [shape=doublecircle];"), std::string::npos);
  EXPECT_NE(dot.find("\"q0\" -> \"q1\" [label=\"a\"];"), std::string::npos);
}

TEST(Cli, GenIsDeterministic) {
  std::string f1 = "/tmp/uhax_cli_gen1.brasp", f2 = "/tmp/uhax_cli_gen2.brasp";
  EXPECT_EQ(run_cmd("gen brasp --seed 7 --restriction FR -o " + f1).status, 0);
  EXPECT_EQ(run_cmd("gen brasp --seed 7 --restriction FR -o " + f2).status, 0);
  std::string text = slurp(f1);
  EXPECT_EQ(text, slurp(f2));
  EXPECT_FALSE(text.empty());
}

TEST(Cli, JsonVariantsCarrySchema) {
  const std::string invocations[] = {
      "eval-ltl -f " + sample("pa.ltl") + " -w a --lang --json",
      "run-brasp -p " + sample("pa.brasp") + " -w a --json",
      "run-uhat -m " + sample("leftmost_a.uhat") + " -w a --json",
      "classify -a " + sample("parity.dfa") + " --json",
      "equiv -a ltl:" + sample("pa.ltl") + " -b ltl:" + sample("pa.ltl") +
          " --max-len 3 --json",
      "dot -a " + sample("contains_a.dfa") + " -o /tmp/uhax_cli2.dot --json",
      std::string("gen dfa --seed 1 -o /tmp/uhax_cli_gen.dfa --json"),
      "translate mirror-brasp -i " + sample("pa.brasp") +
          " -o /tmp/uhax_cli_m.brasp --json"};
  for (const std::string& args : invocations) {
    CmdResult r = run_cmd(args);
    EXPECT_EQ(r.status, 0) << args;
    EXPECT_EQ(r.out.rfind("{\"schema\":1,", 0), 0u) << args << "\n" << r.out;
  }
}

TEST(Cli, StartConventionRecognizers) {
  // Mirrored program and mirrored formula agree position by position and
  // both recognize the reverse language when read at the start.
  std::string mp = "/tmp/uhax_cli_mp.brasp", mf = "/tmp/uhax_cli_mf.ltl";
  run_cmd("translate mirror-brasp -i " + sample("pa.brasp") + " -o " + mp);
  run_cmd("translate brasp-to-ltl -i " + mp + " -o " + mf);
  EXPECT_EQ(run_cmd("equiv -a brasp@start:" + mp + " -b ltl@start:" + mf +
                    " --max-len 5 --positionwise")
                .out,
            "EQUAL up to 5\n");
}

TEST(Cli, DefaultMaxLenFollowsAlphabetSize) {
  std::string abc = "/tmp/uhax_cli_abc.ltl";
  run_cmd("gen formula --seed 2 --alphabet \"a b c\" -o " + abc);
  EXPECT_EQ(run_cmd("equiv -a ltl:" + abc + " -b ltl:" + abc).out,
            "EQUAL up to 4\n");
  EXPECT_EQ(run_cmd("equiv -a ltl:" + sample("pa.ltl") + " -b ltl:" +
                    sample("pa.ltl"))
                .out,
            "EQUAL up to 6\n");
}

TEST(Cli, CapsEnvOverride) {
  std::string cmd = "UHAX_CAPS=monoid=2," + std::string("states=50000 ") +
                    kCli + " classify -a " + sample("endswith_a.dfa") +
                    " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  char buf[256];
  while (fread(buf, 1, sizeof buf, pipe) > 0) {}
  int rc = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(rc), 1);  // three monoid elements exceed the cap
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cmd("classify -a /nonexistent.dfa").status, 1);
  EXPECT_EQ(run_cmd("classify").status, 2);       // missing required option
  EXPECT_EQ(run_cmd("no-such-command").status, 2);
  EXPECT_EQ(run_cmd("--help").status, 0);
}

TEST(Cli, ByteIdenticalReruns) {
  const std::string invocations[] = {
      "classify -a " + sample("a_sigma_b.dfa"),
      "run-brasp -p " + sample("prev_value.brasp") + " -w abab --trace",
      "run-uhat -m " + sample("leftmost_a.uhat") + " -w abba --trace --json",
      "equiv -a ltl:" + sample("pa.ltl") + " -b dfa:" +
          sample("contains_a.dfa") + " --max-len 6",
  };
  for (const std::string& args : invocations) {
    CmdResult first = run_cmd(args);
    CmdResult second = run_cmd(args);
    EXPECT_EQ(first.status, second.status) << args;
    EXPECT_EQ(first.out, second.out) << args;
  }
}
