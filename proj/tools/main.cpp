// Batch frontend: evaluate formulas, run programs and models, translate
// between the formalisms, classify automata, check recognizer
// equivalence, emit DOT.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uhax/automata.hpp"
#include "uhax/brasp.hpp"
#include "uhax/ltl.hpp"
#include "uhax/oracle.hpp"
#include "uhax/translate.hpp"
#include "uhax/uhat.hpp"

using json = nlohmann::ordered_json;
using namespace uhax;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

Caps caps_from_env() {
  const char* env = std::getenv("UHAX_CAPS");
  if (!env) return Caps{};
  return parse_caps(env);
}

// SPEC = kind[@end|@start]:path with kind in ltl|brasp|dfa|uhat.
Recognizer load_recognizer(const std::string& spec) {
  std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::runtime_error("recognizer spec must be kind:path, got '" +
                             spec + "'");
  std::string kind = spec.substr(0, colon);
  std::string path = spec.substr(colon + 1);
  AcceptAt at = AcceptAt::End;
  std::size_t amp = kind.find('@');
  if (amp != std::string::npos) {
    std::string conv = kind.substr(amp + 1);
    kind = kind.substr(0, amp);
    if (conv == "start") at = AcceptAt::Start;
    else if (conv != "end")
      throw std::runtime_error("unknown convention '" + conv + "'");
  }
  std::string text = read_file(path);
  if (kind == "ltl") return make_recognizer(parse_ltl(text), at);
  if (kind == "brasp") return make_recognizer(parse_brasp(text), at);
  if (kind == "dfa") return make_recognizer(parse_dfa(text));
  if (kind == "uhat") return make_recognizer(parse_uhat(text));
  throw std::runtime_error("unknown recognizer kind '" + kind + "'");
}

const char* bool_name(bool b) { return b ? "true" : "false"; }

std::string trace_row(const std::vector<char>& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += row[i] ? '1' : '0';
  }
  return out;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"toolkit for formulas, attention programs, automata and "
               "hard-attention transformer models over finite strings"};
  app.require_subcommand(1);
  Caps caps = caps_from_env();

  // eval-ltl
  auto* eval_cmd = app.add_subcommand("eval-ltl", "evaluate a formula on a string");
  std::string eval_file, eval_word, eval_convention = "end";
  int eval_pos = -1;
  bool eval_lang = false, eval_json = false;
  eval_cmd->add_option("-f,--formula", eval_file, "formula file")->required();
  eval_cmd->add_option("-w,--word", eval_word, "input string")->required();
  auto* pos_opt = eval_cmd->add_option("--pos", eval_pos, "position in 1..T+1");
  auto* lang_opt = eval_cmd->add_flag("--lang", eval_lang,
                                      "evaluate at the acceptance position");
  pos_opt->excludes(lang_opt);
  eval_cmd->add_option("--convention", eval_convention,
                       "acceptance position: end (T+1) or start (0)");
  eval_cmd->add_flag("--json", eval_json, "machine-readable output");
  eval_cmd->callback([&]() {
    LtlFormula f = parse_ltl(read_file(eval_file));
    Word w = parse_word(eval_word);
    bool result;
    if (eval_pos >= 0 && !eval_lang) {
      result = eval_ltl(f, w, eval_pos);
    } else {
      AcceptAt at;
      if (eval_convention == "end") at = AcceptAt::End;
      else if (eval_convention == "start") at = AcceptAt::Start;
      else throw std::runtime_error("convention must be end or start");
      result = ltl_accepts(f, w, at);
    }
    if (eval_json)
      std::cout << json{{"schema", 1}, {"result", result}}.dump() << "\n";
    else
      std::cout << bool_name(result) << "\n";
  });

  // run-brasp
  auto* brasp_cmd = app.add_subcommand("run-brasp", "run a program on a string");
  std::string brasp_file, brasp_word;
  bool brasp_trace = false, brasp_json = false;
  brasp_cmd->add_option("-p,--program", brasp_file, "program file")->required();
  brasp_cmd->add_option("-w,--word", brasp_word, "input string")->required();
  brasp_cmd->add_flag("--trace", brasp_trace, "print every vector");
  brasp_cmd->add_flag("--json", brasp_json, "machine-readable output");
  brasp_cmd->callback([&]() {
    BraspProgram p = parse_brasp(read_file(brasp_file));
    Word w = parse_word(brasp_word);
    RunTrace trace = run_brasp(p, w);
    bool accept = brasp_accepts(p, w);
    if (brasp_json) {
      json out{{"schema", 1}, {"accept", accept}};
      if (brasp_trace) {
        json rows = json::object();
        for (std::size_t v = 0; v < p.vectors.size(); ++v) {
          json row = json::array();
          for (char c : trace[v]) row.push_back(c != 0);
          rows[p.vectors[v].name] = row;
        }
        out["trace"] = rows;
      }
      std::cout << out.dump() << "\n";
      return;
    }
    if (brasp_trace)
      for (std::size_t v = 0; v < p.vectors.size(); ++v) {
        std::cout << p.vectors[v].name << ":";
        if (!w.empty()) std::cout << " " << trace_row(trace[v]);
        std::cout << "\n";
      }
    std::cout << bool_name(accept) << "\n";
  });

  // run-uhat
  auto* uhat_cmd = app.add_subcommand("run-uhat", "run a model on a string");
  std::string uhat_file, uhat_word;
  bool uhat_trace = false, uhat_json = false;
  uhat_cmd->add_option("-m,--model", uhat_file, "model file")->required();
  uhat_cmd->add_option("-w,--word", uhat_word, "input string")->required();
  uhat_cmd->add_flag("--trace", uhat_trace, "print per-layer representations");
  uhat_cmd->add_flag("--json", uhat_json, "machine-readable output");
  uhat_cmd->callback([&]() {
    UhatModel m = parse_uhat(read_file(uhat_file));
    Word w = parse_word(uhat_word);
    UhatTrace trace = run_uhat(m, w);
    bool accept = uhat_accepts(m, w);
    auto attend_str = [&](int layer) {
      std::string out;
      for (std::size_t pos = 0; pos < trace.attended[layer].size(); ++pos) {
        if (pos) out += ' ';
        int t = trace.attended[layer][pos];
        out += t < 0 ? std::string("-") : std::to_string(t + 1);
      }
      return out;
    };
    if (uhat_json) {
      json out{{"schema", 1}, {"accept", accept}};
      if (uhat_trace) {
        json layers = json::array();
        for (int l = 0; l <= m.num_layers(); ++l) {
          json layer{{"layer", l}};
          json reps = json::array();
          for (const Rep& r : trace.reps[l]) reps.push_back(format_rep(m, r));
          layer["reps"] = reps;
          if (l > 0) layer["attends"] = attend_str(l - 1);
          layers.push_back(layer);
        }
        out["trace"] = layers;
      }
      std::cout << out.dump() << "\n";
      return;
    }
    if (uhat_trace) {
      for (int l = 0; l <= m.num_layers(); ++l) {
        std::cout << "layer " << l << ":";
        for (const Rep& r : trace.reps[l]) std::cout << " " << format_rep(m, r);
        std::cout << "\n";
        if (l > 0) std::cout << "attends " << l << ": " << attend_str(l - 1) << "\n";
      }
    }
    std::cout << bool_name(accept) << "\n";
  });

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "translate between formalisms");
  std::string tr_kind, tr_in, tr_out;
  bool tr_simplify = false, tr_json = false;
  tr_cmd->add_option("kind", tr_kind,
                     "ltl-to-brasp | brasp-to-ltl | cascade-to-brasp | "
                     "uhat-to-ltl | uhat-to-pofa | mirror-ltl | mirror-brasp "
                     "| left-to-right")
      ->required();
  tr_cmd->add_option("-i,--input", tr_in, "input file")->required();
  tr_cmd->add_option("-o,--output", tr_out, "output file")->required();
  tr_cmd->add_flag("--simplify", tr_simplify,
                   "fold constants in emitted formulas");
  tr_cmd->add_flag("--json", tr_json, "machine-readable output");
  tr_cmd->callback([&]() {
    std::string text = read_file(tr_in);
    std::string out;
    if (tr_kind == "ltl-to-brasp") {
      out = unparse_brasp(ltl_to_brasp(parse_ltl(text)));
    } else if (tr_kind == "brasp-to-ltl") {
      out = unparse_ltl(brasp_to_ltl(parse_brasp(text), tr_simplify).acceptance);
    } else if (tr_kind == "cascade-to-brasp") {
      out = unparse_brasp(cascade_to_brasp(parse_cascade(text)));
    } else if (tr_kind == "uhat-to-ltl") {
      LtlFormula f = uhat_to_ltl(parse_uhat(text), caps.states);
      out = unparse_ltl(tr_simplify ? simplify_ltl(f) : f);
    } else if (tr_kind == "uhat-to-pofa") {
      out = unparse_dfa(uhat_to_pofa(parse_uhat(text), caps.states));
    } else if (tr_kind == "mirror-ltl") {
      out = unparse_ltl(mirror_ltl(parse_ltl(text)));
    } else if (tr_kind == "mirror-brasp") {
      out = unparse_brasp(mirror_brasp(parse_brasp(text)));
    } else if (tr_kind == "left-to-right") {
      out = unparse_brasp(rewrite_leftmost_to_rightmost(parse_brasp(text)));
    } else {
      throw std::runtime_error("unknown translation '" + tr_kind + "'");
    }
    write_file(tr_out, out);
    if (tr_json)
      std::cout << json{{"schema", 1}, {"ok", true}, {"output", tr_out}}.dump()
                << "\n";
  });

  // classify
  auto* cls_cmd = app.add_subcommand("classify", "classify a DFA's language");
  std::string cls_file;
  bool cls_json = false;
  cls_cmd->add_option("-a,--automaton", cls_file, "DFA file")->required();
  cls_cmd->add_flag("--json", cls_json, "machine-readable output");
  cls_cmd->callback([&]() {
    Classification c = classify_language(parse_dfa(read_file(cls_file)),
                                         caps.monoid);
    if (cls_json) {
      std::cout << json{{"schema", 1},
                        {"in_ltlP", c.in_ltlP},
                        {"in_ltlF", c.in_ltlF},
                        {"star_free", c.star_free},
                        {"monoid_size", c.monoid_size}}
                       .dump()
                << "\n";
    } else {
      std::cout << "{\"in_ltlP\": " << bool_name(c.in_ltlP)
                << ", \"in_ltlF\": " << bool_name(c.in_ltlF)
                << ", \"star_free\": " << bool_name(c.star_free)
                << ", \"monoid_size\": " << c.monoid_size << "}\n";
    }
  });

  // equiv
  auto* eq_cmd = app.add_subcommand("equiv", "bounded equivalence check");
  std::string eq_a, eq_b;
  int eq_max_len = 6, eq_jobs = 1;
  bool eq_positionwise = false, eq_json = false;
  eq_cmd->add_option("-a", eq_a, "first recognizer, kind:path")->required();
  eq_cmd->add_option("-b", eq_b, "second recognizer, kind:path")->required();
  auto* eq_len_opt = eq_cmd->add_option(
      "--max-len", eq_max_len,
      "maximum string length (default 6, or 4 for three-symbol alphabets)");
  eq_cmd->add_flag("--positionwise", eq_positionwise, "compare per position");
  eq_cmd->add_option("--jobs", eq_jobs, "parallel workers");
  eq_cmd->add_flag("--json", eq_json, "machine-readable output");
  eq_cmd->callback([&]() {
    Recognizer a = load_recognizer(eq_a);
    Recognizer b = load_recognizer(eq_b);
    if (eq_len_opt->count() == 0) eq_max_len = a.alphabet.size() <= 2 ? 6 : 4;
    EquivResult res = check_equiv(
        a, b, eq_max_len,
        eq_positionwise ? EquivMode::Positionwise : EquivMode::Language,
        eq_jobs);
    if (eq_json) {
      json out{{"schema", 1}, {"equal", res.equal}};
      if (res.equal) {
        out["max_len"] = res.max_len_checked;
      } else {
        out["counterexample"] = format_word(res.counterexample);
        out["a"] = res.value_a;
        out["b"] = res.value_b;
        if (res.position >= 0) out["position"] = res.position;
      }
      std::cout << out.dump() << "\n";
      return;
    }
    if (res.equal) {
      std::cout << "EQUAL up to " << res.max_len_checked << "\n";
    } else {
      std::cout << "COUNTEREXAMPLE \"" << format_word(res.counterexample)
                << "\" a=" << bool_name(res.value_a)
                << " b=" << bool_name(res.value_b);
      if (res.position >= 0) std::cout << " pos=" << res.position;
      std::cout << "\n";
    }
  });

  // dot
  auto* dot_cmd = app.add_subcommand("dot", "emit a DFA as DOT");
  std::string dot_file, dot_out;
  bool dot_json = false;
  dot_cmd->add_option("-a,--automaton", dot_file, "DFA file")->required();
  dot_cmd->add_option("-o,--output", dot_out, "output file")->required();
  dot_cmd->add_flag("--json", dot_json, "machine-readable output");
  dot_cmd->callback([&]() {
    write_file(dot_out, to_dot(parse_dfa(read_file(dot_file))));
    if (dot_json)
      std::cout << json{{"schema", 1}, {"ok", true}, {"output", dot_out}}.dump()
                << "\n";
  });

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded random object");
  std::string gen_kind, gen_out, gen_alphabet = "a b";
  std::string gen_fragment = "P", gen_restriction = "FL";
  std::uint64_t gen_seed = 0;
  int gen_depth = 3, gen_vectors = 3, gen_states = 4, gen_layers = 1,
      gen_rules = 3;
  bool gen_json = false;
  gen_cmd->add_option("kind", gen_kind, "formula | brasp | dfa | uhat")
      ->required();
  gen_cmd->add_option("--seed", gen_seed, "generator seed")->required();
  gen_cmd->add_option("-o,--output", gen_out, "output file")->required();
  gen_cmd->add_option("--alphabet", gen_alphabet, "alphabet symbols");
  gen_cmd->add_option("--depth", gen_depth, "formula depth bound");
  gen_cmd->add_option("--fragment", gen_fragment,
                      "formula fragment: P | F | PF | full");
  gen_cmd->add_option("--vectors", gen_vectors, "program vector count");
  gen_cmd->add_option("--restriction", gen_restriction,
                      "program restriction: FL | FR | PL | PR | any");
  gen_cmd->add_option("--states", gen_states, "DFA state bound");
  gen_cmd->add_option("--layers", gen_layers, "model layer count");
  gen_cmd->add_option("--rules", gen_rules, "model score rules per layer");
  gen_cmd->add_flag("--json", gen_json, "machine-readable output");
  gen_cmd->callback([&]() {
    std::vector<Symbol> alphabet = split_ws(gen_alphabet);
    std::string out;
    if (gen_kind == "formula") {
      FormulaGenParams params;
      params.depth = gen_depth;
      params.alphabet = alphabet;
      if (gen_fragment == "P") params.fragment = Fragment::POnly;
      else if (gen_fragment == "F") params.fragment = Fragment::FOnly;
      else if (gen_fragment == "PF") params.fragment = Fragment::PF;
      else if (gen_fragment == "full") params.fragment = Fragment::Full;
      else throw std::runtime_error("unknown fragment '" + gen_fragment + "'");
      out = unparse_ltl(generate_formula(gen_seed, params));
    } else if (gen_kind == "brasp") {
      BraspGenParams params;
      params.vectors = gen_vectors;
      params.alphabet = alphabet;
      params.restriction = restriction_from_name(gen_restriction);
      out = unparse_brasp(generate_brasp(gen_seed, params));
    } else if (gen_kind == "dfa") {
      DfaGenParams params;
      params.max_states = gen_states;
      params.alphabet = alphabet;
      out = unparse_dfa(generate_dfa(gen_seed, params));
    } else if (gen_kind == "uhat") {
      UhatGenParams params;
      params.layers = gen_layers;
      params.alphabet = alphabet;
      params.max_rules = gen_rules;
      params.state_cap = caps.states;
      out = unparse_uhat(generate_uhat(gen_seed, params));
    } else {
      throw std::runtime_error("unknown generator kind '" + gen_kind + "'");
    }
    write_file(gen_out, out);
    if (gen_json)
      std::cout << json{{"schema", 1}, {"ok", true}, {"output", gen_out}}.dump()
                << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
