// Command line front end: model construction, bracket queries, the
// verification suites, structure-constant export, and nilpotency verdicts.
//
// Exit codes: 0 all checks match, 1 mismatch, 2 usage or parse error,
// 3 resource cap exceeded.

#include "kolab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace kolab;

namespace {

struct Options {
  std::uint32_t p = 3;
  int n = 1;
  std::vector<int> t;
  std::string mode = "certified";
  std::uint64_t seed = 0;
  std::string output = "text";
  std::size_t max_dim = 5000;
  std::string suite = "all";
  int family = 20;
  std::string q_target = "normalizer";
};

VerifyConfig to_config(const Options& o) {
  VerifyConfig cfg;
  cfg.p = o.p;
  cfg.n = o.n;
  cfg.t = o.t;
  cfg.mode = o.mode == "raw" ? NilMode::Raw : NilMode::Certified;
  cfg.seed = o.seed;
  cfg.family = o.family;
  cfg.qtarget = o.q_target == "graded" ? QTarget::GradedEven : QTarget::NormalizedNil;
  cfg.max_dim = o.max_dim;
  if (!cfg.t.empty() && static_cast<int>(cfg.t.size()) != cfg.n)
    throw parse_error("--t needs exactly n heights");
  return cfg;
}

void print_header(const Options& o, const VerifyConfig& cfg) {
  std::cout << "# model: p=" << o.p << " n=" << o.n << " t=";
  auto hs = cfg.heights();
  for (std::size_t i = 0; i < hs.size(); ++i) std::cout << (i ? "," : "(") << hs[i];
  std::cout << ")  mode=" << o.mode << " seed=" << o.seed << "\n";
  std::cout << "# variables: x1..x" << o.n << " even | x" << o.n + 1 << "..x" << 2 * o.n
            << " odd (xi' = x(i+-" << o.n << ")) | x" << 2 * o.n + 1 << " distinguished\n";
}

int cmd_dims(const Options& o) {
  VerifyConfig cfg = to_config(o);
  check_cap(cfg);
  ContactAlgebra K(cfg.p, cfg.n, cfg.heights());
  if (o.output == "json") {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["p"] = o.p;
    j["n"] = o.n;
    j["t"] = cfg.heights();
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (int i = -2; i <= K.max_degree(); ++i)
      comps.push_back({{"degree", i}, {"dim", K.component_basis(i).size()}});
    j["components"] = comps;
    j["total"] = K.dim();
    std::cout << j.dump(2) << "\n";
  } else {
    print_header(o, cfg);
    for (int i = -2; i <= K.max_degree(); ++i)
      std::cout << "degree " << i << ": dim " << K.component_basis(i).size() << "\n";
    std::cout << "total: " << K.dim() << "\n";
  }
  return 0;
}

int cmd_bracket(const Options& o, const std::string& a, const std::string& b) {
  VerifyConfig cfg = to_config(o);
  check_cap(cfg);
  ContactAlgebra K(cfg.p, cfg.n, cfg.heights());
  Poly pa = K.parse(a), pb = K.parse(b);
  Poly c = K.bracket(pa, pb);
  // cross-check against the expansion route
  SuperDerivation lhs = K.expand_linear(c);
  SuperDerivation rhs = K.witt().bracket(K.expand(pa), K.expand(pb));
  if (!(lhs == rhs)) {
    std::cerr << "internal cross-check failure\n";
    return 1;
  }
  if (o.output == "json") {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["a"] = a;
    j["b"] = b;
    j["result"] = K.print(c);
    j["expansion"] = K.witt().print(lhs);
    std::cout << j.dump(2) << "\n";
  } else {
    print_header(o, cfg);
    std::cout << K.print(c) << "\n";
  }
  return 0;
}

int cmd_verify(const Options& o) {
  VerifyConfig cfg = to_config(o);
  auto reports = run_suites(o.suite, cfg);
  bool all_ok = true;
  for (auto& r : reports) all_ok = all_ok && report_passes(r, cfg.mode);
  if (o.output == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& r : reports) arr.push_back(r.to_json());
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["suite"] = o.suite;
    j["reports"] = arr;
    j["pass"] = all_ok;
    std::cout << j.dump(2) << "\n";
  } else {
    print_header(o, cfg);
    for (auto& r : reports) std::cout << r.line() << "\n";
    std::cout << (all_ok ? "all checks passed" : "some checks failed") << "\n";
  }
  return all_ok ? 0 : 1;
}

int cmd_export(const Options& o, const std::string& path) {
  VerifyConfig cfg = to_config(o);
  check_cap(cfg);
  ContactAlgebra K(cfg.p, cfg.n, cfg.heights());
  auto j = K.structure_constants();
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  out << j.dump() << "\n";
  if (!out.good()) {
    std::cerr << "write failure on " << path << "\n";
    return 2;
  }
  if (o.output != "json") std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_nil(const Options& o, const std::string& elem) {
  VerifyConfig cfg = to_config(o);
  check_cap(cfg);
  ContactAlgebra K(cfg.p, cfg.n, cfg.heights());
  Poly y = K.parse(elem);
  NilPolicy policy;
  policy.raw = cfg.mode == NilMode::Raw;
  NilVerdict v = nilpotency_oracle(cfg.p, cfg.n, cfg.heights(), y, policy);
  if (o.output != "json") print_header(o, cfg);
  std::cout << v.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"exact verification laboratory for truncated contact-type Lie superalgebras"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--p", o.p, "odd prime characteristic")->envname("KOLAB_P");
  app.add_option("--n", o.n, "number of even variables")->envname("KOLAB_N");
  app.add_option("--t", o.t, "truncation heights (one per even variable)")
      ->delimiter(',')
      ->envname("KOLAB_T");
  app.add_option("--mode", o.mode, "raw | certified")
      ->check(CLI::IsMember({"raw", "certified"}))
      ->envname("KOLAB_MODE");
  app.add_option("--seed", o.seed, "seed for sampled checks")->envname("KOLAB_SEED");
  app.add_option("--output", o.output, "text | json")
      ->check(CLI::IsMember({"text", "json"}))
      ->envname("KOLAB_OUTPUT");
  app.add_option("--max-dim", o.max_dim, "model dimension cap")->envname("KOLAB_MAX_DIM");

  auto* dims = app.add_subcommand("dims", "per-degree dimensions of the model");
  auto* bracket = app.add_subcommand("bracket", "bracket of two potentials");
  std::string arg_a, arg_b;
  bracket->add_option("a", arg_a, "left potential")->required();
  bracket->add_option("b", arg_b, "right potential")->required();
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--suite", o.suite, "all | s1 | s2 | s3 | s4")
      ->check(CLI::IsMember({"all", "s1", "s2", "s3", "s4"}));
  verify->add_option("--family", o.family, "number of generated automorphisms");
  verify->add_option("--q-target", o.q_target, "normalizer | graded")
      ->check(CLI::IsMember({"normalizer", "graded"}));
  auto* exportc = app.add_subcommand("export", "write the structure-constant table");
  std::string arg_path;
  exportc->add_option("path", arg_path, "output file")->required();
  auto* nil = app.add_subcommand("nil", "nilpotency verdict for a potential");
  std::string arg_elem;
  nil->add_option("element", arg_elem, "potential string")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dims->parsed()) return cmd_dims(o);
    if (bracket->parsed()) return cmd_bracket(o, arg_a, arg_b);
    if (verify->parsed()) return cmd_verify(o);
    if (exportc->parsed()) return cmd_export(o, arg_path);
    if (nil->parsed()) return cmd_nil(o, arg_elem);
  } catch (const cap_exceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
