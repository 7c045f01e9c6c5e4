// Command-line harness: run the verification suite, estimate test pass
// probabilities, measure expansion, decode strategies, dump the Cayley
// spectrum, and build planted strategies.
//
// Exit codes: 0 success, 1 suite check failure, 2 usage/format/resource
// errors. Identical invocations produce byte-identical outputs.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shortcode/suite.hpp"

namespace {

using namespace shortcode;

struct CommonOpts {
  int l = 2, n = 4, m = 2;
  uint64_t seed = 7;
  uint64_t trials = 0;
  bool exact = false;
  int rmax = 1;
  int jobs = 1;
  uint64_t cap = kDefaultEnumerationCap;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--l", o.l, "row / subspace dimension");
  cmd->add_option("--n", o.n, "ambient / column dimension");
  cmd->add_option("--m", o.m, "middle tensor dimension");
  cmd->add_option("--seed", o.seed, "PRNG seed");
  cmd->add_option("--trials", o.trials, "Monte Carlo trial count");
  cmd->add_flag("--exact", o.exact, "exact enumeration instead of sampling");
  cmd->add_option("--rmax", o.rmax, "maximum nice-set constraint count");
  cmd->add_option("--jobs", o.jobs, "worker count (default 1)")->check(CLI::PositiveNumber);
  cmd->add_option("--cap", o.cap, "enumeration cap for exact mode");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
}

Mode make_mode(const CommonOpts& o) {
  if (o.exact && o.trials) throw std::invalid_argument("--exact and --trials are exclusive");
  if (o.exact) return ExactMode{o.cap, o.jobs};
  return MonteCarloMode{o.trials ? o.trials : 100000, o.seed, o.jobs};
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + o.out);
  f << text;
}

std::string key_value_csv(const nlohmann::ordered_json& j) {
  std::string s = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it)
    s += it.key() + "," + (it->is_string() ? it->get<std::string>() : it->dump()) + "\n";
  return s;
}

int cmd_suite(const CommonOpts& o, const std::string& strategy_path) {
  SuiteConfig cfg;
  cfg.l = o.l;
  cfg.n = o.n;
  cfg.m = o.m;
  cfg.seed = o.seed;
  cfg.cap = o.cap;
  cfg.jobs = o.jobs;
  if (!strategy_path.empty()) {
    cfg.input_strategy = read_strategy_file(strategy_path);
    cfg.input_name = strategy_path;
  }
  auto checks = run_suite(cfg);
  emit(o, suite_to_json(checks).dump(2) + "\n");
  bool all = true;
  for (const auto& c : checks) {
    if (!c.pass) {
      all = false;
      std::cerr << "FAIL " << c.id << ": expected " << c.expected << ", observed " << c.observed
                << "\n";
    }
  }
  return all ? 0 : 1;
}

int cmd_estimate(const CommonOpts& o, const std::string& strategy_path, std::string test_name) {
  AnyStrategy any = read_strategy_file(strategy_path);
  Mode mode = make_mode(o);
  TestReport rep;
  if (const auto* gs = std::get_if<GrassmannStrategy>(&any)) {
    if (!test_name.empty() && test_name != "grassmann")
      throw std::invalid_argument("grassmann strategies run the grassmann test");
    rep = pass_probability(*gs, mode);
  } else if (const auto* ss = std::get_if<ShortcodeStrategy>(&any)) {
    if (test_name.empty()) test_name = "deg2";
    if (test_name == "deg2")
      rep = pass_probability(*ss, TestKind::Deg2Shortcode, mode);
    else if (test_name == "unique2")
      rep = pass_probability(*ss, TestKind::UniqueDeg2Shortcode, mode);
    else
      throw std::invalid_argument("shortcode strategies run deg2 or unique2");
  } else {
    const auto& ts = std::get<TensorStrategy>(any);
    if (!test_name.empty() && test_name != "unique3")
      throw std::invalid_argument("tensor strategies run the unique3 test");
    rep = pass_probability(ts, mode);
  }
  auto j = rep.to_json();
  emit(o, o.format == "csv" ? key_value_csv(j) : j.dump(2) + "\n");
  return 0;
}

/// Vertex-set file:
///   set v1 kind=<shortcode|grassmann> l=<l> n=<n> [family=<nice|domain|all>]
///   right q=<bits> t=<bits>      (shortcode nice sets)
///   left r=<bits> s=<bits>
///   Q=<matrix|0>                 (grassmann nice sets)
///   W=<matrix|full>
struct SetSpec {
  std::string kind, family = "nice";
  int l = 0, n = 0;
  NiceSetShortcode shortcode_set;
  NiceSetGrassmann grassmann_set;
};

SetSpec read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw format_error("empty set file", 1);
  std::istringstream head(line);
  std::string word;
  head >> word;
  if (word != "set") throw format_error("expected 'set' header", 1);
  head >> word;
  if (word != "v1") throw format_error("unsupported set version", 1);
  SetSpec spec;
  while (head >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw format_error("bad header field '" + word + "'", 1);
    std::string key = word.substr(0, eq), value = word.substr(eq + 1);
    if (key == "kind")
      spec.kind = value;
    else if (key == "l")
      spec.l = std::stoi(value);
    else if (key == "n")
      spec.n = std::stoi(value);
    else if (key == "family")
      spec.family = value;
    else
      throw format_error("unknown header field '" + key + "'", 1);
  }
  if (spec.kind.empty() || spec.l <= 0 || spec.n <= 0)
    throw format_error("incomplete set header", 1);
  spec.shortcode_set = NiceSetShortcode::everything(spec.l, spec.n);
  Subspace q = Subspace::zero(spec.n), w = Subspace::full(spec.n);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tag;
    row >> tag;
    auto field = [&](const std::string& key, int len) {
      std::string tok;
      if (!(row >> tok) || tok.rfind(key + "=", 0) != 0)
        throw format_error("expected '" + key + "=<bits>'", lineno);
      return GF2Vector::parse(std::string_view(tok).substr(key.size() + 1), len, lineno);
    };
    if (tag == "right")
      spec.shortcode_set.right.push_back({field("q", spec.n), field("t", spec.l)});
    else if (tag == "left")
      spec.shortcode_set.left.push_back({field("r", spec.l), field("s", spec.n)});
    else if (tag.rfind("Q=", 0) == 0) {
      std::string lit = tag.substr(2);
      if (lit != "0") q = Subspace::span(GF2Matrix::parse(lit, spec.n, lineno));
    } else if (tag.rfind("W=", 0) == 0) {
      std::string lit = tag.substr(2);
      if (lit != "full") w = Subspace::span(GF2Matrix::parse(lit, spec.n, lineno));
    } else {
      throw format_error("unknown set line '" + tag + "'", lineno);
    }
  }
  spec.grassmann_set = {q, w};
  return spec;
}

int cmd_expansion(const CommonOpts& o, const std::string& set_path) {
  SetSpec spec = read_set_file(set_path);
  Mode mode = make_mode(o);
  ExpansionReport rep;
  if (spec.kind == "shortcode") {
    rep = shortcode_stay(ShortcodeGraph(spec.l, spec.n), spec.shortcode_set, mode);
  } else if (spec.kind == "grassmann") {
    GrassmannGraph g(spec.l, spec.n);
    if (spec.family == "nice") {
      rep = grassmann_expansion(g, spec.grassmann_set, mode);
    } else if (spec.family == "domain") {
      Embedding emb = Embedding::standard(spec.l, spec.n);
      std::vector<Subspace> members;
      for_each_vertex(g, [&](const Subspace& v) {
        if (emb.in_domain(v)) members.push_back(v);
      }, o.cap);
      rep = grassmann_expansion(g, members,
                                [&emb](const Subspace& v) { return emb.in_domain(v); },
                                "embedding domain", o.cap);
    } else if (spec.family == "all") {
      rep = grassmann_expansion(g, all_vertices(g, o.cap), [](const Subspace&) { return true; },
                                "everything", o.cap);
    } else {
      throw std::invalid_argument("unknown grassmann family '" + spec.family + "'");
    }
  } else {
    throw std::invalid_argument("unknown set kind '" + spec.kind + "'");
  }
  auto j = rep.to_json();
  emit(o, o.format == "csv" ? key_value_csv(j) : j.dump(2) + "\n");
  return 0;
}

int cmd_decode(const CommonOpts& o, const std::string& strategy_path) {
  AnyStrategy any = read_strategy_file(strategy_path);
  nlohmann::ordered_json j;
  if (const auto* ss = std::get_if<ShortcodeStrategy>(&any))
    j = decode_shortcode(*ss, o.rmax, o.cap).to_json();
  else if (const auto* gs = std::get_if<GrassmannStrategy>(&any))
    j = decode_grassmann(*gs, o.rmax, o.cap).to_json();
  else
    throw std::invalid_argument("decode expects a grassmann or shortcode strategy");
  emit(o, o.format == "csv" ? key_value_csv(j) : j.dump(2) + "\n");
  return 0;
}

std::string lambda_str(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

int cmd_spectrum(const CommonOpts& o) {
  auto table = spectrum_by_rank(o.l, o.n);
  if (o.format == "csv") {
    std::string s = "rank,lambda\n";
    for (auto& [r, lambda] : table) s += std::to_string(r) + "," + lambda_str(lambda) + "\n";
    emit(o, s);
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (auto& [r, lambda] : table) {
      nlohmann::ordered_json j;
      j["rank"] = r;
      j["lambda_num"] = lambda.num;
      j["lambda_den"] = lambda.den;
      arr.push_back(j);
    }
    emit(o, arr.dump(2) + "\n");
  }
  return 0;
}

/// Parts file:
///   parts v1 kind=<shortcode|grassmann> l=<l> n=<n>
///   part [right q=<bits> t=<bits>]... [left r=<bits> s=<bits>]...
///   part Q=<matrix|0> W=<matrix|full>
int cmd_plant(const CommonOpts& o, const std::string& parts_path) {
  std::ifstream in(parts_path);
  if (!in) throw std::runtime_error("cannot open parts file: " + parts_path);
  std::string line;
  if (!std::getline(in, line)) throw format_error("empty parts file", 1);
  std::istringstream head(line);
  std::string word, kind;
  int l = 0, n = 0;
  head >> word;
  if (word != "parts") throw format_error("expected 'parts' header", 1);
  head >> word;
  if (word != "v1") throw format_error("unsupported parts version", 1);
  while (head >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw format_error("bad header field '" + word + "'", 1);
    std::string key = word.substr(0, eq), value = word.substr(eq + 1);
    if (key == "kind")
      kind = value;
    else if (key == "l")
      l = std::stoi(value);
    else if (key == "n")
      n = std::stoi(value);
    else
      throw format_error("unknown header field '" + key + "'", 1);
  }
  if (kind.empty() || l <= 0 || n <= 0) throw format_error("incomplete parts header", 1);

  Prng prng(o.seed);
  std::ostringstream out_text;
  int lineno = 1;
  if (kind == "shortcode") {
    std::vector<NiceSetShortcode> parts;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string tag;
      row >> tag;
      if (tag != "part") throw format_error("expected 'part ...'", lineno);
      NiceSetShortcode set = NiceSetShortcode::everything(l, n);
      std::string side;
      auto field = [&](const std::string& key, int len) {
        std::string tok;
        if (!(row >> tok) || tok.rfind(key + "=", 0) != 0)
          throw format_error("expected '" + key + "=<bits>'", lineno);
        return GF2Vector::parse(std::string_view(tok).substr(key.size() + 1), len, lineno);
      };
      while (row >> side) {
        if (side == "right")
          set.right.push_back({field("q", n), field("t", l)});
        else if (side == "left")
          set.left.push_back({field("r", l), field("s", n)});
        else
          throw format_error("unknown part clause '" + side + "'", lineno);
      }
      parts.push_back(std::move(set));
    }
    write_strategy(out_text, make_planted(prng, ShortcodeGraph(l, n), parts));
  } else if (kind == "grassmann") {
    std::vector<NiceSetGrassmann> parts;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::istringstream row(line);
      std::string tag;
      row >> tag;
      if (tag != "part") throw format_error("expected 'part ...'", lineno);
      Subspace q = Subspace::zero(n), w = Subspace::full(n);
      std::string tok;
      while (row >> tok) {
        if (tok.rfind("Q=", 0) == 0) {
          std::string lit = tok.substr(2);
          if (lit != "0") q = Subspace::span(GF2Matrix::parse(lit, n, lineno));
        } else if (tok.rfind("W=", 0) == 0) {
          std::string lit = tok.substr(2);
          if (lit != "full") w = Subspace::span(GF2Matrix::parse(lit, n, lineno));
        } else {
          throw format_error("unknown part clause '" + tok + "'", lineno);
        }
      }
      parts.push_back({q, w});
    }
    write_strategy(out_text, make_planted_grassmann(prng, GrassmannGraph(l, n), parts));
  } else {
    throw std::invalid_argument("unknown parts kind '" + kind + "'");
  }
  emit(o, out_text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grassmann / shortcode consistency-test workbench"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string strategy_path, set_path, parts_path, test_name, suite_strategy;

  CLI::App* suite = app.add_subcommand("suite", "run the verification battery");
  add_common(suite, o);
  suite->add_option("--strategy", suite_strategy, "strategy file checked for exact consistency");

  CLI::App* estimate = app.add_subcommand("estimate", "test pass probability of a strategy");
  add_common(estimate, o);
  estimate->add_option("strategy", strategy_path, "strategy file")->required();
  estimate->add_option("--test", test_name, "grassmann|deg2|unique2|unique3");

  CLI::App* expansion = app.add_subcommand("expansion", "stay probability and expansion of a set");
  add_common(expansion, o);
  expansion->add_option("set", set_path, "vertex-set file")->required();

  CLI::App* decode = app.add_subcommand("decode", "search nice sets and affine rules");
  add_common(decode, o);
  decode->add_option("strategy", strategy_path, "strategy file")->required();

  CLI::App* spectrum = app.add_subcommand("spectrum", "Cayley eigenvalues by rank");
  add_common(spectrum, o);

  CLI::App* plant = app.add_subcommand("plant", "build a planted strategy from parts");
  add_common(plant, o);
  plant->add_option("parts", parts_path, "parts file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (suite->parsed()) return cmd_suite(o, suite_strategy);
    if (estimate->parsed()) return cmd_estimate(o, strategy_path, test_name);
    if (expansion->parsed()) return cmd_expansion(o, set_path);
    if (decode->parsed()) return cmd_decode(o, strategy_path);
    if (spectrum->parsed()) {
      if (spectrum->count("--format") == 0) o.format = "csv";
      return cmd_spectrum(o);
    }
    if (plant->parsed()) return cmd_plant(o, parts_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
