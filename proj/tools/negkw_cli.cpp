// negkw: build, inspect and maintain negative-keyword account structures.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "negkw/negkw.hpp"

namespace {

using namespace negkw;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << text;
}

RuleSet load_rules(const std::string& path) {
  try {
    return parse_rules(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

std::vector<Keyword> load_brands(const std::string& path) {
  if (path.empty()) return {};
  try {
    return parse_brands(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

Account load_account(const std::string& path) {
  try {
    return parse_account(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

struct EngineFlags {
  std::size_t max_words = 3;
  std::size_t max_image = 0;
  std::size_t target_size = 0;
  std::size_t limit = kDefaultLimit;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-words", max_words, "largest word set considered for a large eraser")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-image", max_image, "largest eraser image kept (default ceil(sqrt(n)))");
    cmd->add_option("--target-size", target_size, "keywords per low-priority group (default ceil(sqrt(n)))");
    cmd->add_option("--limit", limit, "negative keywords allowed per campaign or AdGroup")->check(CLI::PositiveNumber);
  }

  BuildConfig config(BuildMode mode) const {
    BuildConfig c;
    c.mode = mode;
    c.max_words = max_words;
    c.max_image = max_image;
    c.target_size = target_size;
    c.limit = limit;
    return c;
  }
};

void print_summary(const Account& acc) {
  std::size_t adgroups = 0;
  for (const auto& c : acc.campaigns) adgroups += c.adgroups.size();
  std::cout << "campaigns: " << acc.campaigns.size() << ", adgroups: " << adgroups
            << ", negatives: " << count_negatives(acc) << "\n";
  for (const auto& c : acc.campaigns) {
    std::cout << "  " << std::left << std::setw(6) << c.name << " " << std::setw(6) << to_string(c.priority)
              << " negatives " << c.negatives.size() << ", adgroups " << c.adgroups.size() << "\n";
  }
  for (const auto& g : acc.groups) {
    std::cout << "  group " << g.campaign << ":";
    for (const auto& k : g.keywords) std::cout << " [" << k.str() << "]";
    std::cout << "\n    erasers:";
    for (const auto& e : g.erasers) std::cout << " " << e.str();
    std::cout << "\n";
  }
}

int cmd_build(const std::string& rules, const std::string& brands, const std::string& non_brands,
              const std::string& mode, const std::string& out, const EngineFlags& flags) {
  BuildInput in{load_rules(rules), load_brands(brands), load_brands(non_brands), {},
                flags.config(build_mode_from_string(mode))};
  const Account acc = build_account(in);
  if (!out.empty()) write_file(out, render_account(acc));
  print_summary(acc);
  BuildInput other = in;
  other.config.mode = in.config.mode == BuildMode::Naive ? BuildMode::Reduced : BuildMode::Naive;
  const Account alt = build_account(other);
  const auto& naive = in.config.mode == BuildMode::Naive ? acc : alt;
  const auto& reduced = in.config.mode == BuildMode::Naive ? alt : acc;
  std::cout << "negatives naive: " << count_negatives(naive) << ", reduced: " << count_negatives(reduced) << "\n";
  return kOk;
}

int cmd_simulate(const std::string& account, const std::vector<std::string>& queries, const std::string& file,
                 const std::string& out) {
  const Account acc = load_account(account);
  std::vector<Keyword> qs;
  for (const auto& q : queries) qs.push_back(Keyword::parse(q));
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) qs.push_back(Keyword::parse(line));
    }
  }
  const auto report = trace_report(acc, qs);
  const std::string text = to_json(report).dump(2) + "\n";
  if (!out.empty()) write_file(out, text);
  std::cout << text;
  return kOk;
}

void print_property(const char* name, const PropertyResult& p) {
  std::cout << name << ": " << (p.pass ? "pass" : "FAIL") << " (" << p.checked << " checked"
            << (p.vacuous ? ", vacuous" : "") << ")\n";
  for (const auto& c : p.counterexamples) {
    std::cout << "  '" << c.query.str() << "' expected " << c.expected << ", got " << to_string(c.disposition);
    if (!c.campaign.empty()) std::cout << " " << c.campaign;
    if (!c.adgroup.empty()) std::cout << "/" << c.adgroup;
    if (!c.details.empty()) std::cout << " (" << c.details << ")";
    std::cout << "\n";
  }
}

int cmd_verify(const std::string& account, std::size_t probes, std::uint64_t seed, const std::string& out) {
  const Account acc = load_account(account);
  const auto report = verify(acc, probes, seed);
  if (!out.empty()) write_file(out, to_json(report).dump(2) + "\n");
  print_property("property 1", report.property1);
  print_property("property 2", report.property2);
  print_property("property 3", report.property3);
  for (const auto& f : report.structural) {
    std::cout << to_string(f.severity) << " [" << f.kind << "] " << f.detail << "\n";
  }
  std::cout << (report.ok() ? "OK" : "FAILED") << "\n";
  return report.ok() ? kOk : kVerifyFailed;
}

int cmd_bounds(const std::vector<std::size_t>& args, bool table) {
  if (table || args.empty()) {
    std::cout << std::left << std::setw(8) << "Name" << std::right << std::setw(8) << "SK" << std::setw(7) << "m"
              << std::setw(5) << "m'" << std::setw(12) << "NK" << std::setw(12) << "printed" << "\n";
    for (const auto& s : reference_sites()) {
      const auto w = nk_worst_case_optimal(s.n, s.m, s.m_prime);
      std::cout << std::left << std::setw(8) << s.name << std::right << std::setw(8) << s.n << std::setw(7) << s.m
                << std::setw(5) << s.m_prime << std::setw(12) << w.rounded << std::setw(12) << s.published;
      if (!s.note.empty()) std::cout << "  # " << s.note;
      std::cout << "\n";
    }
    return kOk;
  }
  if (args.size() != 3) throw Error(ErrorKind::InvalidInput, "bounds takes n m m'");
  const auto w = nk_worst_case_optimal(args[0], args[1], args[2]);
  std::cout << w.rounded << "\n";
  std::cout << "real: " << std::fixed << std::setprecision(2) << w.value << "\n";
  std::cout << "high+medium: " << high_medium_count(args[0], args[1], args[2]) << "\n";
  return kOk;
}

int cmd_reduce_stats(const std::string& rules, const std::string& brands, const std::string& non_brands,
                     const std::string& out, const EngineFlags& flags) {
  BuildInput in{load_rules(rules), load_brands(brands), load_brands(non_brands), {}, flags.config(BuildMode::Reduced)};
  const auto st = reduction_stats(in);
  json j = to_json(st);
  j["NK"] = st.total_negatives_naive;
  j["h"] = st.total_negatives_reduced;
  j["h_over_NK"] = st.ratio;
  const std::string text = j.dump(2) + "\n";
  if (!out.empty()) write_file(out, text);
  std::cout << text;
  return kOk;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out, const std::string& brands_out,
              const std::string& non_brands_out) {
  const auto corpus = synthesize(spec);
  const std::string rules = render_rules(corpus.rules);
  if (out.empty()) {
    std::cout << rules;
  } else {
    write_file(out, rules);
  }
  auto lines = [](const std::vector<Keyword>& ks) {
    std::string s;
    for (const auto& k : ks) s += k.str() + "\n";
    return s;
  };
  if (!brands_out.empty()) write_file(brands_out, lines(corpus.brands));
  if (!non_brands_out.empty()) write_file(non_brands_out, lines(corpus.non_brands));
  return kOk;
}

struct UpdateArgs {
  std::string account, rules, out, rules_out, log;
  std::string keyword, item, strategy = "new-campaign";
  std::int64_t cpc = 0;
  std::vector<std::string> items;
  std::size_t max_words = 3;
};

int finish_update(const UpdateArgs& a, const UpdateOutcome& o) {
  write_file(a.out.empty() ? a.account : a.out, render_account(o.account));
  write_file(a.rules_out.empty() ? a.rules : a.rules_out, render_rules(o.rules));
  const std::string text = to_json(o).dump(2) + "\n";
  if (!a.log.empty()) write_file(a.log, text);
  std::cout << text;
  return kOk;
}

void attach_update_common(CLI::App* cmd, UpdateArgs& a) {
  cmd->add_option("--account", a.account, "account snapshot to update")->required();
  cmd->add_option("--rules", a.rules, "rules file (JSON lines)")->required();
  cmd->add_option("--out", a.out, "where to write the new snapshot (default: in place)");
  cmd->add_option("--rules-out", a.rules_out, "where to write the new rules (default: in place)");
  cmd->add_option("--log", a.log, "also write the change log here");
  cmd->add_option("--max-words", a.max_words, "largest word set for re-reduced erasers")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negative-keyword account structures: build, simulate, verify, update."};
  app.require_subcommand(1);

  std::string rules, brands, non_brands, mode = "reduced", out, account, queries_file;
  std::vector<std::string> queries;
  std::size_t probes = 1000;
  std::uint64_t seed = 1;
  EngineFlags flags;

  auto* build = app.add_subcommand("build", "compile rules and brand lists into an account snapshot");
  build->add_option("--rules", rules, "rules file (JSON lines)")->required();
  build->add_option("--brands", brands, "sold brands, one per line");
  build->add_option("--non-brands", non_brands, "known brands not sold, one per line");
  build->add_option("--mode", mode, "naive or reduced")->check(CLI::IsMember({"naive", "reduced"}));
  build->add_option("--out", out, "snapshot path");
  flags.attach(build);

  auto* sim = app.add_subcommand("simulate", "trace queries through an account");
  sim->add_option("--account", account, "account snapshot")->required();
  sim->add_option("--query,-q", queries, "query (repeatable)");
  sim->add_option("--queries", queries_file, "file with one query per line");
  sim->add_option("--out", out, "write the report here too");

  auto* ver = app.add_subcommand("verify", "check properties 1-3 and structural sanity");
  ver->add_option("--account", account, "account snapshot")->required();
  ver->add_option("--probes", probes, "random probes per property")->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed, "probe seed");
  ver->add_option("--out", out, "JSON report path");

  std::vector<std::size_t> bound_args;
  bool table = false;
  auto* bnd = app.add_subcommand("bounds", "worst-case negative count for n, m, m'");
  bnd->add_option("values", bound_args, "n m m'")->expected(0, 3);
  bnd->add_flag("--table", table, "print the reference site table");

  auto* rst = app.add_subcommand("reduce-stats", "naive vs reduced negative counts");
  rst->add_option("--rules", rules, "rules file (JSON lines)")->required();
  rst->add_option("--brands", brands, "sold brands, one per line");
  rst->add_option("--non-brands", non_brands, "known brands not sold, one per line");
  rst->add_option("--out", out, "JSON output path");
  flags.attach(rst);

  SyntheticSpec spec;
  std::string brands_out, non_brands_out;
  auto* syn = app.add_subcommand("synth", "generate a synthetic rule corpus");
  syn->add_option("--n", spec.n, "rule count")->check(CLI::PositiveNumber);
  syn->add_option("--vocab", spec.vocab, "vocabulary size")->check(CLI::PositiveNumber);
  syn->add_option("--min-len", spec.min_len, "fewest non-brand words per keyword")->check(CLI::PositiveNumber);
  syn->add_option("--max-len", spec.max_len, "most non-brand words per keyword")->check(CLI::PositiveNumber);
  syn->add_option("--brands", spec.brands, "sold brand count");
  syn->add_option("--non-brands", spec.non_brands, "non-sold brand count");
  syn->add_option("--brand-fraction", spec.brand_fraction, "share of keywords carrying a brand")
      ->check(CLI::Range(0.0, 1.0));
  syn->add_option("--seed", spec.seed, "generator seed");
  syn->add_option("--out", out, "rules output (default: stdout)");
  syn->add_option("--brands-out", brands_out, "sold brand list output");
  syn->add_option("--non-brands-out", non_brands_out, "non-sold brand list output");

  auto* upd = app.add_subcommand("update", "incremental edits of an account snapshot");
  upd->require_subcommand(1);
  UpdateArgs ua;
  auto* add = upd->add_subcommand("add-rule", "add a rule");
  attach_update_common(add, ua);
  add->add_option("--keyword", ua.keyword, "rule keyword")->required();
  add->add_option("--cpc", ua.cpc, "CPC in micros")->required()->check(CLI::NonNegativeNumber);
  add->add_option("--items", ua.items, "item ids")->required()->delimiter(',');
  add->add_option("--strategy", ua.strategy, "new-campaign or min-negatives")
      ->check(CLI::IsMember({"new-campaign", "min-negatives"}));
  auto* rm = upd->add_subcommand("rm-rule", "remove a rule");
  attach_update_common(rm, ua);
  rm->add_option("--keyword", ua.keyword, "rule keyword")->required();
  auto* rmi = upd->add_subcommand("rm-item", "remove an item from every rule");
  attach_update_common(rmi, ua);
  rmi->add_option("--item", ua.item, "item id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*build) return cmd_build(rules, brands, non_brands, mode, out, flags);
    if (*sim) return cmd_simulate(account, queries, queries_file, out);
    if (*ver) return cmd_verify(account, probes, seed, out);
    if (*bnd) return cmd_bounds(bound_args, table);
    if (*rst) return cmd_reduce_stats(rules, brands, non_brands, out, flags);
    if (*syn) return cmd_synth(spec, out, brands_out, non_brands_out);
    UpdateOptions opts;
    opts.max_words = ua.max_words;
    const Account acc = load_account(ua.account);
    const RuleSet rs = load_rules(ua.rules);
    if (*add) {
      opts.strategy = strategy_from_string(ua.strategy);
      std::set<ItemId> items;
      for (const auto& i : ua.items) items.insert(ItemId(i));
      Rule r(Keyword::parse(ua.keyword), Money::from_micros(ua.cpc), std::move(items));
      return finish_update(ua, add_rule(acc, rs, r, opts));
    }
    if (*rm) return finish_update(ua, remove_rule(acc, rs, Keyword::parse(ua.keyword), opts));
    return finish_update(ua, remove_item(acc, rs, ItemId(ua.item), opts));
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.message() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
