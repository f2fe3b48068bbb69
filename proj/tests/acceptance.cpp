// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>

#include "support.hpp"

using namespace negkw;
using namespace negkw::testing;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr std::int64_t kSite2Tolerance = 2;
constexpr double kGoldenBudgetSeconds = 1.0;
constexpr double kMatrixBudgetSeconds = 60.0;
constexpr double kOracleBudgetSeconds = 30.0;
constexpr std::size_t kProbes = 1000;
constexpr std::size_t kOracleInstances = 50;
constexpr std::size_t kOracleMaxCandidates = 25;
constexpr double kPublishedRatioLow = 0.24;
constexpr double kPublishedRatioHigh = 0.35;

const std::vector<std::size_t> kMatrixSizes{10, 100, 1000};
const std::vector<std::uint64_t> kMatrixSeeds{1, 2, 3};

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fixed(double v, int digits = 3) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct Run {
  int status = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(NEGKW_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  const int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

struct Corpus {
  std::size_t n;
  std::uint64_t seed;
  BuildInput naive_in, reduced_in;
  Account naive, reduced;
};

std::vector<Corpus>& matrix() {
  static std::vector<Corpus> corpora = [] {
    std::vector<Corpus> out;
    for (auto n : kMatrixSizes) {
      for (auto seed : kMatrixSeeds) {
        auto ni = synthetic_input(matrix_spec(n, seed), BuildMode::Naive);
        auto ri = synthetic_input(matrix_spec(n, seed), BuildMode::Reduced);
        auto na = build_account(ni);
        auto ra = build_account(ri);
        out.push_back({n, seed, std::move(ni), std::move(ri), std::move(na), std::move(ra)});
      }
    }
    return out;
  }();
  return corpora;
}

std::string label(const Corpus& c) { return "n=" + std::to_string(c.n) + " seed=" + std::to_string(c.seed); }

// ---- 1 ----
Check bounds_table() {
  Check c;
  const auto site1 = cli("bounds 3000 100 30");
  c.expect(site1.status == 0 && first_line(site1.out) == "340337", "cli bounds 3000 100 30 -> " + first_line(site1.out));
  const auto site3 = cli("bounds 10000 30 20");
  c.expect(site3.status == 0 && first_line(site3.out) == "2002940", "cli bounds 10000 30 20 -> " + first_line(site3.out));
  const auto site2 = nk_worst_case_optimal(7000, 1, 0);
  c.expect(std::llabs(site2.rounded - 1171324) <= kSite2Tolerance, "Site2 " + std::to_string(site2.rounded));
  const auto site4 = nk_worst_case_optimal(10000, 1000, 40);
  c.expect(site4.rounded == 3004080, "Site4 formula " + std::to_string(site4.rounded));
  const auto table = cli("bounds --table");
  c.expect(table.status == 0 && table.out.find("3004080") != std::string::npos &&
               table.out.find("3002040") != std::string::npos && table.out.find("typo") != std::string::npos,
           "table lists Site4 with its note");
  c.note("Site2 " + fixed(site2.value, 2) + " vs printed 1171324; Site4 3004080 vs printed 3002040 (noted)");
  return c;
}

// ---- 2 ----
Check golden_pipeline() {
  Check c;
  Stopwatch sw;
  const auto in = shop_input();
  const auto sk = in.rules.keywords();
  const auto cands = enumerate_candidates(sk, 2, 3);
  std::map<std::string, std::vector<Keyword>> got;
  for (const auto& x : cands) got[x.eraser.str()] = x.image;
  const std::map<std::string, std::vector<Keyword>> want{
      {"{nike} (large)", kws({"nike air max", "nike shoes", "nike soccer white"})},
      {"{shoes} (large)", kws({"adidas running shoes", "large superstar shoes", "nike shoes"})},
      {"{large} (large)", kws({"large superstar shoes", "large tee-shirt"})},
      {"{air} (large)", kws({"air max", "nike air max"})},
      {"{max} (large)", kws({"air max", "nike air max"})},
      {"{adidas} (large)", kws({"adidas running shoes", "adidas superstar", "adidas superstar sneaker"})},
      {"{adidas, superstar} (large)", kws({"adidas superstar", "adidas superstar sneaker"})},
      {"{soccer} (large)", kws({"nike soccer white", "soccer colored mens"})},
      {"{superstar} (large)", kws({"adidas superstar", "adidas superstar sneaker", "large superstar shoes"})},
  };
  c.expect(got == want, "9 large erasers with their images (got " + std::to_string(got.size()) + ")");

  const auto plan = plan_erasers(sk);
  c.expect(plan.selected.covered.size() == 8, "color class covers " + std::to_string(plan.selected.covered.size()));

  const auto acc = build_account(in);
  std::set<std::vector<Keyword>> groups;
  for (const auto& g : acc.groups) groups.insert(g.keywords);
  const std::set<std::vector<Keyword>> want_groups{
      kws({"nike air max", "nike shoes", "nike soccer white", "soccer colored mens"}),
      kws({"adidas running shoes", "adidas superstar", "adidas superstar sneaker"}),
      kws({"air max", "garmin chronometer", "large superstar shoes", "large tee-shirt"}),
  };
  c.expect(groups == want_groups, "groups sk1/sk2/sk3");

  const auto* nike = acc.find_campaign(campaign_of(acc, kw("nike shoes")));
  NegativeSet erasers;
  for (const auto& n : nike->negatives) {
    if (n.match_type != MatchType::Phrase) erasers.insert(n);
  }
  const NegativeSet want_neg{large_neg(kw("adidas")), large_neg(kw("large")), exact_neg(kw("air max")),
                             exact_neg(kw("garmin chronometer"))};
  c.expect(erasers == want_neg, "Neg of the nike campaign");
  const double t = sw.seconds();
  c.expect(t < kGoldenBudgetSeconds, "runtime " + fixed(t) + " s");
  c.note("soccer colored mens (left out of the listed groups) sits in the nike group; " + fixed(t) + " s");
  return c;
}

// ---- 3 ----
Check property_suite() {
  Check c;
  Stopwatch sw;
  std::size_t runs = 0;
  for (const auto& corpus : matrix()) {
    for (const auto* acc : {&corpus.naive, &corpus.reduced}) {
      const bool naive = acc == &corpus.naive;
      const auto tag = label(corpus) + (naive ? " naive" : " reduced");
      const auto p1 = verify_property1(*acc);
      const auto p2 = verify_property2(*acc, kProbes, corpus.seed);
      const auto p3 = verify_property3(*acc, kProbes, corpus.seed);
      c.expect(p1.pass && p1.checked == corpus.n, tag + " property 1");
      c.expect(p2.pass && p2.checked == kProbes, tag + " property 2 (" + std::to_string(p2.checked) + " probes)");
      c.expect(p3.pass && p3.checked == kProbes, tag + " property 3 (" + std::to_string(p3.checked) + " probes)");
      ++runs;
    }
  }
  const double t = sw.seconds();
  c.expect(t < kMatrixBudgetSeconds, "runtime " + fixed(t) + " s");
  c.note(std::to_string(runs) + " accounts, " + std::to_string(kProbes) + " probes each, " + fixed(t) + " s");
  return c;
}

// ---- 4 ----
Check mode_equivalence() {
  Check c;
  std::size_t checked = 0;
  for (const auto& corpus : matrix()) {
    const Simulator naive(corpus.naive), reduced(corpus.reduced);
    for (const auto& q : corpus.naive_in.rules.keywords()) {
      const auto a = naive.simulate(q);
      const auto b = reduced.simulate(q);
      c.expect(a.disposition == Disposition::Landed && b.disposition == Disposition::Landed &&
                   a.adgroup == q.str() && b.adgroup == a.adgroup,
               label(corpus) + " '" + q.str() + "'");
      ++checked;
    }
  }
  c.note(std::to_string(checked) + " keywords land in the same AdGroup in both modes");
  return c;
}

// ---- 5 ----
Check reduction() {
  Check c;
  std::ostringstream ratios;
  double sum = 0;
  std::size_t counted = 0;
  for (const auto& corpus : matrix()) {
    const auto plan = plan_erasers(corpus.reduced_in.rules.keywords());
    if (plan.neras == 0) {
      c.note(label(corpus) + ": no vocabulary reuse, skipped");
      continue;
    }
    const std::size_t nk = count_negatives(corpus.naive);
    const std::size_t h = count_negatives(corpus.reduced);
    c.expect(h < nk, label(corpus) + " h=" + std::to_string(h) + " NK=" + std::to_string(nk));
    const double r = static_cast<double>(h) / static_cast<double>(nk);
    ratios << " " << corpus.n << "/" << corpus.seed << ":" << fixed(r, 2);
    sum += r;
    ++counted;
  }
  if (counted) {
    c.note("h/NK" + ratios.str() + "; mean " + fixed(sum / static_cast<double>(counted), 2) + " (published band " +
           fixed(kPublishedRatioLow, 2) + "-" + fixed(kPublishedRatioHigh, 2) + ", comparison only)");
  }
  c.expect(counted > 0, "at least one corpus with reuse");
  return c;
}

// ---- 6 ----
Check oracle() {
  Check c;
  Stopwatch sw;
  std::mt19937_64 rng(2024);
  std::size_t instances = 0, attempts = 0;
  double ratio_sum = 0;
  while (instances < kOracleInstances && attempts < 5000) {
    ++attempts;
    const std::size_t n = 8 + rng() % 16;
    const auto sk = random_keywords(rng, n, 5 + rng() % 6, 3);
    const auto cands = enumerate_candidates(sk, 2, 1 + ceil_sqrt(n));
    if (cands.empty() || cands.size() > kOracleMaxCandidates) continue;
    ++instances;
    const auto g = build_graph(cands);
    const auto cls = select_color_class(g, welsh_powell(g));
    std::set<Keyword> seen;
    bool disjoint = true;
    for (const auto& e : cls.erasers) {
      for (const auto& k : e.image) disjoint = seen.insert(k).second && disjoint;
    }
    const auto best = exact_packing_oracle(cands);
    c.expect(disjoint, "instance " + std::to_string(instances) + " class images overlap");
    c.expect(cls.weight <= best.coverage, "instance " + std::to_string(instances) + " heuristic above optimum");
    ratio_sum += best.coverage ? static_cast<double>(cls.weight) / static_cast<double>(best.coverage) : 1.0;
  }
  const double t = sw.seconds();
  c.expect(instances >= kOracleInstances, "only " + std::to_string(instances) + " instances");
  c.expect(t < kOracleBudgetSeconds, "runtime " + fixed(t) + " s");
  c.note(std::to_string(instances) + " instances, mean heuristic/optimum " +
         fixed(ratio_sum / static_cast<double>(std::max<std::size_t>(instances, 1))) + ", " + fixed(t) + " s");
  return c;
}

// ---- 7 ----
bool all_land_home(const Account& acc) {
  const Simulator sim(acc);
  for (const auto& p : acc.keywords()) {
    if (!sim.simulate(p).landed_in(campaign_of(acc, p), p.str())) return false;
  }
  return true;
}

Check updates() {
  Check c;
  const auto acc = shop_account();
  const auto rules = shop_input().rules;
  const std::string nike = campaign_of(acc, kw("nike shoes"));
  const std::size_t nike_adgroups = acc.find_campaign(nike)->adgroups.size();

  // In the library.
  const auto jog = add_rule(acc, rules, rule("nike jogging"));
  c.expect(campaign_of(jog.account, kw("nike jogging")) == nike, "nike jogging joins the nike campaign");
  c.expect(jog.account.find_campaign(nike)->adgroups.size() == nike_adgroups + 1, "exactly one AdGroup added");
  c.expect(verify(jog.account, kProbes, 1).ok(), "property suite after nike jogging");

  const auto big = add_rule(acc, rules, rule("nike large shoes"), {Strategy::NewCampaign});
  const auto home = campaign_of(big.account, kw("nike large shoes"));
  const auto* fresh = big.account.find_campaign(home);
  c.expect(fresh && fresh->tag.group == 4 && acc.find_campaign(home) == nullptr, "new fourth low-priority campaign");
  if (fresh) {
    const NegativeFilter f(fresh->negatives);
    bool blocks = true;
    for (const auto& p : acc.keywords()) blocks = blocks && f.matches(p, word_set(p));
    c.expect(blocks, "new campaign blocks all 11 prior keywords");
    c.expect(!f.matches(kw("nike large shoes"), word_set(kw("nike large shoes"))), "new campaign admits its keyword");
  }
  c.expect(big.account.keywords().size() == 12 && all_land_home(big.account), "all 12 keywords land at home");
  c.expect(verify(big.account, kProbes, 1).ok(), "property suite after nike large shoes");

  // Through the CLI.
  const fs::path dir = fs::temp_directory_path() / "negkw_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string snap = (dir / "account.json").string(), rfile = (dir / "rules.jsonl").string();
  const std::string build = "build --rules " + data_path("shop_rules.jsonl") + " --brands " +
                            data_path("shop_brands.txt") + " --non-brands " + data_path("shop_non_brands.txt") +
                            " --out " + snap;
  auto reset = [&] {
    fs::copy_file(data_path("shop_rules.jsonl"), rfile, fs::copy_options::overwrite_existing);
    return cli(build).status == 0;
  };
  c.expect(reset(), "cli build");
  const auto r1 = cli("update add-rule --account " + snap + " --rules " + rfile +
                      " --keyword 'nike jogging' --cpc 1000000 --items Item1");
  c.expect(r1.status == 0, "cli add-rule nike jogging");
  if (r1.status == 0) {
    const auto log = json::parse(r1.out);
    bool named = false;
    for (const auto& ch : log.at("changes")) {
      named = named || (ch.at("op") == "add-adgroup" && ch.at("campaign") == nike && ch.at("adgroup") == "nike jogging");
    }
    c.expect(named, "change log names the new AdGroup in " + nike);
    c.expect(parse_account(slurp(snap)) == jog.account, "cli and library agree (nike jogging)");
    c.expect(cli("verify --account " + snap + " --probes 1000").status == 0, "cli verify after nike jogging");
  }
  c.expect(reset(), "cli rebuild");
  const auto r2 = cli("update add-rule --account " + snap + " --rules " + rfile +
                      " --keyword 'nike large shoes' --cpc 1000000 --items Item1 --strategy new-campaign");
  c.expect(r2.status == 0, "cli add-rule nike large shoes");
  if (r2.status == 0) {
    c.expect(parse_account(slurp(snap)) == big.account, "cli and library agree (nike large shoes)");
    c.expect(cli("verify --account " + snap + " --probes 1000").status == 0, "cli verify after nike large shoes");
  }
  fs::remove_all(dir);

  // Post-update property suite on matrix corpora.
  for (const auto& corpus : matrix()) {
    if (corpus.n != 100) continue;
    std::vector<std::string> words;
    for (const auto& k : corpus.reduced.keywords()) words.insert(words.end(), k.tokens().begin(), k.tokens().end());
    const Keyword extra({words[0], words[words.size() / 2], "fresh"});
    for (auto s : {Strategy::NewCampaign, Strategy::MinNegatives}) {
      const auto out = add_rule(corpus.reduced, corpus.reduced_in.rules, Rule(extra, Money{1}, {ItemId("x")}), {s});
      c.expect(verify(out.account, kProbes, corpus.seed).ok(), label(corpus) + " after " + to_string(s) + " update");
    }
  }
  c.note("nike campaign " + nike + " goes from " + std::to_string(nike_adgroups) + " to " +
         std::to_string(nike_adgroups + 1) + " AdGroups; new campaign " + home);
  return c;
}

// ---- 8 ----
Check counting() {
  Check c;
  for (const auto& corpus : matrix()) {
    const auto& acc = corpus.naive;
    const std::size_t n = corpus.n, m = acc.brands.size(), mp = acc.non_brands.size();
    std::size_t c1 = 0, c2 = 0, c3 = 0;
    for (const auto& camp : acc.campaigns) {
      const std::size_t k = count_negatives(camp);
      (camp.tag.kind == CampaignTag::Kind::C1 ? c1 : camp.tag.kind == CampaignTag::Kind::C2 ? c2 : c3) += k;
    }
    const auto sizes = group_sizes(acc);
    std::size_t squares = 0;
    for (auto s : sizes) squares += s * s;
    const std::size_t k = sizes.size();
    c.expect(c1 == n + m + mp, label(corpus) + " high-priority count");
    c.expect(c2 == n + mp + m * (m - 1), label(corpus) + " medium-priority count incl. brand AdGroups");
    c.expect(c3 == (k * n - n + k * mp) + (squares - n), label(corpus) + " low-priority count");
    c.expect(count_negatives(acc) == nk_exact({n, m, mp, sizes}), label(corpus) + " total vs closed form");
  }
  c.note(std::to_string(matrix().size()) + " naive accounts match the closed form term by term");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"bounds table", bounds_table},       {"worked-example pipeline", golden_pipeline},
      {"property suite", property_suite},   {"mode equivalence", mode_equivalence},
      {"reduction effectiveness", reduction}, {"oracle check", oracle},
      {"update walkthroughs", updates},     {"counting cross-check", counting},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    all = all && c.ok;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (c.ok ? "PASS" : "FAIL") << "\n";
    for (const auto& n : c.notes) std::cout << "    " << n << "\n";
  }
  return all ? 0 : 1;
}
