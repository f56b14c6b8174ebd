#include "zslab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "zslab/decomposition.hpp"
#include "zslab/errors.hpp"
#include "zslab/structure.hpp"
#include "zslab/verification.hpp"
#include "zslab/zerosum.hpp"

namespace zslab::cli {

using nlohmann::json;

std::chrono::milliseconds parse_duration(const std::string& text) {
  std::size_t pos = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &pos);
  } catch (const std::exception&) {
    throw ParseError("expected a duration", 0);
  }
  if (value < 0) throw ParseError("negative duration", 0);
  const std::string unit = text.substr(pos);
  if (unit.empty() || unit == "s") return std::chrono::seconds(value);
  if (unit == "ms") return std::chrono::milliseconds(value);
  if (unit == "m" || unit == "min") return std::chrono::minutes(value);
  if (unit == "h") return std::chrono::hours(value);
  throw ParseError("unknown duration unit '" + unit + "'", pos);
}

namespace {

std::string canonical_text(const Sequence& s) { return format_sequence(canonical_form(s)); }

// Counterexamples go out in canonical form; every check predicate is
// Aut-invariant so the canonical witness fails the same way.
json report_json(const CheckReport& report, const RunConfig& cfg) {
  json j = to_json(report, !cfg.stable);
  auto& list = j["counterexamples"];
  for (std::size_t i = 0; i < report.counterexamples.size(); ++i) {
    list[i]["sequence"] = canonical_text(report.counterexamples[i]);
  }
  return j;
}

std::string flatten(const json& value) {
  return value.is_string() ? value.get<std::string>() : value.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_report(const CheckReport& report, const RunConfig& cfg) {
  const json j = report_json(report, cfg);
  std::ostringstream os;
  switch (cfg.output) {
    case Output::json:
      os << j.dump(2) << "\n";
      break;
    case Output::csv:
      os << "check,verdict,cases_examined,counterexamples_total,counterexample\n";
      if (report.counterexamples.empty()) {
        os << report.check << "," << j["verdict"].get<std::string>() << ","
           << report.cases_examined << ",0,\n";
      }
      for (const auto& c : j["counterexamples"]) {
        os << report.check << "," << j["verdict"].get<std::string>() << ","
           << report.cases_examined << "," << report.counterexamples_total << ","
           << csv_field(c["sequence"].get<std::string>()) << "\n";
      }
      break;
    case Output::text:
      os << report.check << ": " << j["verdict"].get<std::string>() << " ("
         << report.cases_examined << " cases";
      if (!cfg.stable) os << ", " << report.elapsed.count() << " ms";
      os << ")\n";
      for (const auto& [k, v] : j["params"].items()) os << "  " << k << " = " << flatten(v) << "\n";
      for (const auto& c : j["counterexamples"]) {
        os << "  counterexample: " << c["sequence"].get<std::string>() << "\n";
      }
      break;
  }
  return os.str();
}

// Generic key/value payload for the non-check commands.
std::string render_value(const json& j, const RunConfig& cfg) {
  std::ostringstream os;
  if (cfg.output == Output::json) {
    os << j.dump(2) << "\n";
  } else if (cfg.output == Output::csv) {
    std::string header, row;
    for (const auto& [k, v] : j.items()) {
      header += (header.empty() ? "" : ",") + k;
      row += (row.empty() ? "" : ",") + csv_field(flatten(v));
    }
    os << header << "\n" << row << "\n";
  } else {
    for (const auto& [k, v] : j.items()) os << k << ": " << flatten(v) << "\n";
  }
  return os.str();
}

Constraint parse_constraint(const std::string& s) {
  if (s == "all") return Constraint::all;
  if (s == "zero-sum-free") return Constraint::zero_sum_free;
  if (s == "minimal") return Constraint::minimal_zero_sum;
  if (s == "no-short") return Constraint::no_short_zero_sum;
  if (s == "no-long") return Constraint::no_long_zero_sum;
  throw ParseError("unknown constraint '" + s + "'", 0);
}

json form_json(const FormMatch& f) {
  json j = {{"form", f.form == Form::I ? "I" : "II"},
            {"first", f.first.to_string()},
            {"second", f.second.to_string()},
            {"x", f.x},
            {"minimal", f.minimal}};
  if (f.form == Form::I) {
    j["j"] = f.j;
  } else {
    j["s"] = f.s;
    j["flagged"] = f.flagged();
  }
  return j;
}

struct Args {
  RunConfig cfg;
  std::string output = "json";
  std::string mode = "audit";
  std::string time_cap = "0";

  std::string group;
  std::string sequence;
  std::size_t length = 0;
  std::string constraint = "all";
  std::size_t bound = 0;
  bool up_to_aut = false;
  int order = 0;

  int n = 0, m = 0, part = 1;
  std::size_t size_cap = 0, max_length = 6;
  std::uint64_t samples = 0;
  std::string lemma;
};

SearchOptions search_options(const RunConfig& cfg) {
  SearchOptions o;
  o.threads = cfg.threads;
  o.node_cap = cfg.node_cap;
  o.time_cap = cfg.time_cap;
  o.mode = cfg.mode;
  return o;
}

std::optional<std::string> invalid_environment() {
  auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    return v ? std::optional<std::string>(v) : std::nullopt;
  };
  for (const char* name : {"ZSLAB_THREADS", "ZSLAB_NODE_CAP", "ZSLAB_SEED"}) {
    const auto v = get(name);
    std::uint64_t n = 0;
    if (!v) continue;
    if (!CLI::detail::lexical_cast(*v, n)) return name;
    if (n == 0 && std::string_view(name) == "ZSLAB_THREADS") return name;
  }
  if (const auto v = get("ZSLAB_TIME_CAP")) {
    try {
      parse_duration(*v);
    } catch (const Error&) {
      return "ZSLAB_TIME_CAP";
    }
  }
  if (const auto v = get("ZSLAB_MODE"); v && *v != "fast" && *v != "audit") return "ZSLAB_MODE";
  if (const auto v = get("ZSLAB_OUTPUT"); v && *v != "json" && *v != "csv" && *v != "text") {
    return "ZSLAB_OUTPUT";
  }
  return std::nullopt;
}

// Environment values become explicit options unless the command line already
// sets them, so they rank above config files (which fill only unset options).
std::vector<std::string> with_environment(std::vector<std::string> args) {
  static constexpr std::pair<const char*, const char*> kEnv[] = {
      {"--threads", "ZSLAB_THREADS"}, {"--node-cap", "ZSLAB_NODE_CAP"},
      {"--time-cap", "ZSLAB_TIME_CAP"}, {"--mode", "ZSLAB_MODE"},
      {"--output", "ZSLAB_OUTPUT"},   {"--seed", "ZSLAB_SEED"},
      {"--stable", "ZSLAB_STABLE"}};
  const std::size_t given = args.size();
  for (const auto& [flag, env] : kEnv) {
    const char* value = std::getenv(env);
    if (value == nullptr) continue;
    const std::string prefix = std::string(flag) + "=";
    auto names_flag = [&](const std::string& a) { return a == flag || a.rfind(prefix, 0) == 0; };
    const bool set = std::any_of(args.begin(), args.begin() + static_cast<long>(given), names_flag);
    if (!set) args.push_back(prefix + value);
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-sum sequences over C_n1 + C_n2: constants, enumeration and checks", "zslab"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_config("--config", "", "TOML/INI file with option defaults");
  Args a;

  app.add_option("--threads", a.cfg.threads, "Worker threads")
      ->envname("ZSLAB_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--node-cap", a.cfg.node_cap, "Abort after this many search nodes (0 = none)")
      ->envname("ZSLAB_NODE_CAP");
  app.add_option("--time-cap", a.time_cap, "Abort after this long, e.g. 30s, 500ms (0 = none)")
      ->envname("ZSLAB_TIME_CAP");
  app.add_option("--mode", a.mode, "fast or audit")
      ->envname("ZSLAB_MODE")
      ->check(CLI::IsMember({"fast", "audit"}));
  app.add_option("--output", a.output, "json, csv or text")
      ->envname("ZSLAB_OUTPUT")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--seed", a.cfg.seed, "Seed for randomized modes")->envname("ZSLAB_SEED");
  app.add_flag("--stable", a.cfg.stable, "Omit timing so output is reproducible")
      ->envname("ZSLAB_STABLE");

  auto* dav = app.add_subcommand("davenport", "Davenport constant by exhaustive search");
  dav->add_option("group", a.group, "Group literal, e.g. C3xC3")->required();
  auto* eta_cmd = app.add_subcommand("eta", "Smallest l with a short zero-sum in every l-term sequence");
  eta_cmd->add_option("group", a.group)->required();

  auto* en = app.add_subcommand("enumerate", "List sequences up to automorphism");
  en->add_option("group", a.group)->required();
  en->add_option("--length", a.length)->required();
  en->add_option("--constraint", a.constraint, "all, zero-sum-free, minimal, no-short, no-long")
      ->check(CLI::IsMember({"all", "zero-sum-free", "minimal", "no-short", "no-long"}));
  en->add_option("--bound", a.bound, "Length bound for no-short / no-long");
  en->add_flag("--up-to-aut", a.up_to_aut, "One representative per Aut(G)-orbit");
  en->add_option("--order", a.order, "Only terms of exactly this order");

  auto* cl = app.add_subcommand("classify", "Zero-sum data and structural forms of one sequence");
  cl->add_option("group", a.group)->required();
  cl->add_option("sequence", a.sequence, "e.g. \"(1,0) (0,1)^3\"")->required();

  auto* check = app.add_subcommand("check", "Exhaustive verification of one statement");
  check->require_subcommand(1);
  auto sub = [&](const char* name, const char* help) { return check->add_subcommand(name, help); };
  auto* pb = sub("property-b", "Minimal zero-sums of length 2n-1 over C_n^2 contain n-1 equal terms");
  auto* pc = sub("property-c", "Short zero-sum-free sequences of length 3n-3 contain n-1 equal terms");
  auto* l23 = sub("lemma-2-3", "Four equivalent statements at length 2n-1");
  auto* l25 = sub("lemma-2-5", "Product decomposition and image properties");
  auto* cor = sub("corollary", "Minimal zero-sums of length D(G) are exactly the two forms");
  auto* egz = sub("egz", "Erdos-Ginzburg-Ziv and its inverse over C_n");
  auto* ham = sub("hamidoune", "Lower bound on |Sigma_|G|(S)|");
  auto* exch = sub("exchange", "Support and subsum exchange statements");
  auto* pert = sub("perturbation", "Perturbations inside Upsilon(C_m^2)");
  auto* p42 = sub("prop-4-2", "Structure of the image under multiplication by m");
  for (auto* c : {pb, pc, l23, egz}) c->add_option("--n", a.n)->required();
  egz->add_option("--part", a.part)->check(CLI::IsMember({1, 2}));
  for (auto* c : {l25, p42}) {
    c->add_option("--m", a.m)->required();
    c->add_option("--n", a.n)->required();
  }
  for (auto* c : {cor, ham, exch}) c->add_option("--group", a.group)->required();
  ham->add_option("--size-cap", a.size_cap, "Largest |S| (default |G|+4)");
  ham->add_option("--samples", a.samples, "Random samples instead of exhaustive search");
  exch->add_option("--max-length", a.max_length);
  pert->add_option("--m", a.m)->required();
  pert->add_option("--lemma", a.lemma, "unique, nonunique or nonunique-strict")
      ->required();

  // CLI11 drops environment values that fail conversion; reject them instead.
  if (const auto bad = invalid_environment()) {
    err << "zslab: invalid value in " << *bad << "\n";
    return usage_error;
  }

  const std::vector<std::string> full = with_environment(args);
  std::vector<std::string> reversed(full.rbegin(), full.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "zslab: " << e.what() << "\n";
    return usage_error;
  }

  RunConfig& cfg = a.cfg;
  cfg.output = a.output == "csv" ? Output::csv : a.output == "text" ? Output::text : Output::json;
  cfg.mode = a.mode == "fast" ? Mode::fast : Mode::audit;

  std::string payload;
  int code = ok;
  try {
    cfg.time_cap = parse_duration(a.time_cap);
    const SearchOptions opts = search_options(cfg);

    if (dav->parsed() || eta_cmd->parsed()) {
      const GroupSpec g = GroupSpec::parse(a.group);
      json j{{"group", g.to_string()}};
      if (dav->parsed()) {
        const auto r = davenport(g, opts);
        j["command"] = "davenport";
        j["value"] = r.value;
        j["closed_form"] = r.closed_form;
        j["witness"] = r.witnesses.empty() ? "" : canonical_text(r.witnesses.front().representative);
        j["orbits_per_length"] = r.orbits_per_length;
      } else {
        const auto r = eta(g, opts);
        j["command"] = "eta";
        j["value"] = r.value;
        j["closed_form"] = r.closed_form;
        j["witness"] = r.extremal_witnesses.empty()
                           ? ""
                           : canonical_text(r.extremal_witnesses.front().representative);
      }
      payload = render_value(j, cfg);
    } else if (en->parsed()) {
      EnumSpec spec;
      spec.group = GroupSpec::parse(a.group);
      spec.length = a.length;
      spec.constraint = parse_constraint(a.constraint);
      spec.bound = a.bound;
      spec.up_to_aut = a.up_to_aut;
      if (a.order > 0) spec.order_filter = a.order;
      const auto r = enumerate(spec, opts);
      std::ostringstream os;
      if (cfg.output == Output::csv) {
        os << "representative,orbit_size\n";
        for (const auto& item : r.items) {
          os << csv_field(format_sequence(item.representative)) << "," << item.orbit_size << "\n";
        }
      } else if (cfg.output == Output::text) {
        for (const auto& item : r.items) {
          os << format_sequence(item.representative) << "  [" << item.orbit_size << "]\n";
        }
        os << r.items.size() << " items, " << r.total_sequences() << " sequences\n";
      } else {
        json items = json::array();
        for (const auto& item : r.items) {
          items.push_back({{"sequence", format_sequence(item.representative)},
                           {"orbit_size", item.orbit_size}});
        }
        os << json{{"command", "enumerate"},
                   {"group", spec.group.to_string()},
                   {"length", spec.length},
                   {"constraint", a.constraint},
                   {"up_to_aut", spec.up_to_aut},
                   {"items", items},
                   {"total_sequences", r.total_sequences()}}
                  .dump(2)
           << "\n";
      }
      payload = os.str();
    } else if (cl->parsed()) {
      const GroupSpec g = GroupSpec::parse(a.group);
      const Sequence s = parse_sequence(g, a.sequence);
      json j{{"command", "classify"},
             {"group", g.to_string()},
             {"sequence", format_sequence(s)},
             {"canonical", canonical_text(s)},
             {"length", s.length()},
             {"zero_sum", is_zero_sum(s)},
             {"zero_sum_free", is_zero_sum_free(s)},
             {"minimal_zero_sum", is_minimal_zero_sum(s)}};
      if (g.n1() == g.n2()) j["upsilon"] = to_string(upsilon_class(s));
      if (g.n1() >= 2 && s.length() == static_cast<std::size_t>(g.n1() + g.n2() - 1)) {
        json forms = json::array();
        for (const auto& f : classify_maximal(s)) forms.push_back(form_json(f));
        j["forms"] = forms;
      }
      payload = render_value(j, cfg);
    } else {
      CheckReport report;
      if (pb->parsed()) report = check_property_b(a.n, opts);
      if (pc->parsed()) report = check_property_c(a.n, opts);
      if (l23->parsed()) report = check_lemma_2_3_equivalence(a.n, opts);
      if (l25->parsed()) report = check_lemma_2_5(a.m, a.n, opts);
      if (cor->parsed()) report = check_corollary(GroupSpec::parse(a.group), opts);
      if (egz->parsed()) report = check_egz(a.n, a.part, opts);
      if (ham->parsed()) {
        const GroupSpec g = GroupSpec::parse(a.group);
        const std::size_t cap = a.size_cap != 0 ? a.size_cap : g.order() + 4;
        report = a.samples != 0 ? check_hamidoune_random(g, cap, a.samples, cfg.seed)
                                : check_hamidoune(g, cap, opts);
      }
      if (exch->parsed()) report = check_exchange_lemmas(GroupSpec::parse(a.group), a.max_length, opts);
      if (pert->parsed()) {
        report = check_perturbation_lemmas(a.m, parse_perturbation_lemma(a.lemma), opts);
      }
      if (p42->parsed()) report = check_proposition_4_2(a.m, a.n, opts);
      payload = render_report(report, cfg);
      code = report.holds() ? ok : property_fails;
    }
  } catch (const CapExceeded& e) {
    const json j{{"verdict", "cap_exceeded"},
                 {"message", e.what()},
                 {"nodes_visited", e.nodes_visited()},
                 {"partial_results", e.partial_results()}};
    out << render_value(j, cfg);
    return cap_exceeded;
  } catch (const Error& e) {
    err << "zslab: " << e.what() << "\n";
    return usage_error;
  }
  out << payload;
  return code;
}

}  // namespace zslab::cli
