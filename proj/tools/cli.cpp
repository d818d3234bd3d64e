#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "causalinfo/causal_metrics.hpp"
#include "causalinfo/dsl.hpp"
#include "causalinfo/info_metrics.hpp"
#include "causalinfo/prop_suite.hpp"

namespace causalinfo::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Usage problems detected after flag parsing (exit 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  std::string path;
  Scm model;
};

Loaded load(const std::string& path) {
  return {path, parse_scm(read_file(path))};
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(text);
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json metadata(const Scm* model, std::uint64_t seed) {
  Json m;
  if (model) m["model_hash"] = fnv1a(serialize_scm(*model));
  m["seed"] = seed;
  m["version"] = CAUSALINFO_VERSION;
  return m;
}

std::size_t label_index(const Scm& model, const std::string& var, const std::string& label) {
  const auto idx = model.variable(var).range.index_of(label);
  if (!idx) fail(ErrorKind::BadQuery, "'" + label + "' is not in the range of " + var);
  return *idx;
}

Event parse_event(const Scm& model, const std::string& text) {
  Event event;
  for (const auto& item : split_list(text)) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("expected VAR=label in '" + item + "'");
    const std::string var = item.substr(0, eq);
    event.push_back({var, label_index(model, var, item.substr(eq + 1))});
  }
  return event;
}

Intervention parse_do(const Scm& model, const std::string& text) {
  const auto tilde = text.find('~');
  if (tilde != std::string::npos) {
    return StochasticIntervention{parse_protocol(model, text.substr(0, tilde), text.substr(tilde + 1))};
  }
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw UsageError("expected --do X=label or X~{label: p, ...}");
  const std::string var = text.substr(0, eq);
  return AtomicIntervention{var, label_index(model, var, text.substr(eq + 1))};
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json witness_json(const Witness& w, bool with_scm) {
  Json j;
  j["kind"] = w.kind;
  if (with_scm) j["scm"] = w.scm_text;
  j["intervene"] = w.intervene;
  j["protocol"] = w.protocol;
  j["target"] = w.target;
  j["given"] = w.given;
  j["relation"] = w.relation;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["seed"] = w.seed;
  j["trial"] = w.trial;
  return j;
}

Witness witness_from_json(const Json& j, const fs::path& base) {
  Witness w;
  w.kind = j.at("kind").get<std::string>();
  if (j.contains("scm")) {
    w.scm_text = j.at("scm").get<std::string>();
  } else {
    w.scm_text = read_file((base / j.at("scm_file").get<std::string>()).string());
  }
  w.intervene = j.at("intervene").get<std::string>();
  w.protocol = j.at("protocol").get<std::string>();
  w.target = j.at("target").get<std::vector<std::string>>();
  w.given = j.value("given", std::vector<std::string>{});
  w.relation = j.value("relation", std::string{});
  w.lhs = j.at("lhs").get<double>();
  w.rhs = j.at("rhs").get<double>();
  w.seed = j.value("seed", std::uint64_t{0});
  w.trial = j.value("trial", std::uint64_t{0});
  return w;
}

Json report_value(const ReportValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_bits(*d);
  return std::get<std::string>(v);
}

Json report_json(const PropReport& r) {
  Json j;
  j["prop"] = r.prop;
  j["status"] = std::string(to_string(r.status));
  j["lhs"] = report_value(r.lhs);
  j["rhs"] = report_value(r.rhs);
  j["slack"] = format_bits(r.slack);
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (r.witness) j["witness"] = witness_json(*r.witness, true);
  return j;
}

// ---- dist ---------------------------------------------------------------

struct DistArgs {
  std::string path;
  std::string vars;
  std::string intervention;
  std::string given;
  std::string format = "table";
};

int cmd_dist(const DistArgs& a, std::ostream& out) {
  const auto [path, model] = load(a.path);
  const auto vars = split_list(a.vars);
  if (vars.empty()) throw UsageError("--vars needs at least one variable");
  const Scm post = a.intervention.empty() ? model : causalinfo::apply(model, parse_do(model, a.intervention));
  const Event event = a.given.empty() ? Event{} : parse_event(post, a.given);

  std::vector<std::string> scope = vars;
  for (const auto& e : event) {
    if (std::find(vars.begin(), vars.end(), e.id) != vars.end()) {
      fail(ErrorKind::BadQuery, "variable " + e.id + " appears in both --vars and --given");
    }
    scope.push_back(e.id);
  }
  Pmf p = entailed(post, scope);
  if (!event.empty()) p = condition(p, event);
  p = reorder(marginalize(p, vars), vars);

  Json query;
  query["model"] = model.name();
  query["vars"] = vars;
  if (!a.intervention.empty()) query["do"] = a.intervention;
  if (!a.given.empty()) query["given"] = a.given;

  if (a.format == "json") {
    Json rows = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto t = p.tuple_of(i);
      Json values;
      for (std::size_t k = 0; k < t.size(); ++k) values[p.scope()[k].id] = p.scope()[k].range.label(t[k]);
      rows.push_back({{"values", values}, {"p", to_string(p.masses()[i])}});
    }
    Json j;
    j["query"] = query;
    j["quantity"] = "dist";
    j["value"] = rows;
    j["metadata"] = metadata(&model, 0);
    out << j.dump(2) << '\n';
    return kOk;
  }
  const bool csv = a.format == "csv";
  std::vector<std::vector<std::string>> table;
  table.push_back(vars);
  table.back().push_back("p");
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto t = p.tuple_of(i);
    std::vector<std::string> row;
    for (std::size_t k = 0; k < t.size(); ++k) row.push_back(p.scope()[k].range.label(t[k]));
    row.push_back(to_string(p.masses()[i]));
    table.push_back(std::move(row));
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t k = 0; k < row.size(); ++k) width[k] = std::max(width[k], row[k].size());
  }
  for (const auto& row : table) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (csv) {
        out << (k ? "," : "") << csv_cell(row[k]);
      } else {
        out << (k ? "  " : "") << row[k];
        if (k + 1 < row.size()) out << std::string(width[k] - row[k].size(), ' ');
      }
    }
    out << '\n';
  }
  return kOk;
}

// ---- quantity -----------------------------------------------------------

struct QuantityArgs {
  std::string path;
  std::string quantity;
  std::string target;
  std::string other;
  std::string intervene;
  std::string protocol;
  std::string given;
  std::string format = "table";
};

int cmd_quantity(const QuantityArgs& a, std::ostream& out) {
  const auto [path, model] = load(a.path);
  const auto target = split_list(a.target);
  const auto other = split_list(a.other);
  const auto given = split_list(a.given);
  const std::string& q = a.quantity;
  if (target.empty()) throw UsageError("--target is required");

  const bool causal = q == "Hc" || q == "Ic" || q == "HcCond" || q == "IcCond" || q == "MIc";
  const bool needs_given = q == "Hcond" || q == "CMI" || q == "HcCond" || q == "IcCond" || q == "MIc";
  const bool needs_other = q == "MI" || q == "CMI";
  if (needs_given && given.empty()) throw UsageError("--quantity " + q + " needs --given");
  if (!needs_given && !given.empty()) throw UsageError("--quantity " + q + " takes no --given");
  if (needs_other && other.empty()) throw UsageError("--quantity " + q + " needs --other");
  if (causal && (a.intervene.empty() || a.protocol.empty())) {
    throw UsageError("--quantity " + q + " needs --intervene and --protocol");
  }

  Json query;
  query["model"] = model.name();
  query["target"] = target;
  if (!other.empty()) query["other"] = other;
  if (causal) {
    query["intervene"] = a.intervene;
    query["protocol"] = a.protocol;
  }
  if (!given.empty()) query["given"] = given;

  double value = 0.0;
  std::optional<CausalEntropyCheck> methods;
  const auto joined = [](std::vector<std::string> x, const std::vector<std::string>& y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  };
  if (causal) {
    const Protocol protocol = parse_protocol(model, a.intervene, a.protocol);
    const CausalQuery cq{model, target, a.intervene, protocol, given};
    if (q == "Hc") {
      methods = causal_entropy_all(cq);
      value = methods->definition;
    } else if (q == "Ic") {
      value = causal_information_gain(cq);
    } else if (q == "HcCond") {
      value = conditional_causal_entropy(cq);
    } else if (q == "IcCond") {
      value = conditional_causal_information_gain(cq);
    } else {
      value = post_intervention_mutual_information(cq);
    }
  } else if (q == "H") {
    value = entropy(entailed(model, target));
  } else if (q == "Hcond") {
    value = cond_entropy(entailed(model, joined(target, given)), given);
  } else if (q == "MI") {
    value = mutual_information(entailed(model, joined(target, other)), target, other);
  } else if (q == "CMI") {
    value = cond_mutual_information(entailed(model, joined(joined(target, other), given)), target, other, given);
  } else {
    throw UsageError("unknown quantity '" + q + "'");
  }

  if (a.format == "json") {
    Json j;
    j["query"] = query;
    j["quantity"] = q;
    j["value"] = format_bits(value);
    if (methods) {
      j["methods"] = {{"definition", format_bits(methods->definition)},
                      {"plug_in", format_bits(methods->plug_in)},
                      {"covariate_specific", format_bits(methods->covariate_specific)}};
      j["max_slack"] = format_bits(methods->max_slack);
    }
    j["metadata"] = metadata(&model, 0);
    out << j.dump(2) << '\n';
  } else if (a.format == "csv") {
    out << "quantity,value";
    if (methods) out << ",definition,plug_in,covariate_specific,max_slack";
    out << '\n' << q << ',' << format_bits(value);
    if (methods) {
      out << ',' << format_bits(methods->definition) << ',' << format_bits(methods->plug_in) << ','
          << format_bits(methods->covariate_specific) << ',' << format_bits(methods->max_slack);
    }
    out << '\n';
  } else {
    out << q << " = " << format_bits(value) << '\n';
    if (methods) {
      out << "  definition          " << format_bits(methods->definition) << '\n'
          << "  plug_in             " << format_bits(methods->plug_in) << '\n'
          << "  covariate_specific  " << format_bits(methods->covariate_specific) << '\n'
          << "  max_slack           " << format_bits(methods->max_slack) << '\n';
    }
  }
  return kOk;
}

// ---- check --------------------------------------------------------------

struct CheckArgs {
  std::string path;
  std::string intervene;
  std::string protocol;
  std::uint64_t seed = 0;
  unsigned queries = 3;
  unsigned jobs = 1;
};

int cmd_check(const CheckArgs& a, std::ostream& out, std::ostream& err) {
  const auto [path, model] = load(a.path);
  const std::string x = a.intervene.empty() ? model.endogenous().front().id : a.intervene;
  const Protocol protocol = parse_protocol(model, x, a.protocol);
  const auto reports = check_all(model, protocol, {a.seed, a.queries, a.jobs});
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : reports) {
    out << report_json(r).dump() << '\n';
    ++counts[static_cast<int>(r.status)];
  }
  err << path << ": " << counts[0] << " pass, " << counts[1] << " fail, " << counts[2] << " info\n";
  return counts[1] == 0 ? kOk : kDomain;
}

// ---- hunt ---------------------------------------------------------------

struct HuntArgs {
  std::string kind;
  std::uint64_t seed = 0;
  std::uint64_t budget = 10'000;
  std::size_t max_witnesses = 1;
  std::string out_dir;
  unsigned jobs = 1;
  bool no_shrink = false;
  std::string from;
  std::string intervene;
  std::string protocol;
  std::string target;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw IoError("cannot write '" + path.string() + "'");
}

int cmd_hunt(const HuntArgs& a, std::ostream& out, std::ostream& err) {
  const auto kind = parse_hunt_kind(a.kind);
  if (!kind) throw UsageError("--kind must be negative-gain or dpi");
  if (!a.out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec || !fs::is_directory(a.out_dir)) throw IoError("cannot create output directory '" + a.out_dir + "'");
    const fs::path probe = fs::path(a.out_dir) / ".causalinfo-probe";
    write_file(probe, "");
    fs::remove(probe, ec);
  }
  HuntOptions options;
  options.budget = a.budget;
  options.max_witnesses = a.max_witnesses;
  options.jobs = a.jobs;
  options.shrink = !a.no_shrink;
  if (!a.from.empty()) {
    const auto [path, model] = load(a.from);
    if (a.intervene.empty() || a.protocol.empty() || a.target.empty()) {
      throw UsageError("--from needs --intervene, --protocol and --target");
    }
    options.candidates.push_back({model, parse_protocol(model, a.intervene, a.protocol), split_list(a.target)});
  }
  GenConfig cfg;
  cfg.seed = a.seed;
  const auto witnesses = hunt(*kind, cfg, options);
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    const Witness& w = witnesses[i];
    out << witness_json(w, true).dump() << '\n';
    if (a.out_dir.empty()) continue;
    const std::string stem = "witness_" + std::to_string(i + 1);
    Json sidecar = witness_json(w, false);
    sidecar["scm_file"] = stem + ".scm";
    sidecar["metadata"] = metadata(nullptr, a.seed);
    write_file(fs::path(a.out_dir) / (stem + ".scm"), w.scm_text);
    write_file(fs::path(a.out_dir) / (stem + ".json"), sidecar.dump(2) + "\n");
  }
  err << a.kind << ": " << witnesses.size() << " witness(es) within budget " << a.budget << '\n';
  return witnesses.empty() ? kHuntEmpty : kOk;
}

// ---- replay -------------------------------------------------------------

int cmd_replay(const std::string& path, std::ostream& out) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed witness JSON: ") + e.what());
  }
  const Witness w = witness_from_json(j, fs::path(path).parent_path());
  const ReplayResult r = replay(w);
  const bool same = std::abs(r.lhs - w.lhs) <= 1e-12 && std::abs(r.rhs - w.rhs) <= 1e-12;
  Json result;
  result["kind"] = w.kind;
  result["lhs"] = format_bits(r.lhs);
  result["rhs"] = format_bits(r.rhs);
  result["reproduced"] = r.reproduced && same;
  out << result.dump() << '\n';
  return r.reproduced && same ? kOk : kDomain;
}

void print_parse_error(const std::string& path, const ParseError& e, std::ostream& err) {
  for (const auto& d : e.diagnostics()) err << path << ':' << format_diagnostic(d) << '\n';
}

}  // namespace

std::string format_bits(double bits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", bits);
  std::string s = buf;
  if (s.rfind("-0.", 0) == 0 && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact causal entropy and causal information gain for finite structural causal models",
               "causalinfo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CAUSALINFO_VERSION);
  const auto formats = CLI::IsMember({"table", "json", "csv"});

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a model file; report problems with source spans");
  validate->add_option("path", validate_path, "Model file")->required();

  std::string format_path;
  auto* format = app.add_subcommand("format", "Print a model in canonical form");
  format->add_option("path", format_path, "Model file")->required();

  DistArgs dist_args;
  auto* dist = app.add_subcommand("dist", "Print an exact (post-intervention, conditioned) marginal");
  dist->add_option("path", dist_args.path, "Model file")->required();
  dist->add_option("--vars", dist_args.vars, "Comma-separated variables")->required();
  dist->add_option("--do", dist_args.intervention, "X=label or X~{label: p, ...}");
  dist->add_option("--given", dist_args.given, "Z=label[,W=label]; applied after --do");
  dist->add_option("--format", dist_args.format)->check(formats);

  QuantityArgs q_args;
  auto* quantity = app.add_subcommand("quantity", "Compute an information quantity in bits");
  quantity->add_option("path", q_args.path, "Model file")->required();
  quantity->add_option("--quantity", q_args.quantity)
      ->required()
      ->check(CLI::IsMember({"H", "Hcond", "MI", "CMI", "Hc", "Ic", "HcCond", "IcCond", "MIc"}));
  quantity->add_option("--target", q_args.target, "Comma-separated target variables");
  quantity->add_option("--other", q_args.other, "Second argument of MI/CMI");
  quantity->add_option("--intervene", q_args.intervene, "Intervened variable");
  quantity->add_option("--protocol", q_args.protocol, "Protocol pmf, e.g. {0: 2/3, 1: 1/3}");
  quantity->add_option("--given", q_args.given, "Comma-separated conditioning variables");
  quantity->add_option("--format", q_args.format)->check(formats);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Run the proposition checklist; JSON lines on stdout");
  check->add_option("path", check_args.path, "Model file")->required();
  check->add_option("--protocol", check_args.protocol, "Protocol pmf")->required();
  check->add_option("--intervene", check_args.intervene, "Intervened variable (default: first declared)");
  check->add_option("--seed", check_args.seed, "Query-selection seed");
  check->add_option("--queries", check_args.queries, "Random queries per run")->check(CLI::Range(0U, 1000U));
  check->add_option("--jobs", check_args.jobs)->check(CLI::Range(1U, 256U));

  HuntArgs hunt_args;
  auto* hunt_cmd = app.add_subcommand("hunt", "Search random models for counterexamples");
  hunt_cmd->add_option("--kind", hunt_args.kind, "negative-gain or dpi")
      ->required()
      ->check(CLI::IsMember({"negative-gain", "dpi"}));
  hunt_cmd->add_option("--seed", hunt_args.seed);
  hunt_cmd->add_option("--budget", hunt_args.budget, "Number of generated trials");
  hunt_cmd->add_option("--max-witnesses", hunt_args.max_witnesses)->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  hunt_cmd->add_option("--out", hunt_args.out_dir, "Directory for witness_N.scm / witness_N.json");
  hunt_cmd->add_option("--jobs", hunt_args.jobs)->check(CLI::Range(1U, 256U));
  hunt_cmd->add_flag("--no-shrink", hunt_args.no_shrink);
  hunt_cmd->add_option("--from", hunt_args.from, "Model tried before generated trials");
  hunt_cmd->add_option("--intervene", hunt_args.intervene);
  hunt_cmd->add_option("--protocol", hunt_args.protocol);
  hunt_cmd->add_option("--target", hunt_args.target);

  std::string replay_path;
  auto* replay_cmd = app.add_subcommand("replay", "Recompute a witness JSON record");
  replay_cmd->add_option("path", replay_path, "Witness JSON file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  std::string current = validate_path;
  try {
    if (*validate) {
      const Scm model = parse_scm(read_file(validate_path));
      err << validate_path << ": ok (" << model.name() << ", " << model.endogenous().size() << " endogenous)\n";
      return kOk;
    }
    if (*format) {
      current = format_path;
      out << serialize_scm(parse_scm(read_file(format_path)));
      return kOk;
    }
    if (*dist) {
      current = dist_args.path;
      return cmd_dist(dist_args, out);
    }
    if (*quantity) {
      current = q_args.path;
      return cmd_quantity(q_args, out);
    }
    if (*check) {
      current = check_args.path;
      return cmd_check(check_args, out, err);
    }
    if (*hunt_cmd) {
      current = hunt_args.from.empty() ? "<flags>" : hunt_args.from;
      return cmd_hunt(hunt_args, out, err);
    }
    current = replay_path;
    return cmd_replay(replay_path, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    print_parse_error(current, e, err);
    return kDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace causalinfo::cli
