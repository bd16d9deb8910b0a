#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "zentropy/zentropy.hpp"

namespace zentropy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string hash_config(const json& doc) {
  const std::string canonical = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Number as it appears in CSV output, re-read so JSON carries the same digits.
json rounded(double v) { return std::stod(format_number(v)); }

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

const json& require_block(const json& doc, const char* name) {
  if (!doc.contains(name) || !doc.at(name).is_object())
    throw ConfigError(std::string("missing \"") + name + "\" block");
  return doc.at(name);
}

Cell parse_cell(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("cells are [x, y] pairs");
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

GridWorld parse_grid(const json& doc) {
  const json& g = require_block(doc, "grid");
  const double slip = get_or(g, "slip", 0.0);
  if (g.contains("preset")) {
    const auto preset = g.at("preset").get<std::string>();
    if (preset != "corridor") throw ConfigError("unknown grid preset '" + preset + "'");
    const int length = get_or(g, "length", 5);
    Cell start{0, 0};
    if (g.contains("start")) start = parse_cell(g.at("start"));
    return {length, 1, {}, {length - 1, 0}, start, slip};
  }
  std::set<Cell> walls;
  if (g.contains("walls"))
    for (const auto& w : g.at("walls")) walls.insert(parse_cell(w));
  return {g.at("width").get<int>(), g.at("height").get<int>(), std::move(walls), parse_cell(g.at("goal")),
          parse_cell(g.at("start")), slip};
}

EstimatorConfig parse_estimator(const json& doc, std::uint64_t seed) {
  EstimatorConfig est;
  est.seed = seed;
  if (!doc.contains("estimator")) return est;
  const json& e = doc.at("estimator");
  const auto backend = get_or<std::string>(e, "backend", "exact");
  if (backend == "exact") est.backend = Backend::exact;
  else if (backend == "mc" || backend == "monte-carlo") est.backend = Backend::monte_carlo;
  else throw ConfigError("estimator.backend must be \"exact\" or \"mc\"");
  est.n_samples = get_or<std::size_t>(e, "n_samples", est.n_samples);
  est.bootstrap_resamples = get_or<std::size_t>(e, "bootstrap_resamples", est.bootstrap_resamples);
  return est;
}

Action parse_action_or_throw(const std::string& s) {
  auto a = parse_action(s);
  if (!a) throw ConfigError("unknown action '" + s + "'");
  return *a;
}

Policy parse_follow(const std::string& name, const GridWorld& g) {
  if (name == "uniform") return Policy::uniform(g);
  const std::string prefix = "always-";
  if (name.rfind(prefix, 0) == 0) return Policy::always(g, parse_action_or_throw(name.substr(prefix.size())));
  throw ConfigError("follow policy must be \"uniform\" or \"always-<action>\"");
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

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

struct AttributionRow {
  std::string event;
  std::string description;
  Horizon horizon;
  double z = 0.0;
  std::string classification;
  double std_error = 0.0;
  std::string method;
};

AttributionRow attribution_row(const ZEstimate& z, std::string description, double tol) {
  return {z.event, std::move(description), z.horizon, z.value,
          std::string(to_string(classify_event(z, tol))), z.std_error, std::string(to_string(z.method))};
}

// Collects the files of one run; every file carries the config hash.
class RunWriter {
public:
  explicit RunWriter(const RunConfig& cfg) : cfg_(cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  }

  void csv(const std::string& name, const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    if (!cfg_.write_csv) return;
    std::ostringstream os;
    os << "# zentropy " << cfg_.subcommand << " config_hash=" << cfg_.config_hash << " seed=" << cfg_.seed << "\n";
    write_row(os, header);
    for (const auto& r : rows) write_row(os, r);
    put(name, os.str());
  }

  void json_file(const std::string& name, json body, bool always = false) {
    if (!cfg_.write_json && !always) return;
    body["config_hash"] = cfg_.config_hash;
    body["seed"] = cfg_.seed;
    put(name, body.dump(2) + "\n");
  }

  void attribution(const std::vector<AttributionRow>& rows) {
    std::vector<std::vector<std::string>> table;
    json arr = json::array();
    for (const auto& r : rows) {
      table.push_back({r.event, r.description, std::to_string(r.horizon.t0), std::to_string(r.horizon.t),
                       format_number(r.z), r.classification, format_number(r.std_error), r.method});
      arr.push_back({{"event", r.event},
                     {"description", r.description},
                     {"t0", r.horizon.t0},
                     {"t", r.horizon.t},
                     {"z_bits", rounded(r.z)},
                     {"classification", r.classification},
                     {"std_error", rounded(r.std_error)},
                     {"method", r.method}});
    }
    csv("attribution.csv", {"event", "description", "t0", "t", "z_bits", "classification", "std_error", "method"},
        table);
    json_file("attribution.json", {{"tolerance", rounded(cfg_.tolerance)}, {"rows", arr}});
  }

  // run.json goes last so it lists every file of the run.
  void finish() {
    json meta{{"subcommand", cfg_.subcommand}, {"files", files_}, {"config", cfg_.doc}};
    files_.push_back("run.json");
    json_file("run.json", meta, true);
  }

private:
  static void write_row(std::ostream& os, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) os << ',';
      os << csv_field(fields[i]);
    }
    os << '\n';
  }

  void put(const std::string& name, const std::string& content) {
    std::ofstream f(cfg_.out_dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + (cfg_.out_dir / name).string());
    f << content;
    files_.push_back(name);
  }

  const RunConfig& cfg_;
  std::vector<std::string> files_;
};

std::string cell_label(const GridWorld& g, std::size_t i) { return GridWorld::label(g.cell(i)); }

}  // namespace

RunConfig load_config(const Invocation& inv) {
  if (!inv.config) throw ConfigError("--config is required");
  std::ifstream f(*inv.config);
  if (!f) throw ConfigError("cannot read config " + inv.config->string());
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  RunConfig cfg;
  cfg.subcommand = inv.subcommand;
  require_block(doc, inv.subcommand.c_str());
  if (inv.seed) cfg.seed = *inv.seed;
  else if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
  else throw ConfigError("no seed: set \"seed\" in the config or pass --seed");
  doc["seed"] = cfg.seed;

  fs::path out = ".";
  if (doc.contains("output") && doc.at("output").contains("dir")) out = doc.at("output").at("dir").get<std::string>();
  if (inv.out) out = *inv.out;
  if (const char* env = std::getenv("ZENTROPY_OUT"); env && *env) out = env;
  cfg.out_dir = out;

  if (doc.contains("output") && doc.at("output").contains("formats")) {
    cfg.write_csv = cfg.write_json = false;
    for (const auto& fmt : doc.at("output").at("formats")) {
      const auto s = fmt.get<std::string>();
      if (s == "csv") cfg.write_csv = true;
      else if (s == "json") cfg.write_json = true;
      else throw ConfigError("unknown output format '" + s + "'");
    }
    if (!cfg.write_csv && !cfg.write_json) throw ConfigError("output.formats is empty");
  }
  cfg.tolerance = get_or(doc, "tolerance", kDefaultNeutralTolerance);
  if (!(cfg.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");

  // The hash covers everything that determines results, not where they go.
  json hashed = doc;
  if (hashed.contains("output")) hashed["output"].erase("dir");
  hashed["subcommand"] = inv.subcommand;
  cfg.config_hash = hash_config(hashed);
  cfg.doc = std::move(doc);
  return cfg;
}

void cmd_gridworld(const RunConfig& cfg, std::ostream& log) {
  const GridWorld g = parse_grid(cfg.doc);
  const json& block = cfg.doc.at("gridworld");
  const int k = get_or(block, "horizon", 2);
  const Policy follow = parse_follow(get_or<std::string>(block, "follow", "uniform"), g);
  std::vector<Action> actions(kAllActions.begin(), kAllActions.end());
  if (block.contains("actions")) {
    actions.clear();
    for (const auto& a : block.at("actions")) actions.push_back(parse_action_or_throw(a.get<std::string>()));
  }
  const Cell at = block.contains("at") ? parse_cell(block.at("at")) : g.start();
  const EstimatorConfig est = parse_estimator(cfg.doc, cfg.seed);

  std::vector<std::vector<std::string>> table;
  json rows = json::array();
  std::vector<AttributionRow> attribution;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (g.is_wall(i)) continue;
    const Cell c = g.cell(i);
    EstimatorConfig local = est;
    local.seed = derive_seed(est.seed, i);
    const auto scores = action_z_scores(g, c, follow, k, local, actions);
    for (std::size_t r = 0; r < scores.size(); ++r) {
      const auto& s = scores[r];
      const auto cls = std::string(to_string(classify_event(s.z, cfg.tolerance)));
      table.push_back({std::to_string(c.x), std::to_string(c.y), std::string(to_string(s.action)),
                       format_number(s.z.value), format_number(s.z.std_error), std::string(to_string(s.z.method)),
                       std::to_string(r + 1), cls});
      rows.push_back({{"x", c.x},
                      {"y", c.y},
                      {"action", to_string(s.action)},
                      {"z_bits", rounded(s.z.value)},
                      {"std_error", rounded(s.z.std_error)},
                      {"method", to_string(s.z.method)},
                      {"rank", r + 1},
                      {"classification", cls}});
      if (c == at)
        attribution.push_back(attribution_row(
            s.z, "take action " + std::string(to_string(s.action)) + " at cell " + cell_label(g, i), cfg.tolerance));
    }
  }
  if (attribution.empty()) throw error(errc::cell_is_wall, "attribution cell is not an open cell");

  RunWriter out(cfg);
  out.csv("gridworld_z.csv", {"x", "y", "action", "z_bits", "std_error", "method", "rank", "classification"}, table);
  out.json_file("gridworld_z.json", {{"horizon", k}, {"map", render_ascii(g)}, {"rows", rows}});
  out.attribution(attribution);
  out.finish();
  log << render_ascii(g);
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
  const GridWorld g = parse_grid(cfg.doc);
  const json& block = cfg.doc.at("train");
  TrainConfig tc;
  tc.episodes = get_or(block, "episodes", tc.episodes);
  tc.max_steps = get_or(block, "max_steps", tc.max_steps);
  tc.epsilon = get_or(block, "epsilon", tc.epsilon);
  tc.alpha = get_or(block, "alpha", tc.alpha);
  tc.gamma = get_or(block, "gamma", tc.gamma);
  tc.seed = cfg.seed;
  ShapingConfig sc;
  if (cfg.doc.contains("shaping")) {
    const json& s = cfg.doc.at("shaping");
    sc.beta = get_or(s, "beta", sc.beta);
    sc.horizon_k = get_or(s, "horizon_k", sc.horizon_k);
    sc.recompute_every = get_or(s, "recompute_every", sc.recompute_every);
    const auto zp = get_or<std::string>(s, "z_policy", std::string(to_string(sc.z_policy)));
    if (zp == "current-greedy") sc.z_policy = ZPolicy::current_greedy;
    else if (zp == "fixed-uniform") sc.z_policy = ZPolicy::fixed_uniform;
    else throw ConfigError("shaping.z_policy must be \"current-greedy\" or \"fixed-uniform\"");
  }

  const TrainResult r = train(g, sc, tc);

  std::vector<std::vector<std::string>> episodes;
  for (std::size_t e = 0; e < r.returns.size(); ++e)
    episodes.push_back({std::to_string(e), format_number(r.returns[e]), std::to_string(r.steps[e]),
                        format_number(r.mean_intrinsic[e])});
  std::vector<std::vector<std::string>> policy;
  json greedy = json::array();
  if (tc.episodes > 0) {
    for (std::size_t i = 0; i < r.greedy.size(); ++i) {
      if (!r.greedy[i]) continue;
      const Cell c = g.cell(i);
      policy.push_back({std::to_string(c.x), std::to_string(c.y), std::string(to_string(*r.greedy[i]))});
      greedy.push_back({{"x", c.x}, {"y", c.y}, {"action", to_string(*r.greedy[i])}});
    }
  }
  json snapshots = json::array();
  for (const auto& s : r.snapshots) {
    json cells = json::array();
    for (std::size_t i = 0; i < s.z.size(); ++i) {
      if (g.is_wall(i) || g.is_goal(i)) continue;
      json z = json::object();
      for (auto a : kAllActions) z[std::string(to_string(a))] = rounded(s.z[i][static_cast<std::size_t>(a)]);
      cells.push_back({{"cell", cell_label(g, i)}, {"z_bits", z}});
    }
    snapshots.push_back({{"episode", s.episode}, {"cells", cells}});
  }
  json record{{"episodes", tc.episodes},
              {"returns", json::array()},
              {"steps", r.steps},
              {"mean_intrinsic", json::array()},
              {"greedy_policy", greedy},
              {"z_snapshots", snapshots}};
  for (double v : r.returns) record["returns"].push_back(rounded(v));
  for (double v : r.mean_intrinsic) record["mean_intrinsic"].push_back(rounded(v));

  RunWriter out(cfg);
  out.csv("train.csv", {"episode", "return", "steps", "mean_intrinsic"}, episodes);
  out.csv("policy.csv", {"x", "y", "greedy_action"}, policy);
  out.json_file("train.json", record);
  out.finish();
  log << "trained " << tc.episodes << " episodes\n";
}

void cmd_bayes(const RunConfig& cfg, std::ostream& log) {
  const json& block = cfg.doc.at("bayes");
  const auto points = get_or<std::size_t>(block, "grid_points", 101);
  GridPosterior prior = GridPosterior::uniform(points);
  if (block.contains("prior") && block.at("prior").is_array())
    prior = GridPosterior(prior.grid(), block.at("prior").get<std::vector<double>>());
  else if (block.contains("prior") && block.at("prior") != "uniform")
    throw ConfigError("bayes.prior must be \"uniform\" or a weight list");

  std::vector<QueryCandidate> queries;
  if (block.contains("queries")) {
    for (const auto& q : block.at("queries"))
      queries.push_back({q.at("id").get<std::string>(), {get_or(q, "noise", 0.0)}});
  }
  const ObservationModel data_model{get_or(block, "data_noise", 0.0)};

  std::vector<std::vector<std::string>> table;
  json ranked = json::array();
  if (!queries.empty()) {
    const auto scores = rank_queries(prior, queries);
    for (std::size_t r = 0; r < scores.size(); ++r) {
      const auto& s = scores[r];
      table.push_back({std::to_string(r + 1), s.query.id, format_number(s.query.model.noise),
                       format_number(s.expected_z.value), format_number(s.mutual_information)});
      ranked.push_back({{"rank", r + 1},
                        {"id", s.query.id},
                        {"noise", rounded(s.query.model.noise)},
                        {"expected_z_bits", rounded(s.expected_z.value)},
                        {"mutual_information_bits", rounded(s.mutual_information)}});
    }
  }

  std::vector<AttributionRow> attribution;
  GridPosterior belief = prior;
  if (block.contains("data")) {
    int t = 0;
    for (const auto& d : block.at("data")) {
      const auto text = d.get<std::string>();
      const auto outcome = parse_coin(text);
      if (!outcome) throw ConfigError("unknown data outcome '" + text + "'");
      auto z = realized_event_potential(belief, data_model, *outcome, Horizon{t, t + 1});
      z.event = "datum" + std::to_string(t) + ":" + std::string(to_string(*outcome));
      attribution.push_back(attribution_row(z, "observe " + std::string(to_string(*outcome)), cfg.tolerance));
      belief = posterior_update(belief, data_model, *outcome);
      ++t;
    }
  }

  RunWriter out(cfg);
  out.csv("queries.csv", {"rank", "id", "noise", "expected_z_bits", "mutual_information_bits"}, table);
  out.json_file("queries.json", {{"grid_points", points},
                                 {"prior_entropy_bits", rounded(prior.entropy())},
                                 {"queries", ranked}});
  out.attribution(attribution);
  out.finish();
  log << "ranked " << queries.size() << " queries, attributed " << attribution.size() << " data events\n";
}

void cmd_anomaly(const RunConfig& cfg, std::istream& input, std::ostream& log) {
  const json& block = cfg.doc.at("anomaly");
  DetectorConfig dc;
  dc.window = get_or(block, "window", dc.window);
  dc.bins = get_or(block, "bins", dc.bins);
  if (block.contains("range")) {
    const auto range = block.at("range").get<std::vector<double>>();
    if (range.size() != 2) throw ConfigError("anomaly.range is [lo, hi]");
    dc.range_lo = range[0];
    dc.range_hi = range[1];
  }
  dc.kappa = get_or(block, "kappa", dc.kappa);
  dc.warmup = get_or(block, "warmup", dc.window);
  dc.smoothing = get_or(block, "smoothing", dc.smoothing);
  dc.validate();

  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(input, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v))
      throw ConfigError("input line " + std::to_string(lineno) + " is not a finite number");
    values.push_back(v);
  }
  if (input.bad()) throw ConfigError("error reading input stream");

  const auto scores = replay(values, dc);
  std::vector<std::vector<std::string>> table;
  std::vector<AttributionRow> attribution;
  std::size_t flags = 0;
  std::optional<std::size_t> first_flag;
  for (const auto& s : scores) {
    table.push_back({std::to_string(s.index), format_number(s.value), std::to_string(s.bin), format_number(s.z.value),
                     format_number(s.rolling_mean), format_number(s.rolling_std), s.flagged ? "1" : "0"});
    if (s.flagged) {
      ++flags;
      if (!first_flag) first_flag = s.index;
      attribution.push_back(attribution_row(s.z, "sensor value " + format_number(s.value) + " (flagged)", cfg.tolerance));
    }
  }

  RunWriter out(cfg);
  out.csv("scores.csv", {"index", "value", "bin", "z_bits", "rolling_mean", "rolling_std", "flagged"}, table);
  out.json_file("summary.json",
                {{"events", values.size()},
                 {"flag_count", flags},
                 {"first_flag_index", first_flag ? json(*first_flag) : json(nullptr)}},
                true);
  out.attribution(attribution);
  out.finish();
  log << "scored " << values.size() << " events, " << flags << " flagged\n";
}

void cmd_report(const fs::path& run_dir, std::ostream& out) {
  const fs::path meta_path = run_dir / "run.json";
  std::ifstream meta_file(meta_path);
  if (!meta_file) throw MissingRun("no run found in " + run_dir.string());
  json meta;
  try {
    meta = json::parse(meta_file);
  } catch (const json::parse_error&) {
    throw MissingRun("unreadable run.json in " + run_dir.string());
  }
  const auto hash = get_or<std::string>(meta, "config_hash", "");
  if (hash.empty()) throw MissingRun("run.json has no config hash");

  for (const auto& entry : fs::directory_iterator(run_dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    std::string found;
    if (ext == ".csv") {
      std::ifstream f(entry.path());
      std::string first;
      std::getline(f, first);
      const auto pos = first.find("config_hash=");
      if (pos != std::string::npos) found = first.substr(pos + 12, 16);
    } else if (ext == ".json") {
      std::ifstream f(entry.path());
      try {
        found = get_or<std::string>(json::parse(f), "config_hash", "");
      } catch (const json::exception&) {
      }
    } else {
      continue;
    }
    if (found != hash)
      throw std::runtime_error("mixed runs: " + entry.path().filename().string() + " does not carry config hash " + hash);
  }

  std::vector<AttributionRow> rows;
  if (std::ifstream f(run_dir / "attribution.csv"); f) {
    std::string line;
    std::getline(f, line);  // hash comment
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      const auto v = split_csv_line(line);
      if (v.size() != 8) throw std::runtime_error("malformed attribution row: " + line);
      rows.push_back({v[0], v[1], {std::stoi(v[2]), std::stoi(v[3])}, std::stod(v[4]), v[5], std::stod(v[6]), v[7]});
    }
  } else if (std::ifstream jf(run_dir / "attribution.json"); jf) {
    for (const auto& r : json::parse(jf).at("rows"))
      rows.push_back({r.at("event"), r.at("description"), {r.at("t0").get<int>(), r.at("t").get<int>()},
                      r.at("z_bits").get<double>(), r.at("classification"), r.at("std_error").get<double>(),
                      r.at("method")});
  } else {
    throw MissingRun("no attribution report in " + run_dir.string());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const AttributionRow& a, const AttributionRow& b) {
    if (a.z != b.z) return a.z < b.z;
    return a.event < b.event;
  });

  out << "run: " << get_or<std::string>(meta, "subcommand", "?") << "  config_hash: " << hash
      << "  seed: " << meta.at("seed").get<std::uint64_t>() << "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-18s %8s %16s %-11s %12s %s\n", "event", "horizon", "z_bits", "class",
                "std_error", "method");
  out << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-18s %8d %16s %-11s %12s %s\n", r.event.c_str(), r.horizon.t,
                  format_number(r.z).c_str(), r.classification.c_str(), format_number(r.std_error).c_str(),
                  r.method.c_str());
    out << buf;
  }
  out << "\n";
  for (const auto& r : rows) {
    out << "event " << r.event << " (" << r.description << ") changed uncertainty by " << format_number(r.z)
        << " bits at horizon " << r.horizon.t << ": " << r.classification << "\n";
  }
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    if (inv.subcommand == "report") {
      fs::path dir = inv.out ? *inv.out : fs::path(".");
      if (const char* env = std::getenv("ZENTROPY_OUT"); env && *env) dir = env;
      cmd_report(dir, out);
      return kExitOk;
    }
    const RunConfig cfg = load_config(inv);
    if (inv.subcommand == "gridworld") cmd_gridworld(cfg, err);
    else if (inv.subcommand == "train") cmd_train(cfg, err);
    else if (inv.subcommand == "bayes") cmd_bayes(cfg, err);
    else if (inv.subcommand == "anomaly") {
      if (inv.input && inv.input->string() != "-") {
        std::ifstream f(*inv.input);
        if (!f) throw ConfigError("cannot read input " + inv.input->string());
        cmd_anomaly(cfg, f, err);
      } else {
        cmd_anomaly(cfg, std::cin, err);
      }
    } else {
      throw ConfigError("unknown subcommand '" + inv.subcommand + "'");
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "zentropy: " << e.what() << "\n";
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "zentropy: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "zentropy: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace zentropy::cli
