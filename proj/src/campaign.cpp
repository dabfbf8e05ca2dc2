#include "linenet/campaign.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace linenet {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw CampaignError(path, "missing required key \"" + key + "\"");
  return obj[key];
}

std::uint64_t to_uint(const json& j, const std::string& path, std::uint64_t min) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
    throw CampaignError(path, "expected a non-negative integer");
  auto v = j.get<std::uint64_t>();
  if (v < min) throw CampaignError(path, "must be >= " + std::to_string(min));
  return v;
}

double to_prob(const json& j, const std::string& path) {
  if (!j.is_number()) throw CampaignError(path, "expected a number");
  double v = j.get<double>();
  if (!(v >= 0.0 && v <= 1.0)) throw CampaignError(path, "must be in [0, 1]");
  return v;
}

const json& nonempty_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw CampaignError(path, "expected a non-empty array");
  return j;
}

// Every value of grid key `key`, each as a list of per-link eps.
std::vector<std::vector<double>> link_sets(const json& grid, const std::string& gp) {
  std::vector<std::vector<double>> out;
  if (grid.contains("links")) {
    const auto& links = nonempty_array(grid["links"], gp + "/links");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string p = gp + "/links/" + std::to_string(i);
      const auto& l = nonempty_array(links[i], p);
      std::vector<double> eps;
      for (std::size_t j = 0; j < l.size(); ++j) eps.push_back(to_prob(l[j], p + "/" + std::to_string(j)));
      out.push_back(std::move(eps));
    }
    return out;
  }
  if (grid.contains("L") || grid.contains("eps")) {
    const auto& ls = nonempty_array(require(grid, "L", gp), gp + "/L");
    const auto& es = nonempty_array(require(grid, "eps", gp), gp + "/eps");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      auto hops = to_uint(ls[i], gp + "/L/" + std::to_string(i), 1);
      for (std::size_t j = 0; j < es.size(); ++j)
        out.emplace_back(hops, to_prob(es[j], gp + "/eps/" + std::to_string(j)));
    }
  }
  return out;
}

SchemeParams parse_params(const json& j, const std::string& path) {
  if (!j.is_object()) throw CampaignError(path, "expected an object");
  SchemeParams p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string kp = path + "/" + it.key();
    const json& v = it.value();
    if (it.key() == "c" || it.key() == "delta" || it.key() == "lt_c" || it.key() == "lt_delta" ||
        it.key() == "systematic_margin") {
      if (!v.is_number()) throw CampaignError(kp, "expected a number");
      double x = v.get<double>();
      if (it.key() == "c") p.c = x;
      if (it.key() == "delta") p.delta = x;
      if (it.key() == "lt_c") p.lt_c = x;
      if (it.key() == "lt_delta") p.lt_delta = x;
      if (it.key() == "systematic_margin") p.systematic_margin = x;
    } else if (it.key() == "q") {
      p.q = static_cast<unsigned>(to_uint(v, kp, 2));
    } else if (it.key() == "overhead_l") {
      if (!(v.is_string() && v.get<std::string>() == "auto")) p.overhead_l = to_uint(v, kp, 0);
    } else {
      throw CampaignError(kp, "unknown scheme parameter");
    }
  }
  try {
    p.validate();
  } catch (const ConfigError& e) {
    throw CampaignError(path, e.what());
  }
  return p;
}

}  // namespace

CampaignSpec parse_campaign(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw CampaignError("", "campaign must be a JSON object");
  static const char* kTop[] = {"master_seed", "trials", "payload_size", "horizon", "grid", "output"};
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(std::begin(kTop), std::end(kTop), it.key()) == std::end(kTop))
      throw CampaignError("/" + it.key(), "unknown key");
  CampaignSpec spec;
  if (doc.contains("master_seed")) spec.master_seed = to_uint(doc["master_seed"], "/master_seed", 0);
  spec.trials = to_uint(require(doc, "trials", ""), "/trials", 1);
  std::size_t payload = doc.contains("payload_size") ? to_uint(doc["payload_size"], "/payload_size", 1) : 1;
  std::optional<std::uint64_t> horizon;
  if (doc.contains("horizon")) horizon = to_uint(doc["horizon"], "/horizon", 1);
  if (doc.contains("output")) {
    const auto& out = doc["output"];
    if (!out.is_object()) throw CampaignError("/output", "expected an object");
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (!it.value().is_string()) throw CampaignError("/output/" + it.key(), "expected a string");
      if (it.key() == "csv")
        spec.csv_path = it.value().get<std::string>();
      else if (it.key() == "json")
        spec.json_path = it.value().get<std::string>();
      else
        throw CampaignError("/output/" + it.key(), "unknown key");
    }
  }

  const auto& grid = require(doc, "grid", "");
  if (!grid.is_object()) throw CampaignError("/grid", "expected an object");
  static const char* kGrid[] = {"scheme", "k", "links", "L", "eps", "dag", "params"};
  for (auto it = grid.begin(); it != grid.end(); ++it)
    if (std::find(std::begin(kGrid), std::end(kGrid), it.key()) == std::end(kGrid))
      throw CampaignError("/grid/" + it.key(), "unknown key");

  std::vector<SchemeId> schemes;
  const auto& sj = nonempty_array(require(grid, "scheme", "/grid"), "/grid/scheme");
  for (std::size_t i = 0; i < sj.size(); ++i) {
    const std::string p = "/grid/scheme/" + std::to_string(i);
    if (!sj[i].is_string()) throw CampaignError(p, "expected a scheme name");
    auto id = parse_scheme(sj[i].get<std::string>());
    if (!id) throw CampaignError(p, "unknown scheme \"" + sj[i].get<std::string>() + "\"");
    schemes.push_back(*id);
  }
  std::vector<std::size_t> ks;
  const auto& kj = nonempty_array(require(grid, "k", "/grid"), "/grid/k");
  for (std::size_t i = 0; i < kj.size(); ++i) ks.push_back(to_uint(kj[i], "/grid/k/" + std::to_string(i), 1));

  auto lines = link_sets(grid, "/grid");
  std::vector<ErasureDag> dags;
  if (grid.contains("dag")) {
    const auto& dj = nonempty_array(grid["dag"], "/grid/dag");
    for (std::size_t i = 0; i < dj.size(); ++i) {
      const std::string p = "/grid/dag/" + std::to_string(i);
      json d = dj[i];
      if (d.is_string()) {
        std::filesystem::path file = d.get<std::string>();
        if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
        std::ifstream in(file);
        if (!in) throw CampaignError(p, "cannot open DAG file " + file.string());
        try {
          d = json::parse(in);
        } catch (const json::parse_error& e) {
          throw CampaignError(p, std::string("DAG file is not valid JSON: ") + e.what());
        }
      }
      try {
        dags.push_back(dag_from_json(d));
      } catch (const ConfigError& e) {
        throw CampaignError(p, e.what());
      }
    }
  }
  if (lines.empty() && dags.empty())
    throw CampaignError("/grid", "needs \"links\", \"L\" with \"eps\", or \"dag\"");

  std::vector<SchemeParams> params{SchemeParams{}};
  if (grid.contains("params")) {
    const auto& pj = nonempty_array(grid["params"], "/grid/params");
    params.clear();
    for (std::size_t i = 0; i < pj.size(); ++i) params.push_back(parse_params(pj[i], "/grid/params/" + std::to_string(i)));
  }

  for (auto scheme : schemes)
    for (auto k : ks)
      for (const auto& prm : params) {
        auto make = [&] {
          CampaignCell cell;
          cell.config.k = k;
          cell.config.scheme = scheme;
          cell.config.params = prm;
          cell.config.payload_size = payload;
          cell.config.horizon = horizon;
          cell.config.record_events = false;
          return cell;
        };
        for (const auto& eps : lines) {
          auto cell = make();
          for (double e : eps) cell.config.links.push_back({e});
          spec.cells.push_back(std::move(cell));
        }
        for (const auto& dag : dags) {
          auto cell = make();
          for (const auto& e : dag.edges) cell.config.links.push_back({e.epsilon});
          cell.dag = dag;
          spec.cells.push_back(std::move(cell));
        }
      }
  for (std::size_t i = 0; i < spec.cells.size(); ++i) {
    try {
      if (!spec.cells[i].dag) spec.cells[i].config.validate();
    } catch (const ConfigError& e) {
      throw CampaignError("/grid", "cell " + std::to_string(i) + ": " + e.what());
    }
  }
  return spec;
}

std::vector<Aggregate> run_campaign(const CampaignSpec& spec, unsigned threads) {
  if (threads == 0) threads = default_threads();
  const std::size_t trials = spec.trials;
  std::vector<std::vector<MetricsRecord>> records(spec.cells.size(), std::vector<MetricsRecord>(trials));
  parallel_for(spec.cells.size() * trials, threads, [&](std::size_t job) {
    const std::size_t c = job / trials, t = job % trials;
    const CampaignCell& cell = spec.cells[c];
    NetworkConfig cfg = cell.config;
    cfg.seed = trial_seed(spec.master_seed, c, t);
    if (cell.dag)
      records[c][t] = run_multipath(*cell.dag, cfg.k, cfg).combined;
    else
      records[c][t] = measure(run(cfg));
  });
  std::vector<Aggregate> out;
  for (std::size_t c = 0; c < spec.cells.size(); ++c)
    out.push_back(aggregate(spec.cells[c].config, std::move(records[c])));
  return out;
}

}  // namespace linenet
