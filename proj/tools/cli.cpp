#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cyclesim/c6_reduction.hpp"
#include "cyclesim/clique_girth.hpp"
#include "cyclesim/clique_listing.hpp"
#include "cyclesim/congest_cycles.hpp"
#include "cyclesim/edge_list.hpp"
#include "cyclesim/errors.hpp"
#include "cyclesim/generators.hpp"
#include "cyclesim/oracles.hpp"
#include "cyclesim/rng.hpp"
#include "json.hpp"

using namespace cyclesim;
using nlohmann::ordered_json;

namespace {

struct Config {
  std::string command;
  std::string colors;
  std::string graph, gen, pattern = "C4", mode = "priority", format = "json", out;
  std::uint32_t k = 2;
  std::uint64_t seed = 0, trials = 1;
  std::uint64_t light_trials = 0, heavy_iterations = 0, self_trials = 0;
};

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("generator parameter without '=': " + item);
    kv[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return kv;
}

// "er:n=64,p=0.2", "girth:n=40,g=6,extra=20", "tree:n=30", "cycle:n=6", "complete:n=5",
// "petersen", "bipartite:n=20,p=0.3".
Graph generate(const std::string& spec, std::uint64_t seed) {
  auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  auto kv = colon == std::string::npos ? std::map<std::string, std::string>{} : parse_params(spec.substr(colon + 1));
  auto num = [&](const char* key) -> std::size_t {
    if (!kv.contains(key)) throw ConfigError("generator '" + kind + "' needs " + key);
    return std::stoull(kv[key]);
  };
  auto real = [&](const char* key) {
    if (!kv.contains(key)) throw ConfigError("generator '" + kind + "' needs " + key);
    return std::stod(kv[key]);
  };
  if (kind == "er") return gen_random(num("n"), real("p"), seed);
  if (kind == "bipartite") return gen_bipartite(num("n"), real("p"), seed);
  if (kind == "girth") return gen_girth(num("n"), num("g"), kv.contains("extra") ? num("extra") : 0, seed).graph;
  if (kind == "tree") return gen_tree(num("n"), seed);
  if (kind == "cycle") return cycle_graph(num("n"));
  if (kind == "path") return path_graph(num("n"));
  if (kind == "complete") return complete_graph(num("n"));
  if (kind == "star") return star_graph(num("leaves"));
  if (kind == "petersen") return petersen_graph();
  throw ConfigError("unknown generator: " + kind);
}

Graph load_graph(const Config& c, std::uint64_t seed) {
  if (!c.graph.empty() && !c.gen.empty()) throw ConfigError("--graph and --gen are exclusive");
  if (!c.graph.empty()) return read_edge_list_file(c.graph);
  if (!c.gen.empty()) return generate(c.gen, seed);
  throw ConfigError("one of --graph or --gen is required");
}

// The graph for sweep trial t: a file is reused, a generator is reseeded per trial.
std::uint64_t trial_seed(const Config& c, std::uint64_t t) { return c.trials == 1 ? c.seed : derive(c.seed, t); }

ordered_json witness_json(const std::optional<CycleWitness>& w) {
  return w ? ordered_json(w->vertices) : ordered_json(nullptr);
}

DetectOptions detect_options(const Config& c) {
  DetectOptions o;
  o.light_trials = c.light_trials;
  o.heavy_iterations = c.heavy_iterations;
  o.self_trials = c.self_trials;
  if (c.mode == "god") o.mode = SampleMode::God;
  else if (c.mode != "priority") throw ConfigError("--mode must be god or priority");
  return o;
}

ordered_json cmd_girth_approx(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  auto r = girth_plus_one(g, trial_seed(c, t));
  auto oracle = brute_girth(g);
  return {{"n", g.n()},
          {"m", g.m()},
          {"estimate", r.estimate.str()},
          {"oracle", oracle.str()},
          {"consistent", r.estimate.consistent_with(oracle)},
          {"path", r.path},
          {"rounds", r.metrics.rounds},
          {"words", r.metrics.words_total}};
}

ordered_json cmd_list(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  auto h = SubgraphPattern::parse(c.pattern);
  auto r = list_subgraph(g, h);
  auto oracle = enumerate_subgraph(g, h);
  return {{"n", g.n()},
          {"m", g.m()},
          {"pattern", h.name},
          {"count", r.instances.size()},
          {"oracle_count", oracle.size()},
          {"match", r.instances == oracle},
          {"rounds", r.metrics.rounds},
          {"words", r.metrics.words_total}};
}

ordered_json cmd_detect_clique(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  auto r = detect_c2k(g, c.k);
  auto oracle = find_cycle_of_length(g, 2 * c.k).has_value();
  return {{"n", g.n()},
          {"m", g.m()},
          {"k", c.k},
          {"result", r.str()},
          {"oracle", oracle},
          {"witness", witness_json(r.witness)},
          {"rounds", r.metrics.rounds}};
}

void check_k(std::uint32_t k) {
  if (k < 2 || k > 5) throw ConfigError("--k must be in 2..5");
}

ordered_json cmd_detect_congest(const Config& c, std::uint64_t t) {
  check_k(c.k);
  auto g = load_graph(c, trial_seed(c, t));
  auto r = detect_c2k_congest(g, c.k, trial_seed(c, t), detect_options(c));
  return {{"n", g.n()},
          {"m", g.m()},
          {"k", c.k},
          {"found", r.witness.has_value()},
          {"validated", r.witness ? validate_witness(g, *r.witness, 2 * c.k) : true},
          {"stage", r.stage},
          {"witness", witness_json(r.witness)},
          {"rounds", r.rounds}};
}

ordered_json cmd_girth_congest(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  auto r = exact_girth_congest(g, trial_seed(c, t));
  ordered_json trace = ordered_json::array();
  for (const auto& p : r.trace) trace.push_back({{"k", p.k}, {"step", p.step}, {"halted", p.halted}, {"rounds", p.rounds}});
  return {{"n", g.n()},
          {"m", g.m()},
          {"girth", r.girth.str()},
          {"oracle", brute_girth(g).str()},
          {"phase", r.phase},
          {"step", r.step},
          {"witness", witness_json(r.witness)},
          {"rounds", r.rounds},
          {"trace", trace}};
}

ordered_json cmd_reduce(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  ReductionResult res;
  if (c.colors.empty()) {
    res = reduce_c6_to_directed_triangles(g, trial_seed(c, t), detect_options(c));
  } else {
    std::vector<std::uint32_t> colors;
    std::stringstream ss(c.colors);
    for (std::string item; std::getline(ss, item, ',');) colors.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    res = reduce_with_colors(g, std::move(colors));
  }
  ordered_json j{{"n", g.n()}, {"m", g.m()}};
  if (auto* e = std::get_if<EarlyFound>(&res)) {
    j["early_found"] = e->witness.vertices;
    j["rounds"] = e->rounds;
    return j;
  }
  const auto& r = std::get<ReducedInstance>(res);
  ordered_json arcs = ordered_json::array();
  for (Vertex u = 0; u < r.graph.n(); ++u)
    for (Vertex v : r.graph.out[u]) arcs.push_back({u, v});
  // The verdict compares G' against the colored input restricted to kept vertices.
  std::vector<Edge> kept;
  for (auto [a, b] : g.edges())
    if (!std::binary_search(r.removed.begin(), r.removed.end(), a) &&
        !std::binary_search(r.removed.begin(), r.removed.end(), b))
      kept.push_back({a, b});
  auto low = Graph::from_edges(g.n(), kept);
  const bool tri = find_directed_triangle(r.graph).has_value();
  const bool c6 = find_well_colored_c6(low, r.colors).has_value();
  j["colors"] = r.colors;
  j["removed"] = r.removed;
  j["arcs"] = arcs;
  j["directed_triangles"] = count_directed_triangles(r.graph);
  j["well_colored_c6"] = c6;
  j["equivalent"] = tri == c6;
  j["rounds"] = r.rounds;
  return j;
}

ordered_json cmd_oracle(const Config& c, std::uint64_t t) {
  auto g = load_graph(c, trial_seed(c, t));
  ordered_json j{{"n", g.n()}, {"m", g.m()}, {"max_degree", g.max_degree()}, {"girth", brute_girth(g).str()}};
  j["shortest_cycle"] = witness_json(shortest_cycle(g));
  if (!c.pattern.empty()) {
    auto h = SubgraphPattern::parse(c.pattern);
    j["pattern"] = h.name;
    j["count"] = enumerate_subgraph(g, h).size();
  }
  return j;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  auto s = v.dump();
  if (s.find(',') != std::string::npos) return "\"" + s + "\"";
  return s;
}

void emit(const Config& c, const std::vector<ordered_json>& rows, std::ostream& os) {
  if (c.format == "json") {
    ordered_json doc{{"command", c.command}, {"seed", c.seed}, {"trials", rows}};
    if (c.command == "detect-congest") {
      std::size_t found = 0;
      for (const auto& r : rows) found += r["found"].get<bool>();
      doc["rate"] = static_cast<double>(found) / static_cast<double>(rows.size());
    }
    os << doc.dump(2) << "\n";
    return;
  }
  os << "seed,trial";
  for (const auto& [key, _] : rows.front().items()) os << "," << key;
  os << "\n";
  for (std::size_t t = 0; t < rows.size(); ++t) {
    os << c.seed << "," << t;
    for (const auto& [_, v] : rows[t].items()) os << "," << csv_cell(v);
    os << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Distributed cycle and subgraph algorithms on simulated networks"};
  app.require_subcommand(1);
  const std::map<std::string, std::function<ordered_json(const Config&, std::uint64_t)>> commands{
      {"girth-approx", cmd_girth_approx}, {"list", cmd_list},       {"detect-clique", cmd_detect_clique},
      {"detect-congest", cmd_detect_congest}, {"girth-congest", cmd_girth_congest}, {"reduce", cmd_reduce},
      {"oracle", cmd_oracle}};
  for (const auto& [name, _] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--graph", c.graph, "edge list file");
    sub->add_option("--gen", c.gen, "generator spec, e.g. er:n=64,p=0.2");
    sub->add_option("--k", c.k, "cycle half-length");
    sub->add_option("--seed", c.seed);
    sub->add_option("--trials", c.trials, "sweep size; generated graphs are reseeded per trial")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mode", c.mode, "heavy sampling: god or priority");
    sub->add_option("--pattern", c.pattern, "K3, C4, P4 or edges:0-1,1-2");
    if (name == "reduce") sub->add_option("--colors", c.colors, "fixed colors c(0),c(1),...; skips the heavy stage");
    sub->add_option("--light-trials", c.light_trials);
    sub->add_option("--heavy-iterations", c.heavy_iterations);
    sub->add_option("--self-trials", c.self_trials);
    sub->add_option("--out", c.out, "output path (default stdout)");
    sub->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
    sub->callback([&c, name = name] { c.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    std::vector<ordered_json> rows;
    for (std::uint64_t t = 0; t < c.trials; ++t) rows.push_back(commands.at(c.command)(c, t));
    if (c.out.empty()) {
      emit(c, rows, std::cout);
    } else {
      std::ofstream f(c.out);
      if (!f) throw ConfigError("cannot write " + c.out);
      emit(c, rows, f);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvariantFault& e) {
    std::cerr << "invariant fault: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
