#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "litscout/litscout.hpp"

using namespace litscout;
using nlohmann::json;

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

/// LITSCOUT_TIMESTAMP pins the query time, which makes plan prompts and
/// therefore mock-script lookups reproducible.
ResearchQuery research_query(const std::string& text) {
  const auto ts = env("LITSCOUT_TIMESTAMP");
  return ResearchQuery(text, ts ? Timestamp::parse(*ts) : Timestamp::now());
}

std::string corpus_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (auto p = env("LITSCOUT_CORPUS")) return *p;
  throw ConfigurationError("no corpus: pass --corpus or set LITSCOUT_CORPUS");
}

std::shared_ptr<retrieval::CorpusIndex> load_corpus(const std::string& path) {
  auto result = retrieval::ingest_corpus(path);
  for (const auto& r : result.stats.rejected) {
    std::cerr << path << ":" << r.line << ": skipped: " << r.reason << "\n";
  }
  return std::make_shared<retrieval::CorpusIndex>(std::move(result.index));
}

std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_group(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    auto item = std::string(unicode::trim_ascii(text.substr(pos, comma - pos)));
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw InvalidValue("'" + item + "' is not a number");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string verdict_table(const std::vector<PaperVerdict>& verdicts,
                          const retrieval::Candidates& candidates) {
  std::map<std::string, std::string> titles;
  for (const auto& p : candidates.papers) titles[p.paper_id] = p.title;
  std::vector<std::vector<std::string>> rows{{"Rank", "Class", "Score", "Paper", "Title"}};
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    std::string title = titles[v.paper_id];
    if (title.size() > 60) title = title.substr(0, 57) + "...";
    rows.push_back({std::to_string(i + 1), std::string(to_string(v.classification)),
                    evalkit::detail::fixed(v.score, 3), v.paper_id, title});
  }
  return evalkit::detail::aligned_table(rows);
}

void cmd_plan(const std::string& text) {
  const auto backend = llmgate::make_backend(llmgate::BackendConfig::from_env());
  std::cout << canonical_serialize(planner::generate_plan(research_query(text), *backend))
            << "\n";
}

void cmd_search(const std::string& text, const std::string& corpus_flag, std::size_t max) {
  const auto corpus = load_corpus(corpus_path(corpus_flag));
  const auto backend = llmgate::make_backend(llmgate::BackendConfig::from_env());
  const auto plan = planner::generate_plan(research_query(text), *backend);
  retrieval::RetrievalLimits limits;
  limits.max_candidates = max;
  limits.per_query_cap = std::min(limits.per_query_cap, max);
  limits.validate();
  const auto candidates = retrieval::deep_retrieve(*corpus, plan, limits);
  const auto verdicts = validator::validate_candidates(plan, candidates.papers, *backend);
  json out_verdicts = json::array();
  for (const auto& v : verdicts) out_verdicts.push_back(encode(v));
  std::cout << verdict_table(verdicts, candidates);
  std::cout << json{{"plan", encode(plan)},
                    {"verdicts", out_verdicts},
                    {"degraded", candidates.degraded}}
                   .dump()
            << "\n";
}

void cmd_quick(const std::string& text, std::size_t k, const std::string& corpus_flag) {
  const auto corpus = load_corpus(corpus_path(corpus_flag));
  json results = json::array();
  for (const auto& h : retrieval::quick_search(*corpus, text, k)) {
    results.push_back({{"score", h.score}, {"paper", encode(corpus->document(h.doc))}});
  }
  std::cout << json{{"results", results}}.dump() << "\n";
}

void cmd_ingest(const std::string& path) {
  const auto result = retrieval::ingest_corpus(path);
  json rejected = json::array();
  for (const auto& r : result.stats.rejected) {
    rejected.push_back({{"line", r.line}, {"reason", r.reason}});
  }
  std::cout << json{{"docs", result.stats.docs},
                    {"tokens", result.stats.tokens},
                    {"rejected_lines", result.stats.rejected_lines()},
                    {"rejected", rejected}}
                   .dump()
            << "\n";
}

std::string stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

void cmd_eval_gen(const std::string& dataset, const std::string& outputs) {
  const auto items = evalkit::generation_items(evalkit::load_generation_dataset(dataset),
                                               evalkit::load_generated_plans(outputs));
  evalkit::HashedEmbedder embedder;
  const auto report = evalkit::evaluate_generation(items, embedder);
  std::cout << evalkit::generation_table(report, stem(outputs))
            << encode(report).dump() << "\n";
}

void cmd_eval_match(const std::string& gold, const std::string& pred) {
  const auto items = evalkit::matching_items(evalkit::load_matching_labels(gold, "gold"),
                                             evalkit::load_matching_labels(pred, "predicted"));
  const auto report = evalkit::evaluate_matching(items);
  std::cout << evalkit::matching_table(report, stem(pred))
            << encode(report).dump() << "\n";
}

void cmd_reward(const std::string& group) {
  const auto adv = evalkit::group_advantages(parse_group(group));
  std::string line;
  for (std::size_t i = 0; i < adv.size(); ++i) {
    if (i) line += ',';
    line += shortest(adv[i] == 0.0 ? 0.0 : adv[i]);
  }
  std::cout << line << "\n";
}

void cmd_serve(std::optional<int> port_flag) {
  int port = 8080;
  if (port_flag) {
    port = *port_flag;
  } else if (auto p = env("LITSCOUT_PORT")) {
    try {
      port = std::stoi(*p);
    } catch (const std::exception&) {
      throw ConfigurationError("LITSCOUT_PORT is not a port number");
    }
  }
  if (port < 1 || port > 65535) throw ConfigurationError("port must lie in [1, 65535]");
  const auto store_dir = env("LITSCOUT_STORE_DIR").value_or("litscout-sessions");
  orchestrator::SessionManager manager(
      std::make_shared<orchestrator::EventStore>(store_dir),
      llmgate::make_backend(llmgate::BackendConfig::from_env()), load_corpus(corpus_path("")));
  orchestrator::Service service(manager);
  if (!service.bind("0.0.0.0", port)) {
    throw IoError("cannot bind port " + std::to_string(port));
  }
  std::cerr << "listening on port " << port << ", sessions in " << store_dir << "\n";
  service.listen_after_bind();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agentic literature search: plan, retrieve, validate, evaluate."};
  app.require_subcommand(1);

  std::string query, corpus, file, dataset, outputs, gold, pred, group;
  std::size_t max = 100, k = 10;
  std::optional<int> port;

  auto* plan = app.add_subcommand("plan", "Generate and print a query plan");
  plan->add_option("query", query, "Research question")->required();

  auto* search = app.add_subcommand("search", "Plan, retrieve and validate");
  search->add_option("query", query, "Research question")->required();
  search->add_option("--corpus", corpus, "Corpus JSONL (default $LITSCOUT_CORPUS)");
  search->add_option("--max", max, "Maximum candidates to validate")->check(CLI::PositiveNumber);

  auto* quick = app.add_subcommand("quick", "BM25 keyword search");
  quick->add_option("query", query, "Keywords")->required();
  quick->add_option("-k", k, "Number of results")->check(CLI::PositiveNumber);
  quick->add_option("--corpus", corpus, "Corpus JSONL (default $LITSCOUT_CORPUS)");

  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
  corpus_cmd->require_subcommand(1);
  auto* ingest = corpus_cmd->add_subcommand("ingest", "Validate a corpus and print statistics");
  ingest->add_option("file", file, "Corpus JSONL")->required();

  auto* eval = app.add_subcommand("eval", "Offline evaluation");
  eval->require_subcommand(1);
  auto* gen = eval->add_subcommand("gen", "Score generated plans against references");
  gen->add_option("--dataset", dataset, "Reference JSONL")->required();
  gen->add_option("--outputs", outputs, "Generated plans JSONL")->required();
  auto* match = eval->add_subcommand("match", "Score criterion verdicts against gold labels");
  match->add_option("--gold", gold, "Gold labels JSONL")->required();
  match->add_option("--pred", pred, "Predicted labels JSONL")->required();

  auto* reward = app.add_subcommand("reward", "Group-normalized advantages");
  reward->add_option("--group", group, "Comma-separated rewards")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Port (default $LITSCOUT_PORT or 8080)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*plan) cmd_plan(query);
    if (*search) cmd_search(query, corpus, max);
    if (*quick) cmd_quick(query, k, corpus);
    if (*ingest) cmd_ingest(file);
    if (*gen) cmd_eval_gen(dataset, outputs);
    if (*match) cmd_eval_match(gold, pred);
    if (*reward) cmd_reward(group);
    if (*serve) cmd_serve(port);
  } catch (const std::exception& e) {
    std::cerr << error_body(e).dump() << "\n";
    return 1;
  }
  return 0;
}
