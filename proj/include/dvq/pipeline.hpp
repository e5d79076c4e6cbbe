#pragma once

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dvq/ast.hpp"
#include "dvq/execute.hpp"
#include "dvq/filter.hpp"
#include "dvq/hardness.hpp"
#include "dvq/http_backend.hpp"
#include "dvq/llm.hpp"
#include "dvq/mockllm.hpp"
#include "dvq/parse.hpp"
#include "dvq/print.hpp"
#include "dvq/schema.hpp"
#include "dvq/split.hpp"
#include "dvq/table.hpp"
#include "dvq/validate.hpp"

namespace dvq {

/// One input to the first pipeline stage: a SQL query over a named
/// database, as mined from an existing text-to-SQL corpus.
struct SeedQuery {
  std::string db_id;
  std::string sql;
};

/// Reads seed JSONL: one {"db_id": ..., "sql": ...} object per line.
inline std::vector<SeedQuery> load_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open seed file: " + path);
  std::vector<SeedQuery> seeds;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::strip(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("db_id") || !j.contains("sql")) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected an object with db_id and sql");
    }
    seeds.push_back({j["db_id"].get<std::string>(), j["sql"].get<std::string>()});
  }
  return seeds;
}

namespace detail {

/// Pulls a query out of a completion that may carry prose or code
/// fences around it: first the whole text, then line by line.
inline std::optional<DvqAst> coerce_completion(const std::string& completion) {
  std::string body = strip(completion);
  if (body.rfind("```", 0) == 0) {
    size_t eol = body.find('\n');
    body = eol == std::string::npos ? std::string() : body.substr(eol + 1);
    size_t fence = body.rfind("```");
    if (fence != std::string::npos) body = body.substr(0, fence);
    body = strip(body);
  }
  ParseResult whole = parse_dvq(body);
  if (whole.ok()) return std::move(whole.ast);
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t eol = body.find('\n', pos);
    std::string line = strip(body.substr(pos, eol == std::string::npos ? body.size() - pos
                                                                       : eol - pos));
    pos = eol == std::string::npos ? body.size() + 1 : eol + 1;
    if (line.empty()) continue;
    ParseResult parsed = parse_dvq(line);
    if (parsed.ok()) return std::move(parsed.ast);
  }
  return std::nullopt;
}

template <typename Fn>
inline void parallel_for(size_t n, int jobs, Fn&& fn) {
  size_t workers = jobs < 1 ? 1 : static_cast<size_t>(jobs);
  if (workers > n) workers = n == 0 ? 1 : n;
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      while (true) {
        size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// What happened to the completions of one SQL-to-DVQ call.
struct SqlToDvqAudit {
  size_t completions = 0;
  size_t unparseable = 0;
  size_t duplicates = 0;
  std::vector<std::string> dropped;  // raw texts that failed to parse
};

/// First pipeline stage: ask the backend to rewrite one SQL query as a
/// visualization query. Every completion is parsed; failures are
/// dropped (and audited), repeats of one canonical form collapse to
/// one candidate. With vote_n > 1 the completions are reduced to the
/// modal answer first.
inline std::vector<DvqAst> sql_to_dvq(const std::string& sql, const Schema& schema,
                                      LlmBackend& backend, const PromptTemplate& tpl,
                                      SqlToDvqAudit* audit = nullptr, int vote_n = 1) {
  std::string prompt = tpl.render({{"sql", sql}, {"schema", schema.describe()}});
  std::vector<std::string> completions;
  if (vote_n > 1) {
    completions.push_back(self_consistent(backend, prompt, tpl.params, vote_n));
  } else {
    completions = backend.complete(prompt, tpl.params);
  }
  std::vector<DvqAst> candidates;
  std::set<std::string> seen;
  for (const std::string& completion : completions) {
    if (audit) ++audit->completions;
    auto ast = detail::coerce_completion(completion);
    if (!ast) {
      if (audit) {
        ++audit->unparseable;
        audit->dropped.push_back(detail::strip(completion));
      }
      continue;
    }
    if (!seen.insert(print_canonical(*ast)).second) {
      if (audit) ++audit->duplicates;
      continue;
    }
    candidates.push_back(std::move(*ast));
  }
  return candidates;
}

/// The two phrasings of one visualization request.
struct NlqPair {
  std::string imperative;
  std::string interrogative;
  bool resampled = false;
};

/// Third pipeline stage: ask the backend for an imperative and an
/// interrogative phrasing of one query. Lines may carry explicit
/// style labels; unlabeled lines fill the empty slots in order. A
/// missing or duplicated style triggers exactly one re-sample before
/// the example is given up on.
inline std::optional<NlqPair> dvq_to_nlq(const DvqAst& dvq, LlmBackend& backend,
                                         const PromptTemplate& tpl,
                                         std::string* fail_reason = nullptr) {
  std::string prompt = tpl.render({{"dvq", print_canonical(dvq)}});
  std::string imperative, interrogative;
  auto gather = [&](const std::vector<std::string>& completions) {
    std::vector<std::string> unlabeled;
    for (const std::string& completion : completions) {
      size_t pos = 0;
      while (pos <= completion.size()) {
        size_t eol = completion.find('\n', pos);
        std::string line = detail::strip(
            completion.substr(pos, eol == std::string::npos ? completion.size() - pos
                                                            : eol - pos));
        pos = eol == std::string::npos ? completion.size() + 1 : eol + 1;
        if (line.empty()) continue;
        if (line.size() > 11 && iequals(line.substr(0, 11), "imperative:")) {
          if (imperative.empty()) imperative = detail::strip(line.substr(11));
        } else if (line.size() > 14 && iequals(line.substr(0, 14), "interrogative:")) {
          if (interrogative.empty()) interrogative = detail::strip(line.substr(14));
        } else {
          unlabeled.push_back(line);
        }
      }
    }
    for (std::string& line : unlabeled) {
      if (imperative.empty()) {
        imperative = std::move(line);
      } else if (interrogative.empty() && line != imperative) {
        interrogative = std::move(line);
      }
    }
    if (imperative == interrogative) interrogative.clear();  // duplicates do not count
  };
  gather(backend.complete(prompt, tpl.params));
  bool resampled = false;
  if (imperative.empty() || interrogative.empty()) {
    resampled = true;
    gather(backend.complete(prompt, tpl.params));
  }
  if (imperative.empty() || interrogative.empty()) {
    if (fail_reason) {
      *fail_reason = std::string("no usable ") +
                     (imperative.empty() ? "imperative" : "interrogative") +
                     " phrasing after one re-sample";
    }
    return std::nullopt;
  }
  return NlqPair{std::move(imperative), std::move(interrogative), resampled};
}

/// One emitted dataset row: a natural-language request paired with the
/// visualization query answering it, plus provenance for audits.
struct BenchmarkExample {
  std::string id;
  std::string db_id;
  std::string nlq;
  std::string nlq_style;  // imperative | interrogative
  std::string dvq;        // canonical text
  std::string chart_type;
  std::string hardness;
  std::string source_sql;
  std::string model_id;
  std::string timestamp;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["id"] = id;
    out["db_id"] = db_id;
    out["nlq"] = nlq;
    out["nlq_style"] = nlq_style;
    out["dvq"] = dvq;
    out["chart_type"] = chart_type;
    out["hardness"] = hardness;
    out["provenance"]["source_sql"] = source_sql;
    out["provenance"]["prompts"] =
        nlohmann::ordered_json::array({"SQL_TO_DVQ", "DVQ_TO_NLQ"});
    out["provenance"]["model"] = model_id;
    out["provenance"]["timestamp"] = timestamp;
    return out;
  }
};

/// Per-stage accounting for one run. Every generated candidate lands in
/// exactly one bucket, so the buckets sum back to `generated`.
struct RunManifest {
  size_t seeds = 0;
  size_t generated = 0;
  size_t dropped_unparseable = 0;
  size_t deduplicated = 0;
  size_t invalid = 0;
  size_t exec_failed = 0;
  size_t filtered_total = 0;
  std::map<std::string, size_t> filtered_by_rule;
  size_t nlq_failed = 0;
  size_t emitted_dvqs = 0;
  size_t emitted_pairs = 0;
  nlohmann::ordered_json run_info;
  nlohmann::ordered_json dataset_stats;
  nlohmann::ordered_json nlq_stats;
  nlohmann::ordered_json audit = nlohmann::ordered_json::array();

  bool conserved() const {
    return generated == dropped_unparseable + deduplicated + invalid + exec_failed +
                            filtered_total + nlq_failed + emitted_dvqs;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["run"] = run_info;
    out["counts"]["seeds"] = seeds;
    out["counts"]["generated"] = generated;
    out["counts"]["dropped_unparseable"] = dropped_unparseable;
    out["counts"]["deduplicated"] = deduplicated;
    out["counts"]["invalid"] = invalid;
    out["counts"]["exec_failed"] = exec_failed;
    out["counts"]["filtered"]["total"] = filtered_total;
    out["counts"]["filtered"]["by_rule"] = filtered_by_rule;
    out["counts"]["nlq_failed"] = nlq_failed;
    out["counts"]["emitted_dvqs"] = emitted_dvqs;
    out["counts"]["emitted_pairs"] = emitted_pairs;
    out["dataset_stats"] = dataset_stats;
    out["nlq_stats"] = nlq_stats;
    out["audit"] = audit;
    return out;
  }
};

struct PipelineOptions {
  LlmBackend* backend = nullptr;
  PromptTemplate sql_to_dvq_tpl;
  PromptTemplate dvq_to_nlq_tpl;
  int fanout = 1;
  int vote_n = 1;
  int jobs = 1;
  std::string model_id = "mock-rule-1";
  std::string run_stamp = "1970-01-01T00:00:00Z";
};

struct PipelineResult {
  std::vector<BenchmarkExample> examples;
  RunManifest manifest;
};

namespace detail {

struct CandidateRecord {
  enum class Outcome { Invalid, ExecFailed, Filtered, Accepted };
  Outcome outcome = Outcome::Invalid;
  DvqAst ast;
  std::string canonical;
  std::string detail_text;
  std::vector<std::string> rules;
  HardnessScore hardness;
};

struct SeedWork {
  SqlToDvqAudit audit;
  std::vector<CandidateRecord> candidates;
};

inline void add_audit(nlohmann::ordered_json& audit, size_t seed_index,
                      const std::string& db_id, const char* stage,
                      const std::string& detail_text) {
  nlohmann::ordered_json entry;
  entry["seed"] = seed_index;
  entry["db_id"] = db_id;
  entry["stage"] = stage;
  entry["detail"] = detail_text;
  audit.push_back(std::move(entry));
}

inline std::string diag_summary(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (size_t i = 0; i < diags.size(); ++i) {
    if (i) out += "; ";
    out += diags[i].to_string();
  }
  return out;
}

inline size_t whitespace_tokens(const std::string& text) {
  size_t n = 0;
  bool in_token = false;
  for (char c : text) {
    bool ws = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!ws && !in_token) ++n;
    in_token = !ws;
  }
  return n;
}

}  // namespace detail

/// Runs the full benchmark construction over a seed corpus: DVQ
/// candidates from each SQL, execution and quality filtering against
/// the seed's database, difficulty scoring, and the two NLQ phrasings
/// per surviving query. Seeds are processed in parallel but merged in
/// seed order, and identical canonical DVQs across the whole run
/// collapse into the first occurrence, so output is deterministic for
/// a deterministic backend.
inline PipelineResult run_pipeline(const std::vector<SeedQuery>& seeds,
                                   const std::map<std::string, Database>& dbs,
                                   const PipelineOptions& opt) {
  if (!opt.backend) throw std::runtime_error("run_pipeline: no backend configured");
  for (const SeedQuery& seed : seeds) {
    if (dbs.find(seed.db_id) == dbs.end()) {
      throw std::runtime_error("seed references unknown database '" + seed.db_id + "'");
    }
  }

  PipelineResult result;
  RunManifest& manifest = result.manifest;
  manifest.seeds = seeds.size();
  manifest.run_info["model"] = opt.model_id;
  manifest.run_info["timestamp"] = opt.run_stamp;
  manifest.run_info["fanout"] = opt.fanout;
  manifest.run_info["vote_n"] = opt.vote_n;
  manifest.run_info["jobs"] = opt.jobs;

  // stage 1 + 2 in parallel per seed: generate, execute, filter, score
  std::vector<detail::SeedWork> work(seeds.size());
  PromptTemplate s2d = opt.sql_to_dvq_tpl;
  s2d.params.n = opt.fanout;
  detail::parallel_for(seeds.size(), opt.jobs, [&](size_t i) {
    const SeedQuery& seed = seeds[i];
    const Database& db = dbs.at(seed.db_id);
    detail::SeedWork& w = work[i];
    std::vector<DvqAst> candidates =
        sql_to_dvq(seed.sql, db.schema, *opt.backend, s2d, &w.audit, opt.vote_n);
    for (DvqAst& ast : candidates) {
      detail::CandidateRecord rec;
      rec.ast = std::move(ast);
      rec.canonical = print_canonical(rec.ast);
      std::vector<Diagnostic> diags = validate(rec.ast, db.schema);
      if (!diags.empty()) {
        rec.outcome = detail::CandidateRecord::Outcome::Invalid;
        rec.detail_text = detail::diag_summary(diags);
        w.candidates.push_back(std::move(rec));
        continue;
      }
      ResultSet rs;
      try {
        rs = execute(rec.ast, db);
      } catch (const ExecError& e) {
        rec.outcome = detail::CandidateRecord::Outcome::ExecFailed;
        rec.detail_text = e.what();
        w.candidates.push_back(std::move(rec));
        continue;
      }
      FilterVerdict verdict = check(rec.ast, rs);
      if (!verdict.accepted) {
        rec.outcome = detail::CandidateRecord::Outcome::Filtered;
        rec.rules = verdict.violated_rules;
        w.candidates.push_back(std::move(rec));
        continue;
      }
      rec.outcome = detail::CandidateRecord::Outcome::Accepted;
      rec.hardness = score(rec.ast);
      w.candidates.push_back(std::move(rec));
    }
  });

  // merge in seed order; identical DVQs across seeds collapse
  struct UniqueDvq {
    size_t seed_index;
    const detail::CandidateRecord* rec;
  };
  std::vector<UniqueDvq> unique;
  std::set<std::string> seen;
  for (size_t i = 0; i < seeds.size(); ++i) {
    const detail::SeedWork& w = work[i];
    manifest.generated += w.audit.completions;
    manifest.dropped_unparseable += w.audit.unparseable;
    manifest.deduplicated += w.audit.duplicates;
    for (const std::string& dropped : w.audit.dropped) {
      detail::add_audit(manifest.audit, i, seeds[i].db_id, "parse", dropped);
    }
    for (const detail::CandidateRecord& rec : w.candidates) {
      switch (rec.outcome) {
        case detail::CandidateRecord::Outcome::Invalid:
          ++manifest.invalid;
          detail::add_audit(manifest.audit, i, seeds[i].db_id, "validate", rec.detail_text);
          break;
        case detail::CandidateRecord::Outcome::ExecFailed:
          ++manifest.exec_failed;
          detail::add_audit(manifest.audit, i, seeds[i].db_id, "execute", rec.detail_text);
          break;
        case detail::CandidateRecord::Outcome::Filtered:
          ++manifest.filtered_total;
          for (const std::string& rule : rec.rules) ++manifest.filtered_by_rule[rule];
          break;
        case detail::CandidateRecord::Outcome::Accepted:
          if (!seen.insert(rec.canonical).second) {
            ++manifest.deduplicated;
          } else {
            unique.push_back({i, &rec});
          }
          break;
      }
    }
  }

  // stage 3 in parallel per unique accepted DVQ
  std::vector<std::optional<NlqPair>> pairs(unique.size());
  std::vector<std::string> reasons(unique.size());
  detail::parallel_for(unique.size(), opt.jobs, [&](size_t i) {
    pairs[i] = dvq_to_nlq(unique[i].rec->ast, *opt.backend, opt.dvq_to_nlq_tpl, &reasons[i]);
  });

  size_t resamples = 0;
  for (size_t i = 0; i < unique.size(); ++i) {
    const SeedQuery& seed = seeds[unique[i].seed_index];
    const detail::CandidateRecord& rec = *unique[i].rec;
    if (!pairs[i]) {
      ++manifest.nlq_failed;
      detail::add_audit(manifest.audit, unique[i].seed_index, seed.db_id, "nlq",
                        rec.canonical + ": " + reasons[i]);
      continue;
    }
    if (pairs[i]->resampled) ++resamples;
    ++manifest.emitted_dvqs;
    const char* styles[2] = {"imperative", "interrogative"};
    const std::string* texts[2] = {&pairs[i]->imperative, &pairs[i]->interrogative};
    for (int s = 0; s < 2; ++s) {
      BenchmarkExample ex;
      char id[32];
      std::snprintf(id, sizeof(id), "ex-%06zu", result.examples.size() + 1);
      ex.id = id;
      ex.db_id = seed.db_id;
      ex.nlq = *texts[s];
      ex.nlq_style = styles[s];
      ex.dvq = rec.canonical;
      ex.chart_type = to_string(rec.ast.chart);
      ex.hardness = to_string(rec.hardness.level);
      ex.source_sql = seed.sql;
      ex.model_id = opt.model_id;
      ex.timestamp = opt.run_stamp;
      result.examples.push_back(std::move(ex));
    }
  }
  manifest.emitted_pairs = result.examples.size();
  manifest.run_info["nlq_resamples"] = resamples;

  // corpus shape statistics over the emitted dataset
  std::set<std::string> db_ids;
  std::set<std::string> tables_involved;
  std::set<std::string> columns_involved;
  size_t dvq_tokens = 0, select_aggregates = 0, where_conditions = 0, condition_score = 0;
  for (const UniqueDvq& u : unique) {
    if (!pairs[&u - unique.data()]) continue;
    const DvqAst& ast = u.rec->ast;
    const std::string& db_id = seeds[u.seed_index].db_id;
    db_ids.insert(db_id);
    const Database& db = dbs.at(db_id);
    NameScope scope(ast.core, db.schema);
    for (size_t t = 0; t < scope.size(); ++t) {
      tables_involved.insert(db_id + "." + to_lower(scope.table_name(t)));
    }
    auto note_column = [&](const ColumnRef& ref) {
      auto bound = scope.resolve(ref);
      if (!bound) return;
      columns_involved.insert(db_id + "." + to_lower(scope.table_name(bound->table)) + "." +
                              to_lower(scope.table(bound->table).columns[bound->column].name));
    };
    for (const auto& item : ast.core.select) {
      if (const auto* col = std::get_if<ColumnRef>(&item)) note_column(*col);
      else if (const auto& agg = std::get<Aggregate>(item); agg.column) note_column(*agg.column);
    }
    for (const auto& join : ast.core.joins) {
      note_column(join.left);
      note_column(join.right);
    }
    for (const auto& cond : ast.core.where) note_column(cond.column);
    for (const auto& key : ast.core.group_by) note_column(key);
    for (const auto& cond : ast.core.having) note_column(cond.column);
    for (const auto& item : ast.core.order_by) {
      if (const auto* col = std::get_if<ColumnRef>(&item.expr)) note_column(*col);
      else if (const auto& agg = std::get<Aggregate>(item.expr); agg.column) {
        note_column(*agg.column);
      }
    }
    if (ast.bin) note_column(ast.bin->column);
    dvq_tokens += detail::whitespace_tokens(u.rec->canonical);
    select_aggregates += is_aggregate(ast.core.select[0]) + is_aggregate(ast.core.select[1]);
    where_conditions += ast.core.where.size();
    condition_score += u.rec->hardness.s_conditions;
  }
  nlohmann::ordered_json stats;
  stats["pairs"] = manifest.emitted_pairs;
  stats["distinct_dvqs"] = manifest.emitted_dvqs;
  stats["databases"] = db_ids.size();
  stats["tables_involved"] = tables_involved.size();
  stats["columns_involved"] = columns_involved.size();
  if (manifest.emitted_dvqs > 0) {
    double n = static_cast<double>(manifest.emitted_dvqs);
    stats["avg_dvq_whitespace_tokens"] = static_cast<double>(dvq_tokens) / n;
    stats["avg_select_aggregates"] = static_cast<double>(select_aggregates) / n;
    stats["avg_where_conditions"] = static_cast<double>(where_conditions) / n;
    stats["avg_condition_score"] = static_cast<double>(condition_score) / n;
  }
  manifest.dataset_stats = std::move(stats);

  size_t words_imp = 0, words_int = 0, n_imp = 0, n_int = 0;
  for (const BenchmarkExample& ex : result.examples) {
    size_t words = detail::whitespace_tokens(ex.nlq);
    if (ex.nlq_style == "imperative") {
      words_imp += words;
      ++n_imp;
    } else {
      words_int += words;
      ++n_int;
    }
  }
  nlohmann::ordered_json nlq_stats;
  if (n_imp + n_int > 0) {
    nlq_stats["avg_words"] =
        static_cast<double>(words_imp + words_int) / static_cast<double>(n_imp + n_int);
  }
  if (n_imp > 0) {
    nlq_stats["avg_words_imperative"] = static_cast<double>(words_imp) / n_imp;
  }
  if (n_int > 0) {
    nlq_stats["avg_words_interrogative"] = static_cast<double>(words_int) / n_int;
  }
  manifest.nlq_stats = std::move(nlq_stats);
  return result;
}

/// Declarative run configuration, loaded from one JSON file. Relative
/// paths resolve against the config file's directory. The API key is
/// the only secret and always comes through the environment variable
/// named by backend.api_key_env.
struct PipelineConfig {
  std::string backend_kind = "mock";  // mock | http
  HttpBackendConfig http;
  double temperature = 0.0;
  int max_tokens = 512;
  int fanout = 1;
  int vote_n = 1;
  int jobs = 1;
  std::string sql_to_dvq_prompt;
  std::string dvq_to_nlq_prompt;
  std::string seeds;
  std::string db_root;
  std::string out_dataset;
  std::string out_manifest;
  std::string model_id;
  std::string run_stamp = "1970-01-01T00:00:00Z";
  uint64_t split_seed = 1;
  SplitSizes split_sizes;
};

inline PipelineConfig load_pipeline_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  PipelineConfig cfg;
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    if (p.empty()) return p;
    std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).string();
  };
  if (j.contains("backend")) {
    const auto& b = j["backend"];
    cfg.backend_kind = b.value("kind", std::string("mock"));
    cfg.http.endpoint = b.value("endpoint", std::string());
    cfg.http.model = b.value("model", std::string());
    cfg.http.api_key_env = b.value("api_key_env", std::string());
    cfg.http.max_retries = b.value("max_retries", 3);
    cfg.http.retry_initial_ms = b.value("retry_initial_ms", 250);
    cfg.http.timeout_seconds = b.value("timeout_seconds", 60);
  }
  if (j.contains("decoding")) {
    cfg.temperature = j["decoding"].value("temperature", 0.0);
    cfg.max_tokens = j["decoding"].value("max_tokens", 512);
  }
  cfg.fanout = j.value("fanout", 1);
  cfg.vote_n = j.value("vote_n", 1);
  cfg.jobs = j.value("jobs", 1);
  if (j.contains("prompts")) {
    cfg.sql_to_dvq_prompt = resolve(j["prompts"].value("sql_to_dvq", std::string()));
    cfg.dvq_to_nlq_prompt = resolve(j["prompts"].value("dvq_to_nlq", std::string()));
  }
  cfg.seeds = resolve(j.value("seeds", std::string()));
  cfg.db_root = resolve(j.value("db_root", std::string()));
  if (j.contains("output")) {
    cfg.out_dataset = resolve(j["output"].value("dataset", std::string()));
    cfg.out_manifest = resolve(j["output"].value("manifest", std::string()));
  }
  cfg.model_id = j.value("model_id", std::string());
  if (cfg.model_id.empty()) {
    cfg.model_id = cfg.backend_kind == "http" ? cfg.http.model : "mock-rule-1";
  }
  cfg.run_stamp = j.value("run_stamp", std::string("1970-01-01T00:00:00Z"));
  if (j.contains("split")) {
    cfg.split_seed = j["split"].value("seed", 1);
    cfg.split_sizes.train = j["split"].value("train", 8000);
    cfg.split_sizes.val = j["split"].value("val", 1000);
    cfg.split_sizes.test = j["split"].value("test", 1000);
  }
  if (cfg.sql_to_dvq_prompt.empty() || cfg.dvq_to_nlq_prompt.empty()) {
    throw std::runtime_error(path + ": prompts.sql_to_dvq and prompts.dvq_to_nlq are required");
  }
  if (cfg.seeds.empty() || cfg.db_root.empty()) {
    throw std::runtime_error(path + ": seeds and db_root are required");
  }
  if (cfg.out_dataset.empty() || cfg.out_manifest.empty()) {
    throw std::runtime_error(path + ": output.dataset and output.manifest are required");
  }
  return cfg;
}

inline PromptTemplate load_prompt_template(const std::string& path, PromptTemplate::Name name,
                                           const PipelineConfig& cfg) {
  PromptTemplate tpl;
  tpl.name = name;
  tpl.text = detail::read_file(path);
  tpl.params.temperature = cfg.temperature;
  tpl.params.max_tokens = cfg.max_tokens;
  tpl.params.n = 1;
  return tpl;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

/// Loads everything the config names, runs the pipeline, and writes the
/// dataset JSONL and the run manifest.
inline PipelineResult generate_dataset(const PipelineConfig& cfg) {
  std::vector<SeedQuery> seeds = load_seeds(cfg.seeds);
  std::map<std::string, Database> dbs;
  for (const SeedQuery& seed : seeds) {
    if (dbs.find(seed.db_id) == dbs.end()) {
      dbs.emplace(seed.db_id,
                  load_database_dir(std::filesystem::path(cfg.db_root) / seed.db_id));
    }
  }
  MockRuleBackend mock;
  std::unique_ptr<HttpChatBackend> http;
  PipelineOptions opt;
  if (cfg.backend_kind == "mock") {
    opt.backend = &mock;
  } else if (cfg.backend_kind == "http") {
    http = std::make_unique<HttpChatBackend>(cfg.http);
    opt.backend = http.get();
  } else {
    throw std::runtime_error("unknown backend kind: " + cfg.backend_kind);
  }
  opt.sql_to_dvq_tpl =
      load_prompt_template(cfg.sql_to_dvq_prompt, PromptTemplate::Name::SqlToDvq, cfg);
  opt.dvq_to_nlq_tpl =
      load_prompt_template(cfg.dvq_to_nlq_prompt, PromptTemplate::Name::DvqToNlq, cfg);
  opt.fanout = cfg.fanout;
  opt.vote_n = cfg.vote_n;
  opt.jobs = cfg.jobs;
  opt.model_id = cfg.model_id;
  opt.run_stamp = cfg.run_stamp;

  PipelineResult result = run_pipeline(seeds, dbs, opt);
  std::string dataset;
  for (const BenchmarkExample& ex : result.examples) {
    dataset += ex.to_json().dump();
    dataset += '\n';
  }
  write_text_file(cfg.out_dataset, dataset);
  write_text_file(cfg.out_manifest, result.manifest.to_json().dump(2) + "\n");
  return result;
}

}  // namespace dvq
