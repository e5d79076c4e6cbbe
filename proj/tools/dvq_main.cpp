// dvq: command-line front end for the visualization-query toolkit.
// One subcommand per pipeline stage; diagnostics go to stderr, data to
// files or stdout. Exit codes: 0 success, 1 domain error, 2 usage or
// configuration error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dvq/dvq.hpp>

namespace {

/// Bad invocation or unreadable configuration, as opposed to a query
/// or dataset that fails on its own terms.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  try {
    return dvq::detail::read_file(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::string text = slurp(path);
  std::vector<std::string> lines;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line =
        text.substr(pos, eol == std::string::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

dvq::Database open_database(const std::string& dir) {
  try {
    return dvq::load_database_dir(dir);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    dvq::write_text_file(out_path, content);
  }
}

int cmd_parse(const std::string& in_path, const std::string& out_path, bool sql_only) {
  std::vector<std::string> lines = read_lines(in_path);
  std::string output;
  size_t failures = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (dvq::detail::strip(lines[i]).empty()) continue;
    std::optional<dvq::ParseError> error;
    std::string canonical;
    if (sql_only) {
      dvq::SqlParseResult r = dvq::parse_sql_core(lines[i]);
      if (r.ok()) canonical = dvq::print_sql_core(*r.core);
      else error = r.error;
    } else {
      dvq::ParseResult r = dvq::parse_dvq(lines[i]);
      if (r.ok()) canonical = dvq::print_canonical(*r.ast);
      else error = r.error;
    }
    if (error) {
      ++failures;
      std::cerr << in_path << ":" << (i + 1) << ": " << error->to_string() << "\n";
    } else {
      output += canonical;
      output += '\n';
    }
  }
  emit(out_path, output);
  return failures ? 1 : 0;
}

/// Parses one query and reports validation diagnostics; shared by the
/// exec and render paths.
dvq::DvqAst parse_and_validate(const std::string& text, const dvq::Database& db) {
  dvq::ParseResult parsed = dvq::parse_dvq(text);
  if (!parsed.ok()) throw std::runtime_error(parsed.error->to_string());
  std::vector<dvq::Diagnostic> diags = dvq::validate(*parsed.ast, db.schema);
  if (!diags.empty()) {
    std::string msg;
    for (size_t i = 0; i < diags.size(); ++i) {
      if (i) msg += "\n";
      msg += diags[i].to_string();
    }
    throw std::runtime_error(msg);
  }
  return *parsed.ast;
}

int cmd_exec(const std::string& query, const std::string& db_dir, const std::string& out_path) {
  dvq::Database db = open_database(db_dir);
  dvq::DvqAst ast = parse_and_validate(query, db);
  dvq::ResultSet rs = dvq::execute(ast, db);
  emit(out_path, dvq::result_set_to_json(rs).dump(2) + "\n");
  return 0;
}

int cmd_render(const std::string& query, const std::string& db_dir,
               const std::string& out_path, const std::string& title) {
  dvq::Database db = open_database(db_dir);
  dvq::DvqAst ast = parse_and_validate(query, db);
  dvq::ResultSet rs = dvq::execute(ast, db);
  std::optional<std::string> chart_title;
  if (!title.empty()) chart_title = title;
  dvq::ChartSpec spec = dvq::lower(ast, rs, chart_title);
  emit(out_path, spec.to_json().dump(2) + "\n");
  return 0;
}

int cmd_filter(const std::string& corpus_path, const std::string& db_dir,
               const std::string& accepted_path, const std::string& rejected_path) {
  dvq::Database db = open_database(db_dir);
  std::vector<std::string> lines = read_lines(corpus_path);
  std::string accepted_out, rejected_out;
  std::map<std::string, size_t> tally;
  size_t failures = 0, n_accepted = 0, n_rejected = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (dvq::detail::strip(lines[i]).empty()) continue;
    try {
      dvq::DvqAst ast = parse_and_validate(lines[i], db);
      dvq::ResultSet rs = dvq::execute(ast, db);
      dvq::FilterVerdict verdict = dvq::check(ast, rs);
      nlohmann::ordered_json row;
      row["dvq"] = dvq::print_canonical(ast);
      row["accepted"] = verdict.accepted;
      if (verdict.accepted) {
        ++n_accepted;
        accepted_out += row.dump();
        accepted_out += '\n';
      } else {
        ++n_rejected;
        row["violated_rules"] = verdict.violated_rules;
        for (const auto& rule : verdict.violated_rules) ++tally[rule];
        rejected_out += row.dump();
        rejected_out += '\n';
      }
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << corpus_path << ":" << (i + 1) << ": " << e.what() << "\n";
    }
  }
  emit(accepted_path, accepted_out);
  emit(rejected_path, rejected_out);
  std::cerr << "accepted " << n_accepted << ", rejected " << n_rejected << "\n";
  for (const auto& [rule, count] : tally) {
    std::cerr << "  " << rule << ": " << count << "\n";
  }
  return failures ? 1 : 0;
}

int cmd_score(const std::string& corpus_path, const std::string& out_path) {
  std::vector<std::string> lines = read_lines(corpus_path);
  std::vector<dvq::DvqAst> corpus;
  std::string output;
  size_t failures = 0;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (dvq::detail::strip(lines[i]).empty()) continue;
    dvq::ParseResult parsed = dvq::parse_dvq(lines[i]);
    if (!parsed.ok()) {
      ++failures;
      std::cerr << corpus_path << ":" << (i + 1) << ": " << parsed.error->to_string() << "\n";
      continue;
    }
    dvq::HardnessScore hs = dvq::score(*parsed.ast);
    nlohmann::ordered_json row;
    row["dvq"] = dvq::print_canonical(*parsed.ast);
    row["score"] = hs.to_json();
    output += row.dump();
    output += '\n';
    corpus.push_back(std::move(*parsed.ast));
  }
  emit(out_path, output);
  dvq::HardnessHistogram hist = dvq::bucket_corpus(corpus);
  if (out_path.empty()) {
    std::cerr << hist.to_text();
  } else {
    std::cout << hist.to_text();
  }
  return failures ? 1 : 0;
}

int cmd_evaluate(const std::string& pairs_path, const std::string& out_path) {
  std::vector<std::string> lines = read_lines(pairs_path);
  std::vector<std::pair<std::string, std::string>> pairs;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (dvq::detail::strip(lines[i]).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.contains("predicted") || !j.contains("gold")) {
      throw std::runtime_error(pairs_path + ":" + std::to_string(i + 1) +
                               ": expected an object with predicted and gold");
    }
    pairs.emplace_back(j["predicted"].get<std::string>(), j["gold"].get<std::string>());
  }
  dvq::CorpusMetrics metrics = dvq::evaluate_corpus(pairs);
  emit(out_path, metrics.to_json().dump(2) + "\n");
  if (out_path.empty()) {
    std::cerr << metrics.to_text();
  } else {
    std::cout << metrics.to_text();
  }
  return 0;
}

int cmd_generate(const std::string& config_path, int jobs_override) {
  dvq::PipelineConfig cfg;
  try {
    cfg = dvq::load_pipeline_config(config_path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (jobs_override > 0) cfg.jobs = jobs_override;
  dvq::PipelineResult result = dvq::generate_dataset(cfg);
  const dvq::RunManifest& m = result.manifest;
  std::cerr << "seeds " << m.seeds << ", generated " << m.generated << ", emitted "
            << m.emitted_dvqs << " queries (" << m.emitted_pairs << " examples)\n";
  std::cerr << "dataset: " << cfg.out_dataset << "\nmanifest: " << cfg.out_manifest << "\n";
  if (!m.conserved()) {
    std::cerr << "manifest counts do not balance; see " << cfg.out_manifest << "\n";
    return 1;
  }
  return 0;
}

int cmd_split(const std::string& dataset_path, const std::string& out_dir, uint64_t seed,
              dvq::SplitSizes sizes) {
  std::vector<std::string> lines;
  for (std::string& line : read_lines(dataset_path)) {
    if (!dvq::detail::strip(line).empty()) lines.push_back(std::move(line));
  }
  dvq::DatasetSplit split = dvq::split_dataset(lines, seed, sizes);
  auto write_part = [&](const char* name, const std::vector<std::string>& part) {
    std::string body;
    for (const std::string& line : part) {
      body += line;
      body += '\n';
    }
    std::string path = (std::filesystem::path(out_dir) / name).string();
    dvq::write_text_file(path, body);
    std::cerr << path << ": " << part.size() << " examples\n";
  };
  write_part("train.jsonl", split.train);
  write_part("val.jsonl", split.val);
  write_part("test.jsonl", split.test);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Visualization-query toolkit: parse, execute, chart, filter, score,"
               " evaluate, generate, and split"};
  app.require_subcommand(1);

  std::string in_path, out_path, db_dir, title, accepted_path, rejected_path, config_path;
  std::string out_dir = ".";
  bool sql_only = false;
  int jobs = 0;
  uint64_t seed = 1;
  dvq::SplitSizes sizes;

  CLI::App* parse = app.add_subcommand("parse", "Parse queries (one per line) and print canonical forms");
  parse->add_option("file", in_path, "Input file with one query per line")->required();
  parse->add_option("-o,--output", out_path, "Write canonical queries here instead of stdout");
  parse->add_flag("--sql", sql_only, "Treat input as bare SQL cores without the Visualize prefix");

  CLI::App* exec = app.add_subcommand("exec", "Execute one query against a database directory");
  exec->add_option("file", in_path, "File holding one query")->required();
  exec->add_option("--db", db_dir, "Database directory (schema.json + <TABLE>.csv)")->required();
  exec->add_option("-o,--output", out_path, "Write the result-set JSON here instead of stdout");

  CLI::App* render = app.add_subcommand("render", "Execute one query and emit its chart spec");
  render->add_option("file", in_path, "File holding one query")->required();
  render->add_option("--db", db_dir, "Database directory")->required();
  render->add_option("-o,--output", out_path, "Write the chart JSON here instead of stdout");
  render->add_option("--title", title, "Optional chart title");

  CLI::App* filter = app.add_subcommand("filter", "Execute a query corpus and apply the quality rules");
  filter->add_option("file", in_path, "Corpus file with one query per line")->required();
  filter->add_option("--db", db_dir, "Database directory")->required();
  filter->add_option("--accepted", accepted_path, "Write accepted queries (JSONL) here");
  filter->add_option("--rejected", rejected_path, "Write rejected queries (JSONL) here");

  CLI::App* score = app.add_subcommand("score", "Score corpus difficulty and print the histogram");
  score->add_option("file", in_path, "Corpus file with one query per line")->required();
  score->add_option("-o,--output", out_path, "Write per-query scores (JSONL) here");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Exact-match metrics over predicted/gold pairs");
  evaluate->add_option("file", in_path, "JSONL file of {\"predicted\": ..., \"gold\": ...}")->required();
  evaluate->add_option("-o,--output", out_path, "Write the metrics JSON here");

  CLI::App* generate = app.add_subcommand("generate", "Run the benchmark synthesis pipeline from a config file");
  generate->add_option("--config", config_path, "Pipeline configuration JSON")->required();
  generate->add_option("--jobs", jobs, "Worker thread bound (overrides the config)");

  CLI::App* split = app.add_subcommand("split", "Split a dataset into train/val/test without query leakage");
  split->add_option("file", in_path, "Dataset JSONL")->required();
  split->add_option("--out-dir", out_dir, "Directory for train.jsonl, val.jsonl, test.jsonl");
  split->add_option("--seed", seed, "Shuffle seed");
  split->add_option("--train", sizes.train, "Training split size");
  split->add_option("--val", sizes.val, "Validation split size");
  split->add_option("--test", sizes.test, "Test split size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (parse->parsed()) return cmd_parse(in_path, out_path, sql_only);
    if (exec->parsed()) return cmd_exec(slurp(in_path), db_dir, out_path);
    if (render->parsed()) return cmd_render(slurp(in_path), db_dir, out_path, title);
    if (filter->parsed()) return cmd_filter(in_path, db_dir, accepted_path, rejected_path);
    if (score->parsed()) return cmd_score(in_path, out_path);
    if (evaluate->parsed()) return cmd_evaluate(in_path, out_path);
    if (generate->parsed()) return cmd_generate(config_path, jobs);
    if (split->parsed()) return cmd_split(in_path, out_dir, seed, sizes);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
