// Runs the synthesis pipeline with the deterministic rule backend over
// an in-memory seed list, then prints the manifest and the examples.

#include <iostream>

#include <dvq/dvq.hpp>

int main() {
  dvq::Schema schema;
  dvq::TableDef stays;
  stays.name = "STAYS";
  stays.columns = {{"UNIT", dvq::ValueKind::Nominal},
                   {"ENTERED", dvq::ValueKind::Temporal},
                   {"HOURS", dvq::ValueKind::Quantitative}};
  schema.tables.push_back(stays);

  dvq::Database db;
  db.schema = schema;
  dvq::Table table;
  table.def = stays;
  table.rows = {
      {dvq::Cell{"ICU"}, dvq::Cell{"2104-01-03 08:00:00"}, dvq::Cell{36.0}},
      {dvq::Cell{"ER"}, dvq::Cell{"2104-01-20 22:15:00"}, dvq::Cell{4.0}},
      {dvq::Cell{"ER"}, dvq::Cell{"2104-02-02 17:45:00"}, dvq::Cell{6.0}},
      {dvq::Cell{"POST-OP"}, dvq::Cell{"2104-02-15 11:05:00"}, dvq::Cell{18.0}},
  };
  db.add_table(std::move(table));
  std::map<std::string, dvq::Database> dbs;
  dbs.emplace("hospital", std::move(db));

  std::vector<dvq::SeedQuery> seeds = {
      {"hospital", "SELECT UNIT, COUNT(*) FROM STAYS GROUP BY UNIT"},
      {"hospital", "SELECT UNIT, AVG(HOURS) FROM STAYS GROUP BY UNIT"},
  };

  dvq::MockRuleBackend backend;
  dvq::PipelineOptions opt;
  opt.backend = &backend;
  opt.sql_to_dvq_tpl.name = dvq::PromptTemplate::Name::SqlToDvq;
  opt.sql_to_dvq_tpl.text = "Translate.\nSchema:\n{{schema}}\nSQL:\n{{sql}}\n";
  opt.dvq_to_nlq_tpl.name = dvq::PromptTemplate::Name::DvqToNlq;
  opt.dvq_to_nlq_tpl.text = "Phrase twice.\nDVQ:\n{{dvq}}\n";

  dvq::PipelineResult result = dvq::run_pipeline(seeds, dbs, opt);
  std::cout << result.manifest.to_json().dump(2) << "\n";
  for (const auto& ex : result.examples) {
    std::cout << ex.to_json().dump() << "\n";
  }
  return 0;
}
