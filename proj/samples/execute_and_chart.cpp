// Minimal end-to-end walkthrough: build a tiny database in memory,
// parse a visualization query, execute it, and print the chart spec.

#include <iostream>

#include <dvq/dvq.hpp>

int main() {
  dvq::Schema schema;
  dvq::TableDef visits;
  visits.name = "VISITS";
  visits.columns = {{"WARD", dvq::ValueKind::Nominal},
                    {"ADMIT", dvq::ValueKind::Temporal},
                    {"COST", dvq::ValueKind::Quantitative}};
  schema.tables.push_back(visits);

  dvq::Database db;
  db.schema = schema;
  dvq::Table table;
  table.def = visits;
  table.rows = {
      {dvq::Cell{"ICU"}, dvq::Cell{"2104-01-03 08:00:00"}, dvq::Cell{1200.0}},
      {dvq::Cell{"ICU"}, dvq::Cell{"2104-02-11 09:30:00"}, dvq::Cell{800.0}},
      {dvq::Cell{"ER"}, dvq::Cell{"2104-01-20 22:15:00"}, dvq::Cell{300.0}},
      {dvq::Cell{"ER"}, dvq::Cell{"2104-03-02 17:45:00"}, dvq::Cell{450.0}},
      {dvq::Cell{"WARD-3"}, dvq::Cell{"2104-03-15 11:05:00"}, dvq::Cell{650.0}},
  };
  db.add_table(std::move(table));

  const char* query = "Visualize BAR SELECT WARD, SUM(COST) FROM VISITS GROUP BY WARD";
  dvq::ParseResult parsed = dvq::parse_dvq(query);
  if (!parsed.ok()) {
    std::cerr << parsed.error->to_string() << "\n";
    return 1;
  }
  for (const auto& diag : dvq::validate(*parsed.ast, db.schema)) {
    std::cerr << diag.to_string() << "\n";
  }

  dvq::ResultSet rs = dvq::execute(*parsed.ast, db);
  std::cout << "canonical: " << dvq::print_canonical(*parsed.ast) << "\n";
  std::cout << "rows: " << rs.n_values() << "\n";
  dvq::ChartSpec spec = dvq::lower(*parsed.ast, rs, "Cost by ward");
  std::cout << spec.to_json().dump(2) << "\n";
  return 0;
}
