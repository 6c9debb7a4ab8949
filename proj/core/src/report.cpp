#include "mdc/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"

namespace mdc {

std::string stars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.1) return "*";
  return "";
}

namespace {

std::string fixed3(double v) {
  std::string s = fmt::format("{:.3f}", v);
  if (s == "-0.000") s = "0.000";
  return s;
}

// Row order: terms and controls as first seen, then period effects, then the intercept.
std::vector<std::string> row_order(const RegressionTable& table) {
  std::vector<std::string> main;
  std::vector<std::string> periods;
  bool intercept = false;
  for (const auto& col : table.columns) {
    for (std::size_t i = 0; i < col.fit.names.size(); ++i) {
      const auto& name = col.fit.names[i];
      auto& bucket = col.fit.roles[i] == RegressorRole::PeriodEffect ? periods : main;
      if (col.fit.roles[i] == RegressorRole::Intercept) {
        intercept = true;
        continue;
      }
      if (std::find(bucket.begin(), bucket.end(), name) == bucket.end()) bucket.push_back(name);
    }
  }
  main.insert(main.end(), periods.begin(), periods.end());
  if (intercept) main.push_back("Intercept");
  return main;
}

std::string wald_cell(const WaldResult& w) {
  if (w.capped) return ">1e12***";
  return fixed3(w.f) + stars(w.p_value);
}

}  // namespace

std::string render_text(const RegressionTable& table) {
  if (table.columns.empty()) throw Error(ErrorKind::Specification, "cannot render an empty table");
  const auto rows = row_order(table);

  std::vector<std::vector<std::string>> lines;  // label + one cell per column
  auto add = [&](std::string label, std::vector<std::string> cells) {
    cells.insert(cells.begin(), std::move(label));
    lines.push_back(std::move(cells));
  };
  std::vector<std::string> header;
  for (const auto& c : table.columns) header.push_back(c.header);
  add("", header);
  const std::size_t rule_after_header = lines.size();

  for (const auto& name : rows) {
    std::vector<std::string> coef_cells;
    std::vector<std::string> se_cells;
    for (const auto& c : table.columns) {
      auto i = c.fit.index(name);
      if (!i) {
        coef_cells.emplace_back();
        se_cells.emplace_back();
        continue;
      }
      coef_cells.push_back(fixed3(c.fit.coef[*i]) + stars(c.fit.p_value(*i)));
      se_cells.push_back("[" + fixed3(c.fit.se[*i]) + "]");
    }
    add(name, coef_cells);
    add("", se_cells);
  }
  const std::size_t rule_after_terms = lines.size();
  for (const auto& row : table.f_rows) {
    std::vector<std::string> cells;
    for (const auto& cell : row.cells) cells.push_back(cell ? wald_cell(*cell) : std::string{});
    cells.resize(table.columns.size());
    add(row.label, cells);
  }
  const std::size_t rule_after_f = lines.size();
  std::vector<std::string> n_cells, r2_cells, adj_cells;
  for (const auto& c : table.columns) {
    n_cells.push_back(std::to_string(c.fit.n_obs));
    r2_cells.push_back(fixed3(c.fit.r2));
    adj_cells.push_back(fixed3(c.fit.adj_r2));
  }
  add("Observations", n_cells);
  add("R2", r2_cells);
  add("Adjusted R2", adj_cells);

  std::vector<std::size_t> width(table.columns.size() + 1, 0);
  for (const auto& l : lines)
    for (std::size_t i = 0; i < l.size(); ++i) width[i] = std::max(width[i], l[i].size());
  std::size_t total = width[0];
  for (std::size_t i = 1; i < width.size(); ++i) total += 2 + width[i];
  const std::string rule(total, '-');

  std::string out = table.title + "\n";
  if (!table.depvar_label.empty()) out += "Dependent variable: " + table.depvar_label + "\n";
  out += rule + "\n";
  for (std::size_t r = 0; r < lines.size(); ++r) {
    if (r == rule_after_header || (r == rule_after_terms && r != rule_after_f) || r == rule_after_f)
      out += rule + "\n";
    std::string line = fmt::format("{:<{}}", lines[r][0], width[0]);
    for (std::size_t i = 1; i < lines[r].size(); ++i) line += fmt::format("  {:>{}}", lines[r][i], width[i]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  out += rule + "\n" + table.notes + "\n";
  return out;
}

std::string render_csv(const RegressionTable& table) {
  if (table.columns.empty()) throw Error(ErrorKind::Specification, "cannot render an empty table");
  std::ostringstream out;
  out << "model,term,statistic,value\n";
  for (const auto& c : table.columns) {
    const auto& f = c.fit;
    for (Eigen::Index i = 0; i < f.n_params; ++i) {
      const auto& name = f.names[static_cast<std::size_t>(i)];
      csv::write_row(out, {c.header, name, "coef", csv::format_double(f.coef[i])});
      csv::write_row(out, {c.header, name, "se", csv::format_double(f.se[i])});
      csv::write_row(out, {c.header, name, "t", csv::format_double(f.t_stat(i))});
      csv::write_row(out, {c.header, name, "p", csv::format_double(f.p_value(i))});
    }
    csv::write_row(out, {c.header, "", "n_obs", std::to_string(f.n_obs)});
    csv::write_row(out, {c.header, "", "r2", csv::format_double(f.r2)});
    csv::write_row(out, {c.header, "", "adj_r2", csv::format_double(f.adj_r2)});
  }
  for (const auto& row : table.f_rows) {
    for (std::size_t i = 0; i < row.cells.size() && i < table.columns.size(); ++i) {
      if (!row.cells[i]) continue;
      const auto& w = *row.cells[i];
      const auto& model = table.columns[i].header;
      csv::write_row(out, {model, row.label, "f", csv::format_double(w.f)});
      csv::write_row(out, {model, row.label, "f_p", csv::format_double(w.p_value)});
      csv::write_row(out, {model, row.label, "f_df_num", std::to_string(w.df_num)});
      csv::write_row(out, {model, row.label, "f_df_den", std::to_string(w.df_den)});
    }
  }
  return out.str();
}

std::vector<std::filesystem::path> emit_table(const RegressionTable& table, const std::filesystem::path& stem) {
  const std::string text = render_text(table);
  const std::string csv_text = render_csv(table);
  std::vector<std::filesystem::path> out{stem.string() + ".txt", stem.string() + ".csv"};
  const std::string* contents[] = {&text, &csv_text};
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::ofstream f(out[i], std::ios::binary);
    if (!f) throw Error(ErrorKind::Io, "cannot write '" + out[i].string() + "'");
    f << *contents[i];
  }
  return out;
}

RegressionTable study_table(const StudyResult& result) {
  RegressionTable table;
  table.title = result.spec.title;
  table.depvar_label = result.spec.depvar.label;
  table.columns.push_back({result.selection.baseline.spec_id, result.selection.baseline});
  for (const auto& f : result.selection.fits) table.columns.push_back({f.spec_id, f});

  FRow vs_baseline{"F vs baseline", {std::nullopt}};
  for (const auto& r : result.selection.reports) vs_baseline.cells.push_back(r.vs_baseline);
  table.f_rows.push_back(std::move(vs_baseline));
  for (const auto& rob : result.robustness) {
    FRow row{"F: " + rob.label, {}};
    for (const auto& c : table.columns) {
      auto it = rob.by_model.find(c.header);
      row.cells.push_back(it == rob.by_model.end() ? std::nullopt : std::optional<WaldResult>(it->second));
    }
    table.f_rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mdc
