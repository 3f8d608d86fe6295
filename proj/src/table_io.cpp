#include "mvc/table_io.hpp"

#include "mvc/errors.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace mvc {

using ordered_json = nlohmann::ordered_json;

std::string render_table_text(const AllocationTable& table) {
  const int nu = table.n_versions();
  std::ostringstream out;
  out << "nu=" << nu << " c=" << table.quorum() << " family=" << to_string(table.family());
  if (table.t()) out << " t=" << *table.t();
  out << " alpha=" << to_string(table.alpha()) << " (" << to_decimal(table.alpha()) << ")\n";

  constexpr int kStateWidth = 12;
  constexpr int kCellWidth = 9;
  out << std::left << std::setw(kStateWidth) << "state" << std::setw(7) << "group";
  for (int v = 1; v <= nu; ++v) out << std::setw(kCellWidth) << ("v" + std::to_string(v));
  out << "total\n";
  for (VersionSet s : table.states()) {
    out << std::setw(kStateWidth) << s.to_string() << std::setw(7) << s.latest();
    for (int v = 1; v <= nu; ++v) out << std::setw(kCellWidth) << (s.contains(v) ? to_string(table.at(s, v)) : "");
    out << to_string(table.state_total(s)) << "\n";
  }
  return out.str();
}

std::string render_table_csv(const AllocationTable& table) {
  std::ostringstream out;
  out << "state,version,fraction,decimal\n";
  for (VersionSet s : table.states()) {
    for (int v : s.members()) {
      out << '"' << s.to_string() << "\"," << v << ',' << to_string(table.at(s, v)) << ','
          << to_decimal(table.at(s, v)) << "\n";
    }
  }
  return out.str();
}

std::string render_table_json(const AllocationTable& table) {
  ordered_json doc;
  doc["nu"] = table.n_versions();
  doc["c"] = table.quorum();
  doc["family"] = to_string(table.family());
  if (table.t()) doc["t"] = *table.t();
  doc["alpha"] = to_string(table.alpha());
  ordered_json entries = ordered_json::array();
  for (VersionSet s : table.states()) {
    ordered_json row;
    row["state"] = s.members();
    ordered_json alloc = ordered_json::object();
    for (int v : s.members()) alloc[std::to_string(v)] = to_string(table.at(s, v));
    row["alloc"] = alloc;
    entries.push_back(row);
  }
  doc["entries"] = entries;
  return doc.dump();
}

AllocationTable parse_table_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed table JSON: ") + e.what());
  }
  try {
    const int nu = doc.at("nu").get<int>();
    const int c = doc.at("c").get<int>();
    TableFamily family = TableFamily::custom;
    if (doc.contains("family")) family = parse_family(doc["family"].get<std::string>());
    AllocationTable table(nu, c, family);
    if (doc.contains("t")) table.set_t(doc["t"].get<int>());
    table.set_alpha(parse_rational(doc.at("alpha").get<std::string>()));
    for (const auto& row : doc.at("entries")) {
      VersionSet s;
      for (int v : row.at("state")) {
        if (v < 1 || v > nu) throw PreconditionError("state member out of range: " + std::to_string(v));
        s = s.with(v);
      }
      for (const auto& [key, value] : row.at("alloc").items()) {
        table.set(s, std::stoi(key), parse_rational(value.get<std::string>()));
      }
    }
    table.validate();
    return table;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("table JSON missing or mistyped field: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw PreconditionError("table JSON version key is not an integer");
  }
}

AllocationTable load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot read table file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table_json(buf.str());
}

}  // namespace mvc
