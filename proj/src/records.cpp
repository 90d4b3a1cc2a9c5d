#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "graphonlab/harness.hpp"

namespace graphonlab {

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_field(const nlohmann::json& value) {
    std::string s;
    if (value.is_null()) {
        return "";
    } else if (value.is_string()) {
        s = value.get<std::string>();
    } else {
        s = value.dump();
    }
    if (!needs_quoting(s)) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

nlohmann::json parse_field(const std::string& s) {
    if (s.empty()) return nullptr;
    if (s == "true") return true;
    if (s == "false") return false;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() + s.size()) return v;
    return s;
}

// One RFC 4180 record, honoring quoted fields (which may span lines).
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false, any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        if (quoted) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field += '"';
                    in.get();
                } else {
                    quoted = false;
                }
            } else {
                field += static_cast<char>(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c == '\r') {
            // swallow; newline handling below
        } else if (c == '\n') {
            fields.push_back(field);
            return true;
        } else {
            field += static_cast<char>(c);
        }
    }
    if (any) fields.push_back(field);
    return any;
}

}  // namespace

void RecordTable::append(const nlohmann::json& row) {
    require(row.is_object(), "RecordTable: rows must be JSON objects");
    for (const auto& item : row.items()) {
        if (std::find(columns.begin(), columns.end(), item.key()) == columns.end())
            columns.push_back(item.key());
    }
    rows.push_back(row);
}

void RecordTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), "RecordTable: cannot write " + path);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << (i ? "," : "") << csv_field(columns[i]);
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ",";
            const auto it = row.find(columns[i]);
            out << (it == row.end() ? "" : csv_field(*it));
        }
        out << "\n";
    }
}

void RecordTable::write_jsonl(const std::string& path) const {
    std::ofstream out(path);
    require(out.good(), "RecordTable: cannot write " + path);
    for (const auto& row : rows) out << row.dump() << "\n";
}

RecordTable RecordTable::read_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "RecordTable: cannot open " + path);
    RecordTable table;
    std::vector<std::string> fields;
    require(read_csv_record(in, fields), "RecordTable: empty CSV " + path);
    table.columns = fields;
    while (read_csv_record(in, fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t i = 0; i < fields.size() && i < table.columns.size(); ++i)
            row[table.columns[i]] = parse_field(fields[i]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

RecordTable RecordTable::read_jsonl(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "RecordTable: cannot open " + path);
    RecordTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.append(nlohmann::json::parse(line));
    }
    return table;
}

}  // namespace graphonlab
