#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ringview/relation.hpp"

namespace ringview {

inline std::vector<std::string> split_csv_line(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// One row per entry: key values in schema order, then the payload column in
// the ring's textual encoding. Rows are emitted in sorted key order, so the
// output is byte-stable for a given relation.
template <typename Ring>
std::string relation_to_csv(const Relation<typename Ring::Payload>& rel, const Ring& ring,
                            bool header = true) {
    std::ostringstream out;
    if (header) {
        for (const auto& c : rel.schema().cols()) out << var_name(c.var) << ",";
        out << "payload\n";
    }
    for (const auto& [t, p] : rel.sorted_entries()) {
        for (const auto& v : t.vals) out << v.to_string() << ",";
        out << ring.encode(p) << "\n";
    }
    return out.str();
}

// Loads a relation whose rows carry key values in `declared` column order
// followed by an optional payload column (missing payload means one).
template <typename Ring>
Relation<typename Ring::Payload> relation_from_csv_text(
    const std::string& text, const Schema& schema, const std::vector<VarId>& declared,
    const Ring& ring, bool expect_header,
    const std::function<typename Ring::Payload(const std::string&)>& decode_payload) {
    Relation<typename Ring::Payload> rel(schema);
    std::istringstream in(text);
    std::string line;
    size_t lineno = 0;
    bool skipped_header = !expect_header;
    std::vector<int> slot(declared.size());
    for (size_t i = 0; i < declared.size(); ++i) {
        slot[i] = schema.index_of(declared[i]);
        if (slot[i] < 0) throw ParseError("declared column not in schema");
    }
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!skipped_header) {
            skipped_header = true;
            continue;
        }
        auto fields = split_csv_line(t);
        if (fields.size() != declared.size() && fields.size() != declared.size() + 1)
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(declared.size()) + " key columns");
        Tuple key;
        key.vals.resize(schema.size());
        for (size_t i = 0; i < declared.size(); ++i)
            key.vals[static_cast<size_t>(slot[i])] =
                Value::parse(trim(fields[i]), schema.cols()[static_cast<size_t>(slot[i])].kind);
        typename Ring::Payload payload =
            fields.size() == declared.size() + 1 ? decode_payload(trim(fields.back()))
                                                 : ring.one();
        rel.accumulate(key, payload, ring);
    }
    return rel;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
}

} // namespace ringview
