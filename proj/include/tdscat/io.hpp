#pragma once

// Result persistence: comma-separated tables for traces, snapshots and
// sweeps; node field files with a sidecar lattice manifest; cluster stanza
// files in the configuration format. Every number is written with fmt_g17
// and every file through write_file_atomic, so identical runs produce
// byte-identical artifacts.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tdscat/cluster.hpp"
#include "tdscat/config.hpp"
#include "tdscat/design.hpp"
#include "tdscat/geometry.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

// Header row of labels, then one numeric row per entry.
inline std::string csv_table(const std::vector<std::string>& labels,
                             const std::vector<std::vector<double>>& rows) {
    require(!labels.empty(), "csv_table: no columns");
    std::string out;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        if (c) out += ',';
        out += labels[c];
    }
    out += '\n';
    for (const auto& row : rows) {
        require(row.size() == labels.size(), "csv_table: row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += fmt_g17(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& labels,
                      const std::vector<std::vector<double>>& rows) {
    write_file_atomic(path, csv_table(labels, rows));
}

// Time table: first column is the shared grid, one labeled column per series.
inline void write_time_table(const std::filesystem::path& path,
                             const std::vector<double>& times,
                             const std::vector<std::string>& series_labels,
                             const std::vector<std::vector<double>>& series) {
    require(series_labels.size() == series.size(), "write_time_table: label/series mismatch");
    std::vector<std::string> labels;
    labels.push_back("t");
    labels.insert(labels.end(), series_labels.begin(), series_labels.end());
    std::vector<std::vector<double>> rows(times.size());
    for (std::size_t n = 0; n < times.size(); ++n) {
        rows[n].reserve(1 + series.size());
        rows[n].push_back(times[n]);
        for (const auto& s : series) {
            require(s.size() == times.size(), "write_time_table: series length mismatch");
            rows[n].push_back(s[n]);
        }
    }
    write_csv(path, labels, rows);
}

// Snapshot of a field over points: x,y,z,value rows. Masked points carry NaN.
inline void write_point_table(const std::filesystem::path& path, const std::vector<vec3>& points,
                              const std::vector<double>& values) {
    require(points.size() == values.size(), "write_point_table: point/value mismatch");
    std::vector<std::vector<double>> rows(points.size());
    for (std::size_t p = 0; p < points.size(); ++p)
        rows[p] = {points[p].x, points[p].y, points[p].z, values[p]};
    write_csv(path, {"x", "y", "z", "value"}, rows);
}

// ---- node field files ----
//
// A field file holds one "i,j,k,value" row per lattice node in storage
// order (i fastest). The lattice itself lives in a sidecar "<path>.meta"
// manifest with the box and the cell count, so the pair is self-describing.

inline std::filesystem::path node_field_meta_path(const std::filesystem::path& csv_path) {
    std::filesystem::path p = csv_path;
    p += ".meta";
    return p;
}

inline void write_node_field(const std::filesystem::path& csv_path, const NodeField& field) {
    std::string out = "i,j,k,value\n";
    const std::size_t npa = field.nodes_per_axis();
    std::size_t flat = 0;
    for (std::size_t k = 0; k < npa; ++k)
        for (std::size_t j = 0; j < npa; ++j)
            for (std::size_t i = 0; i < npa; ++i) {
                out += std::to_string(i) + ',' + std::to_string(j) + ',' + std::to_string(k) +
                       ',' + fmt_g17(field.values[flat++]) + '\n';
            }
    write_file_atomic(csv_path, out);

    ConfigDoc meta;
    auto& s = meta.add("field");
    s.set("box_lo", field.box.lo);
    s.set("box_hi", field.box.hi);
    s.set("cells", std::to_string(field.n));
    write_config(node_field_meta_path(csv_path), meta);
}

inline NodeField read_node_field(const std::filesystem::path& csv_path) {
    const ConfigDoc meta = read_config(node_field_meta_path(csv_path));
    const ConfigSection& fs = meta.section("field");
    const Box box{fs.get_vec3("box_lo"), fs.get_vec3("box_hi")};
    const long n = fs.get_int("cells");
    if (n < 2) fs.fail("cells", "need at least 2 cells per axis");

    const std::string text = read_file(csv_path);
    const std::string where = csv_path.string();
    std::size_t pos = 0, lineno = 0;
    auto next_line = [&](std::string& line) {
        if (pos > text.size()) return false;
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        return true;
    };
    auto fail = [&](const std::string& why) -> void {
        throw std::invalid_argument(where + " line " + std::to_string(lineno) + ": " + why);
    };

    std::string line;
    if (!next_line(line) || detail::trim(line) != "i,j,k,value")
        fail("expected header 'i,j,k,value'");

    const std::size_t npa = std::size_t(n) + 1;
    std::vector<double> values(npa * npa * npa);
    std::size_t flat = 0;
    while (next_line(line)) {
        const std::string row = detail::trim(line);
        if (row.empty()) continue;
        if (flat >= values.size()) fail("more rows than lattice nodes");
        long idx[3];
        const char* s = row.c_str();
        for (int c = 0; c < 3; ++c) {
            char* end = nullptr;
            idx[c] = std::strtol(s, &end, 10);
            if (end == s || *end != ',') fail("malformed row '" + row + "'");
            s = end + 1;
        }
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *detail::trim(end).c_str() != '\0') fail("malformed row '" + row + "'");
        const long ei = long(flat % npa), ej = long((flat / npa) % npa), ek = long(flat / (npa * npa));
        if (idx[0] != ei || idx[1] != ej || idx[2] != ek)
            fail("row out of storage order: expected node (" + std::to_string(ei) + ", " +
                 std::to_string(ej) + ", " + std::to_string(ek) + ")");
        values[flat++] = v;
    }
    if (flat != values.size()) fail("fewer rows than lattice nodes");
    return NodeField(box, std::size_t(n), std::move(values));
}

// ---- cluster stanza files ----
//
// One [hole] section per hole: center, radius, and the capacitance when it
// is already known. Only spherical holes have a flat text form; mesh-shaped
// holes are built programmatically.

inline ConfigDoc cluster_to_config(const Cluster& cluster) {
    ConfigDoc doc;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
        const Hole& h = cluster.hole(i);
        const auto* sphere = std::get_if<SphereShape>(&h.shape);
        require(sphere != nullptr, "cluster_to_config: hole " + std::to_string(i) +
                                       " is mesh-shaped and has no flat text form");
        auto& s = doc.add("hole");
        s.set("center", h.center);
        s.set("radius", sphere->radius);
        if (h.capacitance) s.set("capacitance", *h.capacitance);
    }
    return doc;
}

inline void write_cluster_config(const std::filesystem::path& path, const Cluster& cluster) {
    write_config(path, cluster_to_config(cluster));
}

// Extracts the [hole] stanzas; an empty result is a valid (empty) cluster.
inline std::vector<Hole> holes_from_config(const ConfigDoc& doc) {
    std::vector<Hole> holes;
    for (const ConfigSection* s : doc.all("hole")) {
        Hole h;
        h.center = s->get_vec3("center");
        const double r = s->get_double("radius");
        if (!(r > 0.0)) s->fail("radius", "must be positive");
        h.shape = SphereShape{r};
        if (s->has("capacitance")) {
            const double c = s->get_double("capacitance");
            if (!(c > 0.0)) s->fail("capacitance", "must be positive");
            h.capacitance = c;
        }
        holes.push_back(h);
    }
    return holes;
}

}  // namespace tdscat
