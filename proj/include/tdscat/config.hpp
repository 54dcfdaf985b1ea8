#pragma once

// Flat sectioned key-value configuration text. A line is blank, a comment
// ('#' first non-space character), a section header '[name]', or an entry
// 'key = value'. Sections may repeat (one [hole] stanza per hole, one
// [probe] stanza per probe); keys are unique within a stanza; there is no
// nesting beyond sections and no inline comments. Run manifests use the
// same format, and parse_config(serialize_config(doc)) reproduces doc.

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tdscat/geometry.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Section and key names: word characters plus '.' and '-'.
inline bool valid_config_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    }
    return true;
}

}  // namespace detail

struct ConfigSection {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;  // file order

    bool has(const std::string& key) const { return find(key) != nullptr; }

    const std::string* find(const std::string& key) const {
        for (const auto& kv : entries)
            if (kv.first == key) return &kv.second;
        return nullptr;
    }

    // Sets or replaces; insertion order is kept for serialization.
    void set(const std::string& key, const std::string& value) {
        for (auto& kv : entries) {
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        }
        entries.emplace_back(key, value);
    }

    void set(const std::string& key, double value) { set(key, fmt_g17(value)); }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw std::invalid_argument("config [" + name + "] " + key + ": " + why);
    }

    std::string get_string(const std::string& key) const {
        const std::string* v = find(key);
        if (!v) fail(key, "missing required key");
        return *v;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        const std::string* v = find(key);
        return v ? *v : fallback;
    }

    double parse_double(const std::string& key, const std::string& text) const {
        const char* s = text.c_str();
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end == s || *detail::trim(end).c_str() != '\0')
            fail(key, "cannot parse '" + text + "' as a number");
        return v;
    }

    double get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

    double get_double(const std::string& key, double fallback) const {
        const std::string* v = find(key);
        return v ? parse_double(key, *v) : fallback;
    }

    long get_int(const std::string& key) const {
        const std::string text = get_string(key);
        const char* s = text.c_str();
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end == s || *detail::trim(end).c_str() != '\0')
            fail(key, "cannot parse '" + text + "' as an integer");
        return v;
    }

    long get_int(const std::string& key, long fallback) const {
        return has(key) ? get_int(key) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        const std::string* v = find(key);
        if (!v) return fallback;
        if (*v == "true" || *v == "yes" || *v == "on" || *v == "1") return true;
        if (*v == "false" || *v == "no" || *v == "off" || *v == "0") return false;
        fail(key, "cannot parse '" + *v + "' as a boolean");
    }

    // Whitespace-separated list of numbers, at least one.
    std::vector<double> get_doubles(const std::string& key) const {
        const std::string text = get_string(key);
        std::vector<double> out;
        const char* s = text.c_str();
        while (*s) {
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s) fail(key, "cannot parse '" + text + "' as a number list");
            out.push_back(v);
            s = end;
            while (std::isspace(static_cast<unsigned char>(*s))) ++s;
        }
        if (out.empty()) fail(key, "empty number list");
        return out;
    }

    vec3 get_vec3(const std::string& key) const {
        const auto v = get_doubles(key);
        if (v.size() != 3) fail(key, "expected exactly 3 components");
        return {v[0], v[1], v[2]};
    }

    void set(const std::string& key, const vec3& v) {
        set(key, fmt_g17(v.x) + " " + fmt_g17(v.y) + " " + fmt_g17(v.z));
    }
};

struct ConfigDoc {
    std::vector<ConfigSection> sections;  // file order

    bool has(const std::string& name) const { return find(name) != nullptr; }

    const ConfigSection* find(const std::string& name) const {
        for (const auto& s : sections)
            if (s.name == name) return &s;
        return nullptr;
    }

    std::vector<const ConfigSection*> all(const std::string& name) const {
        std::vector<const ConfigSection*> out;
        for (const auto& s : sections)
            if (s.name == name) out.push_back(&s);
        return out;
    }

    // A section that must appear exactly once.
    const ConfigSection& section(const std::string& name) const {
        const auto hits = all(name);
        if (hits.empty()) throw std::invalid_argument("config: missing section [" + name + "]");
        if (hits.size() > 1)
            throw std::invalid_argument("config: section [" + name + "] appears more than once");
        return *hits[0];
    }

    ConfigSection& add(const std::string& name) {
        sections.push_back(ConfigSection{name, {}});
        return sections.back();
    }
};

inline ConfigDoc parse_config(const std::string& text) {
    ConfigDoc doc;
    std::size_t pos = 0, lineno = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": " + why);
    };
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        ++lineno;
        const std::string line = detail::trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header '" + line + "'");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::valid_config_name(name)) fail("invalid section name '" + name + "'");
            doc.add(name);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!detail::valid_config_name(key)) fail("invalid key '" + key + "'");
        if (value.empty()) fail("empty value for key '" + key + "'");
        if (doc.sections.empty()) fail("key '" + key + "' appears before any section");
        if (doc.sections.back().has(key))
            fail("duplicate key '" + key + "' in section [" + doc.sections.back().name + "]");
        doc.sections.back().entries.emplace_back(key, value);
    }
    return doc;
}

inline ConfigDoc read_config(const std::filesystem::path& path) {
    return parse_config(read_file(path));
}

inline std::string serialize_config(const ConfigDoc& doc) {
    std::string out;
    for (std::size_t s = 0; s < doc.sections.size(); ++s) {
        if (s) out += '\n';
        out += '[' + doc.sections[s].name + "]\n";
        for (const auto& kv : doc.sections[s].entries)
            out += kv.first + " = " + kv.second + '\n';
    }
    return out;
}

inline void write_config(const std::filesystem::path& path, const ConfigDoc& doc) {
    write_file_atomic(path, serialize_config(doc));
}

}  // namespace tdscat
