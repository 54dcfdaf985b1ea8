#pragma once

// Batch runner behind the five commands: simulate, oracle-validate, medium,
// design, convergence. One flat config file describes a run; every default
// is resolved here and materialized into the manifest so a manifest alone
// is enough to reproduce the run. Artifacts land in the output directory;
// threshold verdicts surface as nonzero return codes and precondition or
// solver failures as exceptions carrying a diagnostic.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tdscat/capacitance.hpp"
#include "tdscat/cluster.hpp"
#include "tdscat/config.hpp"
#include "tdscat/design.hpp"
#include "tdscat/effective_medium.hpp"
#include "tdscat/fields.hpp"
#include "tdscat/io.hpp"
#include "tdscat/retarded_system.hpp"
#include "tdscat/signal.hpp"
#include "tdscat/sphere_oracle.hpp"
#include "tdscat/trace.hpp"
#include "tdscat/util.hpp"

namespace tdscat {

// Everything a run needs, after defaults were applied. Paths referenced by
// the config are resolved against the config file's directory.
struct RunConfig {
    std::string command;
    std::filesystem::path out_dir;
    int threads = 1;
    bool force = false;

    // [signal]
    std::string signal_kind = "smooth_bump";
    double signal_amplitude = 1.0;
    double signal_delay = 0.0;

    // [source]
    SourceConfig source;

    // [time]
    double T = 0.0;
    double dt = 0.0;
    std::string dt_rule = "explicit";
    Interp interp = Interp::cubic;
    double tol = 1e-10;

    // [hole] stanzas or [layout]
    std::vector<Hole> holes;
    bool have_layout = false;
    Box layout_box{};
    double layout_cell_volume = 0.0;
    double layout_cbar = 0.0;
    std::vector<double> radius_sweep;  // simulate: rerun with each sphere radius

    // [fields] and [probe] stanzas
    std::vector<vec3> probes;
    double exclusion = 0.0;
    std::vector<FieldKind> probe_kinds{FieldKind::scattered};

    // [grid]
    bool have_grid = false;
    FieldGrid grid{};
    FieldKind grid_kind = FieldKind::scattered;
    std::vector<double> snapshot_times;

    // [medium] and [compare]
    bool have_medium = false;
    Box medium_box{};
    std::size_t medium_cells = 0;
    double medium_cbar = 0.0;
    std::filesystem::path medium_cbar_file;  // empty = constant medium_cbar
    std::size_t compare_count = 0;           // 0 = no cluster comparison

    // [design]
    std::filesystem::path design_input;
    std::string design_kind;  // rho | cbar
    double design_cell_volume = 0.0;
    double design_tol = 1e-10;

    // [oracle]
    vec3 oracle_center{};
    vec3 oracle_probe{};
    std::vector<double> oracle_radii;
    std::vector<double> oracle_times;
    int oracle_substeps = 4;
    double slope_threshold = 1.8;

    // [sweep]
    std::string sweep_mode;  // radius | dt | volume | cells
    std::vector<double> sweep_dts;
    std::vector<std::size_t> sweep_cells;
    std::vector<std::size_t> sweep_counts;
    std::vector<double> eval_times;
};

namespace detail {

inline std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> out;
    std::size_t b = 0;
    while (b < text.size()) {
        while (b < text.size() && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
        std::size_t e = b;
        while (e < text.size() && !std::isspace(static_cast<unsigned char>(text[e]))) ++e;
        if (e > b) out.push_back(text.substr(b, e - b));
        b = e;
    }
    return out;
}

inline std::string zero_pad3(std::size_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%03zu", v);
    return buf;
}

// The section whitelist makes a typo a hard error instead of a silently
// ignored stanza.
inline void check_sections(const ConfigDoc& doc, const std::vector<std::string>& allowed) {
    for (const auto& s : doc.sections) {
        if (std::find(allowed.begin(), allowed.end(), s.name) == allowed.end())
            throw std::invalid_argument("config: section [" + s.name +
                                        "] is not used by this command");
    }
}

// Input paths are taken relative to the config file that names them and
// stored absolute, so a written manifest re-runs from any directory.
inline std::filesystem::path resolve_against(const std::filesystem::path& base,
                                             const std::string& rel) {
    const std::filesystem::path p(rel);
    return std::filesystem::weakly_canonical(p.is_absolute() ? p : base / p);
}

inline std::vector<std::size_t> get_counts(const ConfigSection& s, const std::string& key) {
    std::vector<std::size_t> out;
    for (double v : s.get_doubles(key)) {
        if (!(v >= 1.0) || v != std::floor(v)) s.fail(key, "entries must be positive integers");
        out.push_back(std::size_t(v));
    }
    return out;
}

}  // namespace detail

// Default step rule: T/1024, refined so the shortest pair delay stays ahead
// of the step (dt <= tau_min/4) and a volume march stays causal per voxel
// (dt <= h/c0). Infinity stands for "no such constraint".
inline double default_dt(double T, double tau_min, double h_over_c0) {
    double dt = T / 1024.0;
    if (std::isfinite(tau_min)) dt = std::min(dt, tau_min / 4.0);
    if (std::isfinite(h_over_c0)) dt = std::min(dt, h_over_c0);
    return dt;
}

inline std::vector<double> march_grid_times(double T, double dt) {
    const std::size_t steps = std::size_t(std::ceil(T / dt - 1e-9));
    std::vector<double> times(steps + 1);
    for (std::size_t n = 0; n <= steps; ++n) times[n] = double(n) * dt;
    return times;
}

// Default comparison times for sweeps: 32 uniform samples of (0, T].
inline std::vector<double> default_eval_times(double T) {
    std::vector<double> out(32);
    for (std::size_t j = 0; j < 32; ++j) out[j] = T * double(j + 1) / 32.0;
    return out;
}

namespace detail {

inline void parse_signal(const ConfigDoc& doc, RunConfig& cfg) {
    if (const ConfigSection* s = doc.find("signal")) {
        cfg.signal_kind = s->get_string("kind", "smooth_bump");
        cfg.signal_amplitude = s->get_double("amplitude", 1.0);
        cfg.signal_delay = s->get_double("delay", 0.0);
        if (cfg.signal_kind == "smooth_bump") {
            if (s->has("delay")) s->fail("delay", "smooth_bump takes no delay");
        } else if (cfg.signal_kind != "delayed_smooth_bump") {
            s->fail("kind", "expected smooth_bump or delayed_smooth_bump");
        }
    }
    cfg.source.signal = (cfg.signal_kind == "smooth_bump")
                            ? CausalSignal::smooth_bump(cfg.signal_amplitude)
                            : CausalSignal::delayed_smooth_bump(cfg.signal_delay,
                                                                cfg.signal_amplitude);
}

inline void parse_source(const ConfigDoc& doc, RunConfig& cfg) {
    const ConfigSection& s = doc.section("source");
    cfg.source.position = s.get_vec3("position");
    cfg.source.c0 = s.get_double("c0", 1.0);
    if (!(cfg.source.c0 > 0.0)) s.fail("c0", "must be positive");
}

inline void parse_time(const ConfigDoc& doc, RunConfig& cfg, bool allow_dt = true) {
    const ConfigSection& s = doc.section("time");
    cfg.T = s.get_double("T");
    if (!(cfg.T > 0.0)) s.fail("T", "must be positive");
    if (s.has("dt")) {
        if (!allow_dt) s.fail("dt", "this command derives dt from the sweep");
        cfg.dt = s.get_double("dt");
        if (!(cfg.dt > 0.0 && cfg.dt < cfg.T)) s.fail("dt", "must lie in (0, T)");
        // An informational provenance note; carried through so a written
        // manifest reloads as itself.
        cfg.dt_rule = s.get_string("dt_rule", "explicit");
    }
    cfg.interp = interp_from_name(s.get_string("interp", "cubic"));
    cfg.tol = s.get_double("tol", 1e-10);
    if (!(cfg.tol > 0.0)) s.fail("tol", "must be positive");
}

inline void parse_cluster(const ConfigDoc& doc, RunConfig& cfg) {
    cfg.holes = holes_from_config(doc);
    if (const ConfigSection* s = doc.find("layout")) {
        if (!cfg.holes.empty())
            throw std::invalid_argument(
                "config: [layout] and explicit [hole] stanzas are mutually exclusive");
        cfg.have_layout = true;
        cfg.layout_box = Box{s->get_vec3("box_lo"), s->get_vec3("box_hi")};
        cfg.layout_cbar = s->get_double("cbar");
        const bool has_a = s->has("cell_volume"), has_count = s->has("count");
        if (has_a == has_count)
            s->fail("cell_volume", "exactly one of cell_volume and count is required");
        if (has_a) {
            cfg.layout_cell_volume = s->get_double("cell_volume");
        } else {
            const long count = s->get_int("count");
            if (count < 1) s->fail("count", "must be positive");
            cfg.layout_cell_volume = cfg.layout_box.volume() / double(count);
        }
        cfg.holes = periodic_layout(cfg.layout_box, cfg.layout_cell_volume, cfg.layout_cbar)
                        .holes();
    }
}

inline void parse_probes(const ConfigDoc& doc, RunConfig& cfg) {
    for (const ConfigSection* s : doc.all("probe")) cfg.probes.push_back(s->get_vec3("point"));
    if (const ConfigSection* s = doc.find("fields")) {
        if (s->has("exclusion")) {
            cfg.exclusion = s->get_double("exclusion");
            if (!(cfg.exclusion > 0.0)) s->fail("exclusion", "must be positive");
        }
        if (s->has("kinds")) {
            cfg.probe_kinds.clear();
            for (const auto& w : split_words(s->get_string("kinds")))
                cfg.probe_kinds.push_back(field_kind_from_name(w));
            if (cfg.probe_kinds.empty()) s->fail("kinds", "empty kind list");
        }
    }
}

inline void parse_grid(const ConfigDoc& doc, RunConfig& cfg) {
    const ConfigSection* s = doc.find("grid");
    if (!s) return;
    cfg.have_grid = true;
    cfg.grid.lo = s->get_vec3("box_lo");
    cfg.grid.hi = s->get_vec3("box_hi");
    const auto counts = get_counts(*s, "counts");
    if (counts.size() != 3) s->fail("counts", "expected exactly 3 counts");
    cfg.grid.counts = {counts[0], counts[1], counts[2]};
    const double lo[3] = {cfg.grid.lo.x, cfg.grid.lo.y, cfg.grid.lo.z};
    const double hi[3] = {cfg.grid.hi.x, cfg.grid.hi.y, cfg.grid.hi.z};
    for (int a = 0; a < 3; ++a) {
        if (lo[a] > hi[a]) s->fail("box_lo", "must not exceed box_hi on any axis");
        if (lo[a] == hi[a] && cfg.grid.counts[a] != 1)
            s->fail("counts", "a degenerate axis needs a single node");
    }
    cfg.snapshot_times = s->get_doubles("times");
    for (double t : cfg.snapshot_times)
        if (!(t >= 0.0 && t <= cfg.T)) s->fail("times", "snapshot times must lie in [0, T]");
    cfg.grid_kind = field_kind_from_name(s->get_string("kind", "scattered"));
}

inline void parse_medium(const ConfigDoc& doc, RunConfig& cfg,
                         const std::filesystem::path& base, bool need_cells = true) {
    const ConfigSection& s = doc.section("medium");
    cfg.have_medium = true;
    if (need_cells || s.has("cells")) {
        const long cells = s.get_int("cells");
        if (cells < 1) s.fail("cells", "must be positive");
        cfg.medium_cells = std::size_t(cells);
    }
    if (s.has("cbar_file")) {
        if (s.has("cbar") || s.has("box_lo") || s.has("box_hi"))
            s.fail("cbar_file", "a field file fixes both the density and the box");
        cfg.medium_cbar_file = resolve_against(base, s.get_string("cbar_file"));
        cfg.medium_box = read_node_field(cfg.medium_cbar_file).box;
    } else {
        cfg.medium_box = Box{s.get_vec3("box_lo"), s.get_vec3("box_hi")};
        cfg.medium_cbar = s.get_double("cbar");
        if (cfg.medium_cbar < 0.0) s.fail("cbar", "must be nonnegative");
    }
    if (const ConfigSection* c = doc.find("compare")) {
        const long count = c->get_int("count");
        if (count < 1) c->fail("count", "must be positive");
        cfg.compare_count = std::size_t(count);
    }
}

inline void parse_oracle(const ConfigDoc& doc, RunConfig& cfg) {
    const ConfigSection& s = doc.section("oracle");
    cfg.oracle_center = s.get_vec3("center");
    cfg.oracle_probe = s.get_vec3("probe");
    cfg.oracle_radii = s.get_doubles("radii");
    for (double r : cfg.oracle_radii)
        if (!(r > 0.0)) s.fail("radii", "radii must be positive");
    cfg.oracle_times = s.get_doubles("times");
    for (double t : cfg.oracle_times)
        if (!(t > 0.0)) s.fail("times", "evaluation times must be positive");
    const long sub = s.get_int("substeps", 4);
    if (sub < 1) s.fail("substeps", "must be at least 1");
    cfg.oracle_substeps = int(sub);
    cfg.slope_threshold = s.get_double("threshold", 1.8);
}

// Applies the default step rule for commands that march. tau_min covers
// the configured cluster, and any sweep counts for the layout variants.
inline void resolve_dt(RunConfig& cfg) {
    if (cfg.dt > 0.0) return;
    double tau_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.holes.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.holes.size(); ++j)
            tau_min = std::min(tau_min, dist(cfg.holes[i].center, cfg.holes[j].center));
    if (cfg.have_medium) {
        const vec3 sides = cfg.medium_box.sides();
        double pitch = sides.x / double(cfg.medium_cells);
        std::size_t max_count = cfg.compare_count;
        for (std::size_t c : cfg.sweep_counts) max_count = std::max(max_count, c);
        if (max_count >= 1) {
            const std::size_t lattice = std::size_t(std::cbrt(double(max_count)) + 1e-9);
            if (lattice >= 1) tau_min = std::min(tau_min, sides.x / double(lattice));
        }
        cfg.dt = default_dt(cfg.T, tau_min / cfg.source.c0, pitch / cfg.source.c0);
        cfg.dt_rule = "default: min(T/1024, tau_min/4, h/c0)";
        return;
    }
    cfg.dt = default_dt(cfg.T, tau_min / cfg.source.c0,
                        std::numeric_limits<double>::infinity());
    cfg.dt_rule = "default: min(T/1024, tau_min/4)";
}

// Default observation exclusion: five times the largest hole diameter seen
// by the run, sweep radii included.
inline void resolve_exclusion(RunConfig& cfg) {
    if (cfg.exclusion > 0.0 || cfg.holes.empty()) return;
    double diam = 0.0;
    for (const auto& h : cfg.holes) diam = std::max(diam, h.diameter());
    for (double r : cfg.radius_sweep) diam = std::max(diam, 2.0 * r);
    cfg.exclusion = 5.0 * diam;
}

}  // namespace detail

inline RunConfig load_run_config(const std::filesystem::path& config_path,
                                 const std::string& command,
                                 const std::filesystem::path& out_dir, int threads = 1,
                                 bool force = false) {
    const ConfigDoc doc = read_config(config_path);
    const std::filesystem::path base = config_path.parent_path();
    RunConfig cfg;
    cfg.command = command;
    cfg.out_dir = out_dir;
    cfg.threads = std::max(1, threads);
    cfg.force = force;

    // [run] is what a manifest adds over a hand-written config; it is
    // accepted (and ignored) everywhere so a manifest re-runs as-is.
    if (command == "simulate") {
        detail::check_sections(
            doc, {"run", "signal", "source", "time", "hole", "layout", "sweep", "fields",
                  "probe", "grid"});
        detail::parse_signal(doc, cfg);
        detail::parse_source(doc, cfg);
        detail::parse_time(doc, cfg);
        detail::parse_cluster(doc, cfg);
        if (const ConfigSection* s = doc.find("sweep")) {
            cfg.radius_sweep = s->get_doubles("radii");
            for (double r : cfg.radius_sweep)
                if (!(r > 0.0)) s->fail("radii", "radii must be positive");
            if (cfg.holes.empty())
                s->fail("radii", "a radius sweep needs at least one hole");
            for (const auto& h : cfg.holes)
                require(std::holds_alternative<SphereShape>(h.shape),
                        "config: a radius sweep requires spherical holes");
        }
        detail::parse_probes(doc, cfg);
        detail::parse_grid(doc, cfg);
        detail::resolve_dt(cfg);
        detail::resolve_exclusion(cfg);
    } else if (command == "oracle-validate") {
        detail::check_sections(doc, {"run", "signal", "source", "oracle"});
        detail::parse_signal(doc, cfg);
        detail::parse_source(doc, cfg);
        detail::parse_oracle(doc, cfg);
    } else if (command == "medium") {
        detail::check_sections(doc, {"run", "signal", "source", "time", "medium", "compare",
                                     "fields", "probe"});
        detail::parse_signal(doc, cfg);
        detail::parse_source(doc, cfg);
        detail::parse_time(doc, cfg);
        detail::parse_medium(doc, cfg, base);
        detail::parse_probes(doc, cfg);
        require(!cfg.probes.empty(), "config: a medium run needs at least one [probe]");
        detail::resolve_dt(cfg);
    } else if (command == "design") {
        detail::check_sections(doc, {"run", "design"});
        const ConfigSection& s = doc.section("design");
        cfg.design_input = detail::resolve_against(base, s.get_string("input"));
        cfg.design_kind = s.get_string("kind");
        if (cfg.design_kind != "rho" && cfg.design_kind != "cbar")
            s.fail("kind", "expected rho or cbar");
        cfg.design_cell_volume = s.get_double("cell_volume");
        if (!(cfg.design_cell_volume > 0.0)) s.fail("cell_volume", "must be positive");
        cfg.design_tol = s.get_double("tol", 1e-10);
        if (!(cfg.design_tol > 0.0)) s.fail("tol", "must be positive");
    } else if (command == "convergence") {
        detail::check_sections(doc, {"run", "signal", "source", "time", "sweep", "oracle",
                                     "hole", "layout", "medium", "fields", "probe"});
        detail::parse_signal(doc, cfg);
        detail::parse_source(doc, cfg);
        const ConfigSection& s = doc.section("sweep");
        cfg.sweep_mode = s.get_string("mode");
        if (s.has("times")) {
            cfg.eval_times = s.get_doubles("times");
            for (double t : cfg.eval_times)
                if (!(t > 0.0)) s.fail("times", "evaluation times must be positive");
        }
        if (cfg.sweep_mode == "radius") {
            detail::parse_oracle(doc, cfg);
        } else if (cfg.sweep_mode == "dt") {
            cfg.dt_rule = "sweep";
            detail::parse_time(doc, cfg, /*allow_dt=*/false);
            detail::parse_cluster(doc, cfg);
            require(!cfg.holes.empty(), "config: a dt sweep needs at least one hole");
            detail::parse_probes(doc, cfg);
            require(!cfg.probes.empty(), "config: a dt sweep needs at least one [probe]");
            cfg.sweep_dts = s.get_doubles("dts");
            if (cfg.sweep_dts.size() < 2) s.fail("dts", "need at least two step sizes");
            for (double v : cfg.sweep_dts)
                if (!(v > 0.0 && v < cfg.T)) s.fail("dts", "step sizes must lie in (0, T)");
            detail::resolve_exclusion(cfg);
        } else if (cfg.sweep_mode == "volume") {
            cfg.dt_rule = "sweep: dt = h/c0 per level";
            detail::parse_time(doc, cfg, /*allow_dt=*/false);
            detail::parse_medium(doc, cfg, base, /*need_cells=*/false);
            detail::parse_probes(doc, cfg);
            require(!cfg.probes.empty(), "config: a volume sweep needs at least one [probe]");
            cfg.sweep_cells = detail::get_counts(s, "cells");
            if (cfg.sweep_cells.size() < 2) s.fail("cells", "need at least two resolutions");
        } else if (cfg.sweep_mode == "cells") {
            detail::parse_time(doc, cfg);
            detail::parse_medium(doc, cfg, base);
            detail::parse_probes(doc, cfg);
            require(!cfg.probes.empty(), "config: a cells sweep needs at least one [probe]");
            cfg.sweep_counts = detail::get_counts(s, "counts");
            if (cfg.sweep_counts.empty()) s.fail("counts", "need at least one hole count");
            detail::resolve_dt(cfg);
        } else {
            s.fail("mode", "expected radius, dt, volume or cells");
        }
        if (cfg.sweep_mode != "radius") {
            for (double t : cfg.eval_times)
                if (!(t <= cfg.T)) s.fail("times", "evaluation times must not exceed T");
            if (cfg.eval_times.empty()) cfg.eval_times = default_eval_times(cfg.T);
        }
    } else {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    return cfg;
}

// ---- manifest ----

inline ConfigDoc manifest_doc(const RunConfig& cfg) {
    ConfigDoc doc;
    auto& run = doc.add("run");
    run.set("command", cfg.command);
    run.set("threads", std::to_string(cfg.threads));
    run.set("force", cfg.force ? "true" : "false");

    if (cfg.command != "design") {
        auto& sig = doc.add("signal");
        sig.set("kind", cfg.signal_kind);
        sig.set("amplitude", cfg.signal_amplitude);
        if (cfg.signal_kind == "delayed_smooth_bump") sig.set("delay", cfg.signal_delay);
        auto& src = doc.add("source");
        src.set("position", cfg.source.position);
        src.set("c0", cfg.source.c0);
    }

    const bool timed = cfg.command == "simulate" || cfg.command == "medium" ||
                       (cfg.command == "convergence" && cfg.sweep_mode != "radius");
    if (timed) {
        auto& t = doc.add("time");
        t.set("T", cfg.T);
        if (cfg.dt > 0.0) t.set("dt", cfg.dt);
        t.set("dt_rule", cfg.dt_rule);
        t.set("interp", interp_name(cfg.interp));
        t.set("tol", cfg.tol);
    }

    if (cfg.have_layout) {
        auto& l = doc.add("layout");
        l.set("box_lo", cfg.layout_box.lo);
        l.set("box_hi", cfg.layout_box.hi);
        l.set("cbar", cfg.layout_cbar);
        l.set("cell_volume", cfg.layout_cell_volume);
    } else {
        for (const auto& h : cfg.holes) {
            auto& s = doc.add("hole");
            s.set("center", h.center);
            s.set("radius", std::get<SphereShape>(h.shape).radius);
            if (h.capacitance) s.set("capacitance", *h.capacitance);
        }
    }
    if (!cfg.radius_sweep.empty()) {
        auto& s = doc.add("sweep");
        std::string list;
        for (double r : cfg.radius_sweep) list += (list.empty() ? "" : " ") + fmt_g17(r);
        s.set("radii", list);
    }

    if (!cfg.probes.empty() || cfg.exclusion > 0.0) {
        auto& f = doc.add("fields");
        if (cfg.exclusion > 0.0) f.set("exclusion", cfg.exclusion);
        std::string kinds;
        for (FieldKind k : cfg.probe_kinds)
            kinds += (kinds.empty() ? "" : " ") + std::string(field_kind_name(k));
        f.set("kinds", kinds);
        for (const auto& p : cfg.probes) doc.add("probe").set("point", p);
    }

    if (cfg.have_grid) {
        auto& g = doc.add("grid");
        g.set("box_lo", cfg.grid.lo);
        g.set("box_hi", cfg.grid.hi);
        g.set("counts", std::to_string(cfg.grid.counts[0]) + " " +
                            std::to_string(cfg.grid.counts[1]) + " " +
                            std::to_string(cfg.grid.counts[2]));
        std::string list;
        for (double t : cfg.snapshot_times) list += (list.empty() ? "" : " ") + fmt_g17(t);
        g.set("times", list);
        g.set("kind", field_kind_name(cfg.grid_kind));
    }

    if (cfg.have_medium) {
        auto& m = doc.add("medium");
        if (cfg.medium_cells > 0) m.set("cells", std::to_string(cfg.medium_cells));
        if (!cfg.medium_cbar_file.empty()) {
            m.set("cbar_file", cfg.medium_cbar_file.string());
        } else {
            m.set("box_lo", cfg.medium_box.lo);
            m.set("box_hi", cfg.medium_box.hi);
            m.set("cbar", cfg.medium_cbar);
        }
        if (cfg.compare_count > 0) doc.add("compare").set("count", std::to_string(cfg.compare_count));
    }

    if (cfg.command == "design") {
        auto& d = doc.add("design");
        d.set("input", cfg.design_input.string());
        d.set("kind", cfg.design_kind);
        d.set("cell_volume", cfg.design_cell_volume);
        d.set("tol", cfg.design_tol);
    }

    if (cfg.command == "oracle-validate" ||
        (cfg.command == "convergence" && cfg.sweep_mode == "radius")) {
        auto& o = doc.add("oracle");
        o.set("center", cfg.oracle_center);
        o.set("probe", cfg.oracle_probe);
        std::string radii, times;
        for (double r : cfg.oracle_radii) radii += (radii.empty() ? "" : " ") + fmt_g17(r);
        for (double t : cfg.oracle_times) times += (times.empty() ? "" : " ") + fmt_g17(t);
        o.set("radii", radii);
        o.set("times", times);
        o.set("substeps", std::to_string(cfg.oracle_substeps));
        if (cfg.command == "oracle-validate") o.set("threshold", cfg.slope_threshold);
    }

    if (cfg.command == "convergence") {
        auto& s = doc.add("sweep");
        s.set("mode", cfg.sweep_mode);
        auto list_of = [](const auto& v) {
            std::string out;
            for (const auto& x : v) {
                if (!out.empty()) out += ' ';
                if constexpr (std::is_same_v<std::decay_t<decltype(x)>, double>)
                    out += fmt_g17(x);
                else
                    out += std::to_string(x);
            }
            return out;
        };
        if (!cfg.sweep_dts.empty()) s.set("dts", list_of(cfg.sweep_dts));
        if (!cfg.sweep_cells.empty()) s.set("cells", list_of(cfg.sweep_cells));
        if (!cfg.sweep_counts.empty()) s.set("counts", list_of(cfg.sweep_counts));
        if (!cfg.eval_times.empty()) s.set("times", list_of(cfg.eval_times));
    }
    return doc;
}

// ---- shared run pieces ----

namespace detail {

struct MarchArtifacts {
    double margin = 0.0;
    double residual_max = 0.0;
    double peak_scattered = 0.0;  // over probes and grid times
    bool stability_ok = false;
    double stability_ratio = 0.0;
    double stability_bound = 0.0;
    std::size_t steps = 0;
};

// One full cluster pipeline into `dir`: capacitances, assembly, march,
// probe tables, snapshots, diagnostics.
inline MarchArtifacts march_cluster_run(const RunConfig& cfg, const std::vector<Hole>& holes,
                                        const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Cluster cluster(holes);
    fill_capacitances(cluster, cfg.threads);
    const RetardedSystem sys = assemble(cluster, cfg.source);

    MarchOptions opts;
    opts.interp = cfg.interp;
    opts.tol = cfg.tol;
    opts.force = cfg.force;
    opts.threads = cfg.threads;
    const SystemSolution sol = march(sys, cfg.T, cfg.dt, opts);
    const std::vector<double> times = march_grid_times(cfg.T, cfg.dt);

    MarchArtifacts art;
    art.margin = sys.margin;
    art.residual_max = residual(sys, sol);
    art.steps = sol.steps;

    {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> series;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            labels.push_back("alpha_" + std::to_string(i));
            series.push_back(sol.alpha[i].samples);
        }
        write_time_table(dir / "alpha.csv", times, labels, series);
    }

    if (!cfg.probes.empty()) {
        const ProbeSet ps = make_probe_set(cfg.probes, cluster, cfg.source, cfg.exclusion);
        for (FieldKind kind : cfg.probe_kinds) {
            std::vector<std::string> labels;
            std::vector<std::vector<double>> series(ps.points.size());
            for (std::size_t p = 0; p < ps.points.size(); ++p) {
                labels.push_back("probe_" + std::to_string(p));
                series[p].resize(times.size());
            }
            parallel_for(ps.points.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
                for (std::size_t p = b; p < e; ++p)
                    for (std::size_t n = 0; n < times.size(); ++n)
                        series[p][n] = eval_field(sys, sol, ps.points[p], times[n], kind);
            });
            write_time_table(dir / ("probes_" + std::string(field_kind_name(kind)) + ".csv"),
                             times, labels, series);
            if (kind == FieldKind::scattered)
                for (const auto& s : series)
                    for (double v : s) art.peak_scattered = std::max(art.peak_scattered, std::abs(v));
        }
    }

    if (cfg.have_grid) {
        const std::vector<vec3> pts = cfg.grid.points();
        const GridEvalResult ge = grid_eval(sys, sol, pts, cfg.snapshot_times, cfg.grid_kind,
                                            cfg.exclusion, cfg.threads);
        for (std::size_t s = 0; s < ge.times.size(); ++s) {
            const std::string name = "snapshot_" + std::string(field_kind_name(cfg.grid_kind)) +
                                     "_" + zero_pad3(s) + ".csv";
            write_point_table(dir / name, pts, ge.values[s]);
        }
    }

    ConfigDoc rep;
    auto& r = rep.add("result");
    r.set("steps", std::to_string(sol.steps));
    r.set("dt", sol.dt);
    r.set("margin", art.margin);
    r.set("residual", art.residual_max);
    r.set("converged", sol.converged ? "true" : "false");
    if (sys.margin < 1.0) {
        const StabilityReport st = stability_check(sys, sol);
        art.stability_ok = st.ok;
        art.stability_ratio = st.worst_ratio;
        art.stability_bound = st.bound;
        r.set("stability_ok", st.ok ? "true" : "false");
        r.set("stability_ratio", st.worst_ratio);
        r.set("stability_bound", st.bound);
    } else {
        r.set("stability_ok", "unchecked");
    }
    write_config(dir / "report.cfg", rep);
    return art;
}

// Empty cluster: the scattered field is identically zero, so the tables are
// written without a march. Incident and total still carry the source.
inline void empty_cluster_run(const RunConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::vector<double> times = march_grid_times(cfg.T, cfg.dt);
    write_time_table(dir / "alpha.csv", times, {}, {});

    auto value_at = [&](const vec3& x, double t, FieldKind kind) {
        if (kind == FieldKind::scattered) return 0.0;
        const double d = dist(x, cfg.source.position);
        if (d <= cfg.exclusion || d == 0.0) return std::numeric_limits<double>::quiet_NaN();
        return incident_field(cfg.source, x, t);
    };

    for (std::size_t p = 0; p < cfg.probes.size(); ++p)
        require(dist(cfg.probes[p], cfg.source.position) > cfg.exclusion,
                "probe " + std::to_string(p) + " is within the exclusion radius of the source");
    if (!cfg.probes.empty()) {
        for (FieldKind kind : cfg.probe_kinds) {
            std::vector<std::string> labels;
            std::vector<std::vector<double>> series(cfg.probes.size());
            for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
                labels.push_back("probe_" + std::to_string(p));
                series[p].resize(times.size());
                for (std::size_t n = 0; n < times.size(); ++n)
                    series[p][n] = value_at(cfg.probes[p], times[n], kind);
            }
            write_time_table(dir / ("probes_" + std::string(field_kind_name(kind)) + ".csv"),
                             times, labels, series);
        }
    }
    if (cfg.have_grid) {
        const std::vector<vec3> pts = cfg.grid.points();
        for (std::size_t s = 0; s < cfg.snapshot_times.size(); ++s) {
            std::vector<double> vals(pts.size());
            for (std::size_t p = 0; p < pts.size(); ++p)
                vals[p] = value_at(pts[p], cfg.snapshot_times[s], cfg.grid_kind);
            const std::string name = "snapshot_" + std::string(field_kind_name(cfg.grid_kind)) +
                                     "_" + zero_pad3(s) + ".csv";
            write_point_table(dir / name, pts, vals);
        }
    }
    ConfigDoc rep;
    auto& r = rep.add("result");
    r.set("steps", std::to_string(times.size() - 1));
    r.set("dt", cfg.dt);
    r.set("margin", 0.0);
    r.set("residual", 0.0);
    r.set("converged", "true");
    r.set("stability_ok", "true");
    write_config(dir / "report.cfg", rep);
}

}  // namespace detail

// ---- commands ----

inline int run_simulate(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg.out_dir / "manifest.cfg", manifest_doc(cfg));

    if (cfg.holes.empty()) {
        detail::empty_cluster_run(cfg, cfg.out_dir);
        return 0;
    }
    if (cfg.radius_sweep.empty()) {
        detail::march_cluster_run(cfg, cfg.holes, cfg.out_dir);
        return 0;
    }
    std::vector<std::vector<double>> summary;
    for (std::size_t k = 0; k < cfg.radius_sweep.size(); ++k) {
        const double r = cfg.radius_sweep[k];
        std::vector<Hole> holes = cfg.holes;
        for (auto& h : holes) {
            h.shape = SphereShape{r};
            h.capacitance.reset();  // swept spheres get the closed-form value
        }
        const auto art =
            detail::march_cluster_run(cfg, holes, cfg.out_dir / ("eps_" + detail::zero_pad3(k)));
        summary.push_back({r, art.peak_scattered, art.residual_max, art.margin});
    }
    write_csv(cfg.out_dir / "sweep_summary.csv", {"radius", "peak_scattered", "residual", "margin"},
              summary);
    return 0;
}

inline int run_oracle_validate(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg.out_dir / "manifest.cfg", manifest_doc(cfg));

    const OracleComparison cmp =
        compare_with_asymptotic(cfg.oracle_center, cfg.source, cfg.oracle_probe,
                                cfg.oracle_times, cfg.oracle_radii, cfg.oracle_substeps);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < cmp.radii.size(); ++i)
        rows.push_back({cmp.radii[i], cmp.errors[i]});
    write_csv(cfg.out_dir / "sweep.csv", {"radius", "error"}, rows);

    const bool pass = cmp.slope >= cfg.slope_threshold;  // NaN slope fails
    ConfigDoc rep;
    auto& r = rep.add("result");
    r.set("slope", std::isnan(cmp.slope) ? "undefined" : fmt_g17(cmp.slope));
    r.set("threshold", cfg.slope_threshold);
    r.set("verdict", pass ? "pass" : "fail");
    write_config(cfg.out_dir / "report.cfg", rep);
    return pass ? 0 : 2;
}

namespace detail {

inline std::vector<double> medium_cbar_values(const RunConfig& cfg, const VoxelGrid& grid) {
    if (cfg.medium_cbar_file.empty())
        return std::vector<double>(grid.voxel_count(), cfg.medium_cbar);
    const NodeField nf = read_node_field(cfg.medium_cbar_file);
    return sample_cbar(grid, [&](vec3 x) { return nf.trilinear(x); });
}

inline Cluster medium_comparison_cluster(const RunConfig& cfg, std::size_t count) {
    const double a = cfg.medium_box.volume() / double(count);
    if (cfg.medium_cbar_file.empty())
        return periodic_layout(cfg.medium_box, a, cfg.medium_cbar);
    const NodeField nf = read_node_field(cfg.medium_cbar_file);
    return layout_from_cbar(nf, a);
}

}  // namespace detail

inline int run_medium(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg.out_dir / "manifest.cfg", manifest_doc(cfg));

    const VoxelGrid grid = VoxelGrid::regular(cfg.medium_box, cfg.medium_cells, cfg.medium_cells,
                                              cfg.medium_cells);
    for (std::size_t p = 0; p < cfg.probes.size(); ++p)
        require(!cfg.medium_box.contains(cfg.probes[p], 0.0),
                "probe " + std::to_string(p) + " lies inside the medium box; the volume "
                "solution is compared at exterior points only");

    MediumOptions mopts;
    mopts.interp = cfg.interp;
    mopts.threads = cfg.threads;
    const MediumSolution med =
        march_volume(grid, detail::medium_cbar_values(cfg, grid), cfg.source, cfg.T, cfg.dt,
                     mopts);
    const std::vector<double> times = march_grid_times(cfg.T, cfg.dt);

    for (FieldKind kind : cfg.probe_kinds) {
        std::vector<std::string> labels;
        std::vector<std::vector<double>> series(cfg.probes.size());
        for (std::size_t p = 0; p < cfg.probes.size(); ++p) {
            labels.push_back("probe_" + std::to_string(p));
            series[p].resize(times.size());
        }
        parallel_for(cfg.probes.size(), cfg.threads, [&](std::size_t b, std::size_t e) {
            for (std::size_t p = b; p < e; ++p)
                for (std::size_t n = 0; n < times.size(); ++n) {
                    const vec3& x = cfg.probes[p];
                    const double t = times[n];
                    series[p][n] = (kind == FieldKind::scattered)
                                       ? medium_scattered_field(med, x, t)
                                       : (kind == FieldKind::total)
                                             ? medium_total_field(med, x, t)
                                             : incident_field(cfg.source, x, t);
                }
        });
        write_time_table(cfg.out_dir / ("probes_" + std::string(field_kind_name(kind)) + ".csv"),
                         times, labels, series);
    }

    ConfigDoc rep;
    auto& r = rep.add("result");
    r.set("steps", std::to_string(med.steps));
    r.set("dt", med.dt);
    r.set("residual", residual_volume(med));
    double integral = 0.0;
    for (double c : med.cbar) integral += c * grid.voxel_volume();
    r.set("capacitance_integral", integral);

    if (cfg.compare_count > 0) {
        Cluster cluster = detail::medium_comparison_cluster(cfg, cfg.compare_count);
        const RetardedSystem sys = assemble(cluster, cfg.source);
        MarchOptions opts;
        opts.interp = cfg.interp;
        opts.tol = cfg.tol;
        opts.force = cfg.force;
        opts.threads = cfg.threads;
        const SystemSolution sol = march(sys, cfg.T, cfg.dt, opts);
        const MediumComparison cmp =
            compare_cluster_vs_medium(sys, sol, med, cfg.probes, times);
        auto& c = rep.add("compare");
        c.set("count", std::to_string(cluster.size()));
        c.set("cluster_capacitance_sum", cmp.cluster_capacitance_sum);
        c.set("medium_capacitance_integral", cmp.medium_capacitance_integral);
        c.set("max_diff", cmp.max_diff);
        c.set("field_scale", cmp.field_scale);
        c.set("relative_diff", cmp.field_scale > 0.0
                                   ? cmp.max_diff / cmp.field_scale
                                   : std::numeric_limits<double>::quiet_NaN());
        c.set("cluster_margin", sys.margin);
        c.set("cluster_residual", residual(sys, sol));
    }
    write_config(cfg.out_dir / "report.cfg", rep);
    return 0;
}

inline int run_design(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg.out_dir / "manifest.cfg", manifest_doc(cfg));

    const NodeField input = read_node_field(cfg.design_input);
    ConfigDoc rep;
    auto& r = rep.add("result");
    bool pass = true;

    if (cfg.design_kind == "rho") {
        const PressureResult pr = p_from_rho(input);
        const NodeField cbar = cbar_from_p(pr.p);
        write_node_field(cfg.out_dir / "p.csv", pr.p);
        write_node_field(cfg.out_dir / "cbar.csv", cbar);
        const Cluster layout = layout_from_cbar(cbar, cfg.design_cell_volume);
        write_cluster_config(cfg.out_dir / "layout.cfg", layout);
        r.set("boundary_adjustment", pr.boundary_adjustment);
        r.set("holes", std::to_string(layout.size()));
    } else {
        const NodeField p = solve_p(input, cfg.design_tol);
        const NodeField recovered = cbar_from_p(p);
        write_node_field(cfg.out_dir / "p.csv", p);
        write_node_field(cfg.out_dir / "recovered.csv", recovered);
        const Cluster layout = layout_from_cbar(input, cfg.design_cell_volume);
        write_cluster_config(cfg.out_dir / "layout.cfg", layout);

        // The recovery is algebraically tied to the solve, so the error is
        // solver noise; the reported bound is the quadratic envelope of the
        // scheme with an absolute floor at the solve tolerance scale.
        double err = 0.0, cmax = 0.0;
        const std::size_t npa = input.nodes_per_axis();
        for (std::size_t k = 0; k < npa; ++k)
            for (std::size_t j = 0; j < npa; ++j)
                for (std::size_t i = 0; i < npa; ++i) {
                    cmax = std::max(cmax, std::abs(input.values[input.idx(i, j, k)]));
                    if (input.is_boundary(i, j, k)) continue;
                    err = std::max(err, std::abs(recovered.values[recovered.idx(i, j, k)] -
                                                 input.values[input.idx(i, j, k)]));
                }
        const double bound = cmax / (double(input.n) * double(input.n)) + 1e-7;
        pass = err <= bound;
        r.set("roundtrip_error", err);
        r.set("roundtrip_bound", bound);
        r.set("verdict", pass ? "pass" : "fail");
        r.set("holes", std::to_string(layout.size()));
    }
    write_config(cfg.out_dir / "report.cfg", rep);
    return pass ? 0 : 2;
}

namespace detail {

// Scattered cluster field at the probes and times, one row per probe.
inline std::vector<std::vector<double>> probe_matrix_cluster(const RetardedSystem& sys,
                                                             const SystemSolution& sol,
                                                             const std::vector<vec3>& probes,
                                                             const std::vector<double>& times) {
    std::vector<std::vector<double>> out(probes.size(),
                                         std::vector<double>(times.size(), 0.0));
    for (std::size_t p = 0; p < probes.size(); ++p)
        for (std::size_t n = 0; n < times.size(); ++n)
            out[p][n] = scattered_field(sys, sol, probes[p], times[n]);
    return out;
}

inline double max_abs_diff(const std::vector<std::vector<double>>& a,
                           const std::vector<std::vector<double>>& b) {
    double m = 0.0;
    for (std::size_t p = 0; p < a.size(); ++p)
        for (std::size_t n = 0; n < a[p].size(); ++n)
            m = std::max(m, std::abs(a[p][n] - b[p][n]));
    return m;
}

inline void write_rates(const RunConfig& cfg, const std::string& param_label,
                        const std::vector<double>& params, const std::vector<double>& errors,
                        ConfigDoc& rep) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < params.size(); ++i) rows.push_back({params[i], errors[i]});
    write_csv(cfg.out_dir / "rates.csv", {param_label, "error"}, rows);
    const double slope = fit_loglog_slope(params, errors);
    auto& r = rep.add("result");
    r.set("parameter", param_label);
    r.set("slope", std::isnan(slope) ? "undefined" : fmt_g17(slope));
}

}  // namespace detail

inline int run_convergence(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    write_config(cfg.out_dir / "manifest.cfg", manifest_doc(cfg));
    ConfigDoc rep;

    if (cfg.sweep_mode == "radius") {
        const OracleComparison cmp =
            compare_with_asymptotic(cfg.oracle_center, cfg.source, cfg.oracle_probe,
                                    cfg.oracle_times, cfg.oracle_radii, cfg.oracle_substeps);
        detail::write_rates(cfg, "radius", cmp.radii, cmp.errors, rep);
    } else if (cfg.sweep_mode == "dt") {
        Cluster cluster(cfg.holes);
        fill_capacitances(cluster, cfg.threads);
        const RetardedSystem sys = assemble(cluster, cfg.source);
        const ProbeSet ps = make_probe_set(cfg.probes, cluster, cfg.source, cfg.exclusion);
        MarchOptions opts;
        opts.interp = cfg.interp;
        opts.tol = cfg.tol;
        opts.force = cfg.force;
        opts.threads = cfg.threads;

        std::vector<double> dts = cfg.sweep_dts;
        std::sort(dts.begin(), dts.end(), std::greater<>());
        std::vector<std::vector<std::vector<double>>> fields;
        for (double dt : dts) {
            const SystemSolution sol = march(sys, cfg.T, dt, opts);
            fields.push_back(
                detail::probe_matrix_cluster(sys, sol, ps.points, cfg.eval_times));
        }
        std::vector<double> params(dts.begin(), dts.end() - 1), errors;
        for (std::size_t k = 0; k + 1 < dts.size(); ++k)
            errors.push_back(detail::max_abs_diff(fields[k], fields.back()));
        detail::write_rates(cfg, "dt", params, errors, rep);
    } else if (cfg.sweep_mode == "volume") {
        std::vector<std::size_t> cells = cfg.sweep_cells;
        std::sort(cells.begin(), cells.end());
        MediumOptions mopts;
        mopts.interp = cfg.interp;
        mopts.threads = cfg.threads;
        std::vector<std::vector<std::vector<double>>> fields;
        std::vector<double> hs;
        for (std::size_t c : cells) {
            const VoxelGrid grid = VoxelGrid::regular(cfg.medium_box, c, c, c);
            hs.push_back(grid.h);
            const double dt = grid.h / cfg.source.c0;  // halves with h
            const MediumSolution med = march_volume(
                grid, detail::medium_cbar_values(cfg, grid), cfg.source, cfg.T, dt, mopts);
            std::vector<std::vector<double>> f(cfg.probes.size(),
                                               std::vector<double>(cfg.eval_times.size()));
            for (std::size_t p = 0; p < cfg.probes.size(); ++p)
                for (std::size_t n = 0; n < cfg.eval_times.size(); ++n)
                    f[p][n] = medium_scattered_field(med, cfg.probes[p], cfg.eval_times[n]);
            fields.push_back(std::move(f));
        }
        std::vector<double> params(hs.begin(), hs.end() - 1), errors;
        for (std::size_t k = 0; k + 1 < cells.size(); ++k)
            errors.push_back(detail::max_abs_diff(fields[k], fields.back()));
        detail::write_rates(cfg, "h", params, errors, rep);
    } else {  // cells: hole-count sweep against one fixed medium
        const VoxelGrid grid = VoxelGrid::regular(cfg.medium_box, cfg.medium_cells,
                                                  cfg.medium_cells, cfg.medium_cells);
        MediumOptions mopts;
        mopts.interp = cfg.interp;
        mopts.threads = cfg.threads;
        const MediumSolution med = march_volume(
            grid, detail::medium_cbar_values(cfg, grid), cfg.source, cfg.T, cfg.dt, mopts);
        std::vector<std::vector<double>> medium_field(
            cfg.probes.size(), std::vector<double>(cfg.eval_times.size()));
        double med_sq = 0.0;
        for (std::size_t p = 0; p < cfg.probes.size(); ++p)
            for (std::size_t n = 0; n < cfg.eval_times.size(); ++n) {
                medium_field[p][n] = medium_scattered_field(med, cfg.probes[p], cfg.eval_times[n]);
                med_sq += medium_field[p][n] * medium_field[p][n];
            }

        MarchOptions opts;
        opts.interp = cfg.interp;
        opts.tol = cfg.tol;
        opts.force = cfg.force;
        opts.threads = cfg.threads;
        std::vector<double> params, errors;
        bool monotone = true;
        for (std::size_t count : cfg.sweep_counts) {
            Cluster cluster = detail::medium_comparison_cluster(cfg, count);
            const RetardedSystem sys = assemble(cluster, cfg.source);
            const SystemSolution sol = march(sys, cfg.T, cfg.dt, opts);
            const auto f = detail::probe_matrix_cluster(sys, sol, cfg.probes, cfg.eval_times);
            double diff_sq = 0.0;
            for (std::size_t p = 0; p < f.size(); ++p)
                for (std::size_t n = 0; n < f[p].size(); ++n) {
                    const double d = f[p][n] - medium_field[p][n];
                    diff_sq += d * d;
                }
            params.push_back(double(cluster.size()));
            errors.push_back(med_sq > 0.0 ? std::sqrt(diff_sq / med_sq)
                                          : std::numeric_limits<double>::quiet_NaN());
            if (errors.size() >= 2 && !(errors.back() < errors[errors.size() - 2]))
                monotone = false;
        }
        detail::write_rates(cfg, "count", params, errors, rep);
        rep.sections.back().set("monotone", monotone ? "true" : "false");
    }
    write_config(cfg.out_dir / "report.cfg", rep);
    return 0;
}

inline int run_command(const RunConfig& cfg) {
    if (cfg.command == "simulate") return run_simulate(cfg);
    if (cfg.command == "oracle-validate") return run_oracle_validate(cfg);
    if (cfg.command == "medium") return run_medium(cfg);
    if (cfg.command == "design") return run_design(cfg);
    if (cfg.command == "convergence") return run_convergence(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace tdscat
