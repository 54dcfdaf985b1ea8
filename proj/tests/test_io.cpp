#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <limits>
#include <stdexcept>
#include <string>

#include "tdscat/io.hpp"
#include "tdscat/mesh.hpp"

using namespace tdscat;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test run; contents are overwritten freely.
fs::path scratch() {
    const fs::path dir = fs::temp_directory_path() / "tdscat_test_io";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("csv tables format a header and g17 rows") {
    const std::string text = csv_table({"a", "b"}, {{1.0, 0.5}, {2.0, 1e-9}});
    CHECK(text ==
          "a,b\n"
          "1,0.5\n"
          "2,1.0000000000000001e-09\n");
    CHECK_THROWS_AS(csv_table({"a", "b"}, {{1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(csv_table({}, {}), std::invalid_argument);
}

TEST_CASE("time tables put the grid first and one column per series") {
    const fs::path path = scratch() / "trace.csv";
    write_time_table(path, {0.0, 0.1}, {"p1", "p2"}, {{1.0, 2.0}, {3.0, 4.0}});
    CHECK(read_file(path) ==
          "t,p1,p2\n"
          "0,1,3\n"
          "0.10000000000000001,2,4\n");
    CHECK_THROWS_AS(write_time_table(path, {0.0}, {"p"}, {{1.0, 2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(write_time_table(path, {0.0}, {"p", "q"}, {{1.0}}),
                    std::invalid_argument);
}

TEST_CASE("point tables write coordinates and preserve NaN as nan") {
    const fs::path path = scratch() / "snap.csv";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    write_point_table(path, {{1.0, 2.0, 3.0}, {0.0, 0.0, 0.0}}, {0.25, nan});
    CHECK(read_file(path) ==
          "x,y,z,value\n"
          "1,2,3,0.25\n"
          "0,0,0,nan\n");
}

TEST_CASE("node field files round trip with their sidecar manifest") {
    const Box box{{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
    const NodeField field = make_node_field(
        box, 3, [](vec3 x) { return 1.0 + x.x + 2.0 * x.y * x.z; });

    const fs::path path = scratch() / "field.csv";
    write_node_field(path, field);
    REQUIRE(fs::exists(node_field_meta_path(path)));

    const NodeField back = read_node_field(path);
    CHECK(back.n == field.n);
    CHECK(back.box.lo.x == box.lo.x);
    CHECK(back.box.hi.z == box.hi.z);
    REQUIRE(back.values.size() == field.values.size());
    for (std::size_t i = 0; i < field.values.size(); ++i)
        CHECK(back.values[i] == field.values[i]);

    // Rewriting produces byte-identical files.
    const std::string csv_bytes = read_file(path);
    const std::string meta_bytes = read_file(node_field_meta_path(path));
    write_node_field(path, field);
    CHECK(read_file(path) == csv_bytes);
    CHECK(read_file(node_field_meta_path(path)) == meta_bytes);
}

TEST_CASE("node field reader rejects malformed files with located errors") {
    const Box box{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    const NodeField field = make_node_field(box, 2, [](vec3) { return 1.0; });
    const fs::path path = scratch() / "bad.csv";
    write_node_field(path, field);
    const std::string good = read_file(path);

    auto message_of = [&](const std::string& text) -> std::string {
        write_file_atomic(path, text);
        try {
            read_node_field(path);
        } catch (const std::invalid_argument& e) {
            return e.what();
        }
        return {};
    };

    // Wrong header.
    std::string msg = message_of("value\n");
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find(path.string()) != std::string::npos);

    // A row out of storage order (swap rows 2 and 3).
    {
        std::string swapped = good;
        const std::size_t h = swapped.find('\n') + 1;
        const std::size_t r2 = swapped.find('\n', h) + 1;
        const std::size_t r3 = swapped.find('\n', r2) + 1;
        const std::string row2 = swapped.substr(h, r2 - h);
        const std::string row3 = swapped.substr(r2, r3 - r2);
        swapped.replace(h, r3 - h, row3 + row2);
        CHECK(message_of(swapped).find("storage order") != std::string::npos);
    }

    // Truncated file.
    CHECK(message_of(good.substr(0, good.size() / 2)).find("malformed row") !=
          std::string::npos);
    CHECK(message_of("i,j,k,value\n").find("fewer rows") != std::string::npos);

    // Extra rows.
    CHECK(message_of(good + "0,0,0,1\n").find("more rows") != std::string::npos);
}

TEST_CASE("cluster stanza files round trip spherical holes") {
    Cluster cluster({
        Hole{{0.0, 0.0, 0.0}, SphereShape{0.01}, std::nullopt},
        Hole{{0.5, 0.0, 0.0}, SphereShape{0.02}, 0.3},
    });

    const fs::path path = scratch() / "cluster.cfg";
    write_cluster_config(path, cluster);
    const auto holes = holes_from_config(read_config(path));
    REQUIRE(holes.size() == 2);
    CHECK(holes[0].center.x == 0.0);
    CHECK(std::get<SphereShape>(holes[0].shape).radius == 0.01);
    CHECK(!holes[0].capacitance.has_value());
    CHECK(holes[1].center.x == 0.5);
    CHECK(holes[1].capacitance.has_value());
    CHECK(*holes[1].capacitance == 0.3);

    // No [hole] stanzas parses as an empty cluster.
    CHECK(holes_from_config(parse_config("[time]\nT = 1\n")).empty());

    // Invalid stanza values are rejected.
    CHECK_THROWS_AS(holes_from_config(parse_config("[hole]\ncenter = 0 0 0\nradius = -1\n")),
                    std::invalid_argument);
    CHECK_THROWS_AS(holes_from_config(parse_config(
                        "[hole]\ncenter = 0 0 0\nradius = 0.1\ncapacitance = 0\n")),
                    std::invalid_argument);
}

TEST_CASE("mesh shaped holes have no flat text form") {
    Cluster cluster({Hole{{0.0, 0.0, 0.0}, MeshShape{icosphere(0), 1.0}, std::nullopt}});
    CHECK_THROWS_AS(cluster_to_config(cluster), std::invalid_argument);
}
