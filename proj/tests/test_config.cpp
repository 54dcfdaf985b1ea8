#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <stdexcept>
#include <string>

#include "tdscat/config.hpp"

using namespace tdscat;

namespace {

bool throws_mentioning(const std::function<void()>& f, const std::string& needle) {
    try {
        f();
    } catch (const std::invalid_argument& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("config parses sections, comments and repeated stanzas") {
    const std::string text =
        "# leading comment\n"
        "[time]\n"
        "T = 1.5\n"
        "  dt   =  0.01  \n"
        "\n"
        "[hole]\n"
        "center = 0 0 0\n"
        "[hole]\n"
        "center = 1 0 0\n";
    const ConfigDoc doc = parse_config(text);
    REQUIRE(doc.sections.size() == 3);
    CHECK(doc.section("time").get_double("T") == 1.5);
    CHECK(doc.section("time").get_double("dt") == 0.01);
    CHECK(doc.all("hole").size() == 2);
    CHECK(doc.all("hole")[1]->get_vec3("center").x == 1.0);
    CHECK(doc.find("missing") == nullptr);
    CHECK_THROWS_AS(doc.section("missing"), std::invalid_argument);
    CHECK_THROWS_AS(doc.section("hole"), std::invalid_argument);  // not unique
}

TEST_CASE("config round trips through serialization") {
    ConfigDoc doc;
    auto& t = doc.add("time");
    t.set("T", 0.8);
    t.set("note", "a b c");
    auto& h1 = doc.add("hole");
    h1.set("center", vec3{0.1, -0.25, 1e-9});
    auto& h2 = doc.add("hole");
    h2.set("center", vec3{0.0, 0.0, 0.0});
    h2.set("radius", 0.001);

    const std::string text = serialize_config(doc);
    const ConfigDoc back = parse_config(text);
    REQUIRE(back.sections.size() == doc.sections.size());
    for (std::size_t s = 0; s < doc.sections.size(); ++s) {
        CHECK(back.sections[s].name == doc.sections[s].name);
        CHECK(back.sections[s].entries == doc.sections[s].entries);
    }
    // Serialization of the reparse is byte-identical.
    CHECK(serialize_config(back) == text);
}

TEST_CASE("config parse errors carry line numbers") {
    CHECK(throws_mentioning([] { parse_config("[time\nT = 1\n"); }, "line 1"));
    CHECK(throws_mentioning([] { parse_config("[time]\nT 1\n"); }, "line 2"));
    CHECK(throws_mentioning([] { parse_config("[time]\nT =\n"); }, "empty value"));
    CHECK(throws_mentioning([] { parse_config("T = 1\n"); }, "before any section"));
    CHECK(throws_mentioning([] { parse_config("[time]\nT = 1\nT = 2\n"); }, "duplicate key"));
    CHECK(throws_mentioning([] { parse_config("[ti me]\n"); }, "invalid section name"));
    CHECK(throws_mentioning([] { parse_config("[time]\nbad key = 1\n"); }, "invalid key"));
}

TEST_CASE("config getters validate and fall back") {
    ConfigDoc doc = parse_config(
        "[s]\n"
        "x = 2.5\n"
        "n = 12\n"
        "flag = yes\n"
        "names = not a number\n"
        "list = 1 2 3.5\n"
        "v = 1 2\n");
    const ConfigSection& s = doc.section("s");

    CHECK(s.get_double("x") == 2.5);
    CHECK(s.get_double("absent", -1.0) == -1.0);
    CHECK(s.get_int("n") == 12);
    CHECK(s.get_int("absent", 7) == 7);
    CHECK(s.get_bool("flag", false) == true);
    CHECK(s.get_bool("absent", true) == true);
    CHECK(s.get_string("absent", "d") == "d");
    CHECK(s.get_doubles("list").size() == 3);

    CHECK_THROWS_AS(s.get_double("names"), std::invalid_argument);
    CHECK_THROWS_AS(s.get_int("x"), std::invalid_argument);
    CHECK_THROWS_AS(s.get_bool("x", false), std::invalid_argument);
    CHECK_THROWS_AS(s.get_vec3("v"), std::invalid_argument);
    CHECK_THROWS_AS(s.get_string("absent"), std::invalid_argument);
    // Error messages name the section and the key.
    CHECK(throws_mentioning([&] { s.get_double("names"); }, "[s] names"));
}

TEST_CASE("config set replaces in place and keeps order") {
    ConfigSection s{"x", {}};
    s.set("a", "1");
    s.set("b", "2");
    s.set("a", "3");
    REQUIRE(s.entries.size() == 2);
    CHECK(s.entries[0].first == "a");
    CHECK(s.entries[0].second == "3");
    CHECK(s.entries[1].first == "b");
}
