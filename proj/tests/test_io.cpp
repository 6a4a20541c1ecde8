#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "biruin/io.hpp"
#include "biruin/real.hpp"

using namespace biruin;

namespace {

std::string source_path(const std::string& rel) {
    return std::string(BIRUIN_SOURCE_DIR) + "/" + rel;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("significant-digit formatting survives a round trip", "[io]") {
    for (double x : {0.797662113307763453, 0.0189122590473019319, 0.5, 1.0, 0.0000839457318357,
                     0.9854450575143983}) {
        const std::string text = format_sig(x, 10);
        const double back = std::stod(text);
        CHECK(std::abs(back - x) <= 5e-10 * x);
        CHECK(format_sig(back, 10) == text);
    }
    CHECK(format_sig(0.125, 10) == "0.125");
    CHECK(format_sig(Real256("0.125"), 10) == "0.125");
    CHECK(format_sig(0.0, 10) == "0");
}

TEST_CASE("fixed-point rounding sends ties to the even digit", "[io]") {
    CHECK(format_fixed_half_even(0.03125, 4) == "0.0312");
    CHECK(format_fixed_half_even(0.09375, 4) == "0.0938");
    CHECK(format_fixed_half_even(0.625, 2) == "0.62");
    CHECK(format_fixed_half_even(0.875, 2) == "0.88");
    CHECK(format_fixed_half_even(-0.875, 2) == "-0.88");
    CHECK(format_fixed_half_even(1.0, 4) == "1.0000");
    CHECK(format_fixed_half_even(0.0, 4) == "0.0000");
    CHECK(format_fixed_half_even(0.99995, 4) == "1.0000");
    CHECK(format_fixed_half_even(0.12344, 4) == "0.1234");
    CHECK(format_fixed_half_even(0.12346, 4) == "0.1235");
    CHECK(format_fixed_half_even(2.5, 0) == "2");
    CHECK(format_fixed_half_even(3.5, 0) == "4");
    CHECK(format_fixed_half_even(Real256("0.03125"), 4) == "0.0312");
    CHECK(format_fixed_half_even(Real256("0.09375"), 4) == "0.0938");
}

TEST_CASE("csv body has the pinned header, LF endings, ten digits", "[io]") {
    const std::vector<double> psi = {0.797662113307763453, 0.603960601352376791,
                                     0.0189122590473019319};
    const std::string body = psi_csv(psi);
    CHECK(body.rfind("u,psi\n", 0) == 0);
    CHECK(body.find('\r') == std::string::npos);
    CHECK(body.find("0,0.7976621133\n") != std::string::npos);
    CHECK(body.back() == '\n');

    std::size_t lines = 0;
    for (char c : body)
        if (c == '\n') ++lines;
    CHECK(lines == psi.size() + 1);

    // each data row parses back to its source value at 10 digits
    std::size_t pos = body.find('\n') + 1;
    for (std::size_t u = 0; u < psi.size(); ++u) {
        const std::size_t comma = body.find(',', pos);
        const std::size_t end = body.find('\n', pos);
        CHECK(body.substr(pos, comma - pos) == std::to_string(u));
        const double back = std::stod(body.substr(comma + 1, end - comma - 1));
        CHECK(std::abs(back - psi[u]) <= 5e-10 * psi[u]);
        pos = end + 1;
    }
}

TEST_CASE("reference table file loads completely", "[io]") {
    const auto rows = load_reference_csv(source_path("data/reference_tables.csv"));
    REQUIRE(rows.size() == 156);

    std::map<int, int> per_table;
    std::map<int, std::set<std::string>> settings;
    for (const auto& r : rows) {
        per_table[r.table] += 1;
        settings[r.table].insert(r.setting);
        CHECK(r.u >= 0);
        CHECK(r.u <= 12);
        CHECK(r.psi > 0);
        CHECK(r.psi < 1);
    }
    for (int t = 1; t <= 4; ++t) {
        CHECK(per_table[t] == 39);
        CHECK(settings[t].size() == 3);
    }

    CHECK(rows.front().table == 1);
    CHECK(rows.front().setting == "cor=0");
    CHECK(rows.front().u == 0);
    CHECK(rows.front().psi == 0.7977);
}

TEST_CASE("reference table loader rejects unusable files", "[io]") {
    CHECK_THROWS_AS(load_reference_csv(source_path("data/no_such_file.csv")), ParameterError);

    const std::string empty = temp_path("biruin_empty_ref.csv");
    write_text_file(empty, "# nothing here\ntable,setting,u,psi\n");
    CHECK_THROWS_AS(load_reference_csv(empty), ParameterError);
    std::remove(empty.c_str());
}

TEST_CASE("text files write and read back unchanged", "[io]") {
    const std::string path = temp_path("biruin_io_roundtrip.txt");
    const std::string body = "u,psi\n0,0.5\n";
    write_text_file(path, body);
    std::ifstream in(path, std::ios::binary);
    std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(back == body);
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_text_file("/no_such_directory_biruin/x.txt", body), ParameterError);
}

TEST_CASE("svg plot carries the fixed probability axis", "[io]") {
    const std::vector<double> psi = {0.8, 0.6, 0.45, 0.33, 0.24, 0.17, 0.13,
                                     0.09, 0.07, 0.05, 0.04, 0.03, 0.02};
    const std::string svg = psi_svg(psi, "ruin probability, example model");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.find("0.0000") != std::string::npos);
    CHECK(svg.find("0.2500") != std::string::npos);
    CHECK(svg.find("1.0000") != std::string::npos);
    CHECK(svg.find("initial surplus u") != std::string::npos);
    CHECK(svg.find("ruin probability, example model") != std::string::npos);

    // one marker per point
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 7;
    }
    CHECK(circles == psi.size());
}
