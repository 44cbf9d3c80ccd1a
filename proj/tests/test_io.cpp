#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "jrcc/errors.hpp"
#include "jrcc/io.hpp"
#include "jrcc/units.hpp"
#include "test_support.hpp"

using namespace jrcc;
using doctest::Approx;

namespace {

bool same_design(const ClutchDesign& a, const ClutchDesign& b) {
    const bool diel = a.dielectric.thickness == b.dielectric.thickness &&
                      a.dielectric.rel_permittivity == b.dielectric.rel_permittivity &&
                      a.dielectric.volume_resistivity == b.dielectric.volume_resistivity &&
                      a.dielectric.name == b.dielectric.name;
    const bool iface = a.interface.gap == b.interface.gap &&
                       a.interface.gas_permittivity == b.interface.gas_permittivity &&
                       a.interface.cof == b.interface.cof;
    const bool band = a.band.thickness == b.band.thickness && a.band.width == b.band.width &&
                      a.band.yield_stress == b.band.yield_stress;
    const bool geom = a.geometry.shaft_radius == b.geometry.shaft_radius &&
                      a.geometry.wrap_angle == b.geometry.wrap_angle &&
                      a.geometry.pretension == b.geometry.pretension;
    return diel && iface && band && geom;
}

ClutchDesign random_design(std::mt19937& rng, OperatingPoint& op) {
    auto log_uniform = [&](double lo, double hi) {
        std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
        return std::exp(u(rng));
    };
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ClutchDesign d;
    d.dielectric.thickness = log_uniform(1e-6, 1e-3);
    d.dielectric.rel_permittivity = 1.0 + 9.0 * unit(rng);
    if (unit(rng) < 0.7) d.dielectric.volume_resistivity = log_uniform(1e6, 1e12);
    if (unit(rng) < 0.5) d.dielectric.name = "batch " + std::to_string(rng() % 1000);
    d.interface.gap = log_uniform(1e-7, 1e-4);
    d.interface.gas_permittivity = 1.0 + unit(rng);
    d.interface.cof = 0.01 + 1.9 * unit(rng);
    d.band.thickness = log_uniform(1e-5, 1e-3);
    d.band.width = log_uniform(1e-3, 0.1);
    d.band.yield_stress = log_uniform(1e7, 1e10);
    d.geometry.shaft_radius = log_uniform(1e-3, 0.1);
    d.geometry.wrap_angle = (unit(rng) < 0.1) ? 0.0 : 8.0 * kRadPerWrap * unit(rng);
    d.geometry.pretension = (unit(rng) < 0.1) ? 0.0 : log_uniform(1e-3, 10.0);
    op.voltage = (unit(rng) < 0.1) ? 0.0 : 1000.0 * unit(rng);
    return d;
}

// Text payloads that stress quoting: delimiters, markers, numeric look-alikes.
const std::vector<std::string>& hostile_strings() {
    static const std::vector<std::string> pool = {
        "plain",         "has,comma",    "has \"quotes\"", "line\nbreak",
        "  padded  ",    "#leading",     "N/A",            "INFEASIBLE",
        "12.5",          "-3e4",         "nan",            "inf",
        "",              "trailing\r",   "a,b,\"c\"\nd",
    };
    return pool;
}

ResultTable random_table(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> expo(-30, 30);
    ResultTable t;
    t.provenance = {"jrcc test", "0123abc", "2026-08-25T00:00:00Z"};
    const int ncols = 2 + static_cast<int>(rng() % 4);
    for (int c = 0; c < ncols; ++c) t.columns.push_back("col_" + std::to_string(c));
    const int nrows = 1 + static_cast<int>(rng() % 8);
    for (int r = 0; r < nrows; ++r) {
        std::vector<Cell> row;
        const bool infeasible_row = unit(rng) < 0.2;
        for (int c = 0; c < ncols; ++c) {
            const double pick = unit(rng);
            if (infeasible_row && c > 0) {
                row.push_back(Cell::infeasible());
            } else if (pick < 0.55) {
                row.push_back(Cell::num((2.0 * unit(rng) - 1.0) *
                                        std::pow(10.0, expo(rng))));
            } else if (pick < 0.8) {
                const auto& pool = hostile_strings();
                row.push_back(Cell::str(pool[rng() % pool.size()]));
            } else if (infeasible_row) {
                row.push_back(Cell::infeasible());
            } else {
                row.push_back(Cell::na());
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace

TEST_CASE("bundled design files parse and round trip bit exact") {
    for (const char* name : {"designs/thick_band.cfg", "designs/thin_band.cfg"}) {
        const std::string text = read_file(testsup::data_path(name));
        const auto [design, op] = parse_design(text);
        const auto [again, op2] = parse_design(write_design(design, op));
        CHECK(same_design(design, again));
        CHECK(op.voltage == op2.voltage);
    }
    const auto [thick, op] = parse_design(read_file(testsup::data_path("designs/thick_band.cfg")));
    CHECK(thick.geometry.shaft_radius == 0.0127);
    CHECK(thick.geometry.wrap_angle == 2.25 * kRadPerWrap);
    CHECK(thick.band.yield_stress == 1.2e9);
    CHECK(thick.dielectric.volume_resistivity.has_value());
    CHECK(op.voltage == 500.0);
}

TEST_CASE("random designs survive the write/parse round trip") {
    std::mt19937 rng(424242);
    for (int i = 0; i < 25; ++i) {
        OperatingPoint op;
        const ClutchDesign d = random_design(rng, op);
        const std::string text = write_design(d, op);
        const auto [parsed, op2] = parse_design(text);
        CHECK(same_design(d, parsed));
        CHECK(op.voltage == op2.voltage);
    }
}

TEST_CASE("design units convert to SI on entry") {
    const std::string text =
        "shaft_radius = 12.7 mm\n"
        "wrap_angle = 0.5 wraps\n"
        "pretension = 50 mN\n"
        "band_width = 1 cm\n"
        "band_thickness = 25.4 um\n"
        "band_yield_stress = 120000 N/cm2\n"
        "dielectric_thickness = 55000 nm\n"
        "dielectric_permittivity = 3.9\n"
        "dielectric_resistivity = 1.8e10 ohm.cm\n"
        "gap = 1.9 \xc2\xb5m\n"  // micro sign variant of um
        "cof = 0.2\n"
        "voltage = 0.35 kV\n";
    const auto [d, op] = parse_design(text);
    CHECK(d.geometry.shaft_radius == 0.0127);
    CHECK(d.geometry.wrap_angle == 0.5 * kRadPerWrap);
    CHECK(d.geometry.pretension == Approx(0.05).epsilon(1e-15));
    CHECK(d.band.width == 0.01);
    CHECK(d.band.thickness == Approx(25.4e-6).epsilon(1e-15));
    CHECK(d.band.yield_stress == Approx(1.2e9).epsilon(1e-15));
    CHECK(d.dielectric.thickness == Approx(55e-6).epsilon(1e-15));
    CHECK(*d.dielectric.volume_resistivity == Approx(1.8e8).epsilon(1e-15));
    CHECK(d.interface.gap == Approx(1.9e-6).epsilon(1e-15));
    CHECK(op.voltage == Approx(350.0).epsilon(1e-15));
}

TEST_CASE("design parsing rejects bad keys, units and values") {
    const std::string good = read_file(testsup::data_path("designs/thick_band.cfg"));

    try {
        parse_design(good + "bogus_key = 1 m\n");
        FAIL("unknown key accepted");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
        CHECK(e.line() == 15);
    }
    try {
        parse_design(good + "gap = 2 um\n");
        FAIL("duplicate key accepted");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
        CHECK(std::string(e.what()).find("line 12") != std::string::npos);  // first use
    }
    try {
        parse_design("pretension = 2\n");
        FAIL("missing unit accepted");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("needs a unit") != std::string::npos);
        CHECK(std::string(e.what()).find("mN") != std::string::npos);  // lists accepted tokens
    }
    CHECK_THROWS_AS(parse_design("pretension = 2 furlongs\n"), ParseError);
    CHECK_THROWS_AS(parse_design("cof = 0.2 V\n"), ParseError);  // dimensionless takes no unit
    CHECK_THROWS_AS(parse_design("pretension = abc N\n"), ParseError);
    CHECK_THROWS_AS(parse_design("pretension =\n"), ParseError);
    CHECK_THROWS_AS(parse_design("= 2 N\n"), ParseError);
    CHECK_THROWS_AS(parse_design("just some words\n"), ParseError);

    // Required key missing: reported without a line number, by name.
    std::string no_gap;
    for (std::size_t pos = 0, eol; pos < good.size(); pos = eol + 1) {
        eol = good.find('\n', pos);
        const std::string line = good.substr(pos, eol - pos);
        if (line.rfind("gap", 0) != 0) no_gap += line + "\n";
    }
    try {
        parse_design(no_gap);
        FAIL("missing required key accepted");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("missing key 'gap'") != std::string::npos);
    }

    // Valid syntax, invalid physics: field invariant fires after parsing.
    CHECK_THROWS_AS(parse_design(good + "gas_permittivity = 0.2\n"), ValidationError);
}

TEST_CASE("design comments and blank lines are ignored") {
    const std::string text = read_file(testsup::data_path("designs/thin_band.cfg"));
    const std::string noisy = "# leading comment\n\n  \t\n" + text + "\n# trailing\n";
    const auto [a, opa] = parse_design(text);
    const auto [b, opb] = parse_design(noisy);
    CHECK(same_design(a, b));
    CHECK(opa.voltage == opb.voltage);

    // Trailing comment after a value.
    const auto [c, opc] = parse_design(
        "shaft_radius = 12.7 mm # as built\n" +
        std::string("wrap_angle = 3 wraps\npretension = 0.05 N\nband_width = 10 mm\n"
                    "band_thickness = 25.4 um\nband_yield_stress = 0.78 GPa\n"
                    "dielectric_thickness = 55 um\ndielectric_permittivity = 3.9\n"
                    "gap = 4.1 um\ncof = 0.2\nvoltage = 350 V\n"));
    CHECK(c.geometry.shaft_radius == 0.0127);
    CHECK_FALSE(c.dielectric.volume_resistivity.has_value());
    CHECK(opc.voltage == 350.0);
}

TEST_CASE("measurement files parse with optional power and label columns") {
    const auto base = parse_measurements(
        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm\n"
        "6.2832,100,0.05,0.0368\n");
    REQUIRE(base.size() == 1);
    CHECK_FALSE(base[0].power_areal.has_value());
    CHECK(base[0].label.empty());

    const auto full = parse_measurements(
        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm,power_mW_per_cm2,label\n"
        "6.2832,500,0.05,0.8671,2.5,bench A\n"
        "6.2832,400,0.05,0.5558,,no power logged\n");
    REQUIRE(full.size() == 2);
    CHECK(*full[0].power_areal == 25.0);  // mW/cm^2 enters as W/m^2
    CHECK(full[0].label == "bench A");
    CHECK_FALSE(full[1].power_areal.has_value());

    const auto labeled = parse_measurements(
        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm,label\n"
        "6.2832,100,0.05,0.0368,\"run, first\"\n");
    REQUIRE(labeled.size() == 1);
    CHECK(labeled[0].label == "run, first");

    const std::string bundled = read_file(testsup::data_path("measurements/cof_6pi.csv"));
    CHECK(parse_measurements(bundled).size() == 13);
}

TEST_CASE("measurement header must match exactly") {
    CHECK_THROWS_AS(parse_measurements("wrap_angle,voltage_V,pretension_N,slip_torque_Nm\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_measurements(
                        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm,extra\n"),
                    ParseError);
    CHECK_THROWS_AS(parse_measurements(
                        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm,label,"
                        "power_mW_per_cm2\n"),
                    ParseError);  // optional columns are ordered
    CHECK_THROWS_AS(parse_measurements(""), ParseError);
}

TEST_CASE("malformed measurement rows name their physical line") {
    const std::string text =
        "# bench log\n"                                              // line 1
        "\n"                                                         // line 2
        "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm\n"     // line 3
        "6.2832,100,0.05,0.0368\n"                                   // line 4
        "6.2832,150,0.05\n"                                          // line 5: short row
        "6.2832,200,0.05,0.14\n";
    try {
        parse_measurements(text);
        FAIL("short row accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
        CHECK(std::string(e.what()).find("expected 4 cells, got 3") != std::string::npos);
    }

    try {
        parse_measurements(
            "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm\n"
            "6.2832,100,0.05,not_a_number\n");
        FAIL("non-numeric cell accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("slip_torque_Nm") != std::string::npos);
    }

    try {
        parse_measurements(
            "wrap_angle_rad,voltage_V,pretension_N,slip_torque_Nm\n"
            "6.2832,100,0.05,0.04\n"
            "6.2832,100,-0.05,0.04\n");
        FAIL("negative pretension accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("pretension") != std::string::npos);
    }
}

TEST_CASE("csv table round trip is bit exact for every cell kind") {
    std::mt19937 rng(777);
    for (int i = 0; i < 30; ++i) {
        const ResultTable t = random_table(rng);
        const ResultTable back = parse_table(write_table(t, TableFormat::Csv), TableFormat::Csv);
        CHECK(back == t);
    }
}

TEST_CASE("json table round trip is bit exact for every cell kind") {
    std::mt19937 rng(778);
    for (int i = 0; i < 30; ++i) {
        const ResultTable t = random_table(rng);
        const ResultTable back =
            parse_table(write_table(t, TableFormat::Json), TableFormat::Json);
        CHECK(back == t);
    }
}

TEST_CASE("csv quoting keeps hostile text distinct from markers and numbers") {
    ResultTable t;
    t.columns = {"a", "b", "c"};
    t.add_row({Cell::str("N/A"), Cell::na(), Cell::str("12.5")});
    t.add_row({Cell::str("#note"), Cell::str(""), Cell::num(0.1)});
    const std::string csv = write_table(t, TableFormat::Csv);
    CHECK(csv.find("\"N/A\"") != std::string::npos);   // text, so quoted
    CHECK(csv.find("\"12.5\"") != std::string::npos);  // would parse as a number
    CHECK(csv.find("\"#note\"") != std::string::npos); // would parse as a comment
    CHECK(csv.find("0.1\n") != std::string::npos);     // shortest round-trip form

    const ResultTable back = parse_table(csv, TableFormat::Csv);
    CHECK(back == t);
    CHECK(back.rows[0][0].kind == Cell::Kind::Text);
    CHECK(back.rows[0][1].kind == Cell::Kind::NA);
    CHECK(back.rows[1][2].number == 0.1);
}

TEST_CASE("csv round trips a quoted cell spanning lines without losing count") {
    const std::string csv =
        "x,y\n"
        "\"multi\nline\ncell\",1\n"  // lines 2-4
        "oops_short\n";              // line 5
    try {
        parse_table(csv, TableFormat::Csv);
        FAIL("short row accepted");
    } catch (const ParseError& e) {
        CHECK(e.line() == 5);
    }
    CHECK_THROWS_AS(parse_table("x\n\"unterminated\n", TableFormat::Csv), ParseError);
    CHECK_THROWS_AS(parse_table("x\n\"a\"b\n", TableFormat::Csv), ParseError);
}

TEST_CASE("infeasible marker rows survive both formats") {
    ResultTable t;
    t.columns = {"voltage_V", "torque_Nm"};
    t.add_row({Cell::num(500.0), Cell::num(8.4)});
    t.add_row({Cell::num(-50.0), Cell::infeasible()});
    CHECK(t.row_feasible(0));
    CHECK_FALSE(t.row_feasible(1));

    const std::string csv = write_table(t, TableFormat::Csv);
    CHECK(csv.find("INFEASIBLE") != std::string::npos);
    CHECK(parse_table(csv, TableFormat::Csv) == t);

    const std::string json = write_table(t, TableFormat::Json);
    CHECK(json.find("\"feasible\": false") != std::string::npos);
    CHECK(parse_table(json, TableFormat::Json) == t);
}

TEST_CASE("json refuses a row that mixes NA with infeasible") {
    ResultTable t;
    t.columns = {"a", "b"};
    t.add_row({Cell::na(), Cell::infeasible()});
    CHECK_THROWS_AS(write_table(t, TableFormat::Json), std::logic_error);
    CHECK_NOTHROW(write_table(t, TableFormat::Csv));  // CSV tokens stay distinct
}

TEST_CASE("the per-row feasible flag is reserved in the schema") {
    ResultTable t;
    t.columns = {"feasible"};
    t.add_row({Cell::num(1.0)});
    CHECK_THROWS_AS(write_table(t, TableFormat::Csv), std::logic_error);
    CHECK_THROWS_AS(write_table(t, TableFormat::Json), std::logic_error);
}

TEST_CASE("provenance comments round trip through csv") {
    ResultTable t;
    t.provenance = {"jrcc 0.1.0", "deadbeef", "2026-08-25T12:00:00Z"};
    t.columns = {"x"};
    t.add_row({Cell::num(1.0)});
    const std::string csv = write_table(t, TableFormat::Csv);
    CHECK(csv.rfind("# tool_version=jrcc 0.1.0\n", 0) == 0);
    const ResultTable back = parse_table(csv, TableFormat::Csv);
    CHECK(back.provenance == t.provenance);
}

TEST_CASE("ragged and malformed tables are rejected") {
    CHECK_THROWS_AS(parse_table("", TableFormat::Csv), ParseError);
    CHECK_THROWS_AS(parse_table("not json at all", TableFormat::Json), ParseError);
    CHECK_THROWS_AS(parse_table(R"({"metadata":{},"columns":["a"],"rows":[{"a":true}]})",
                                TableFormat::Json),
                    ParseError);
    CHECK_THROWS_AS(parse_table(R"({"metadata":{},"columns":["a"],"rows":[{}]})",
                                TableFormat::Json),
                    ParseError);
}

TEST_CASE("number formatting is shortest round trip and locale independent") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(-0.0) == "-0");
    // The nearest double to this literal prints with a trailing 8.
    CHECK(format_double(1.2345678901234567e-300) == "1.2345678901234568e-300");
    for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, 1e-308, -2.5e-10}) {
        double back;
        REQUIRE(parse_double(format_double(v), back));
        CHECK(back == v);
    }
    double out;
    CHECK_FALSE(parse_double("", out));
    CHECK_FALSE(parse_double(" 1.5", out));
    CHECK_FALSE(parse_double("1.5 ", out));
    CHECK_FALSE(parse_double("1,5", out));
    CHECK_FALSE(parse_double("abc", out));
    CHECK(parse_double("nan", out));  // accepted here; table cells screen with isfinite
    CHECK(std::isnan(out));
}

TEST_CASE("unit tables expose their accepted tokens") {
    CHECK(unit_factor(Quantity::Length, "mm").value() == 1e-3);
    CHECK(unit_factor(Quantity::Angle, "wraps").value() == kRadPerWrap);
    CHECK(unit_factor(Quantity::Stress, "N/cm2").value() == 1e4);
    CHECK(unit_factor(Quantity::Resistivity, "ohm.cm").value() == 1e-2);
    CHECK_FALSE(unit_factor(Quantity::Length, "furlong").has_value());
    CHECK_FALSE(unit_factor(Quantity::Dimensionless, "m").has_value());
    CHECK(unit_factor(Quantity::Dimensionless, "").value() == 1.0);
    CHECK(unit_token_list(Quantity::Angle).find("wraps") != std::string::npos);
}

TEST_CASE("hashing and timestamps for provenance") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const std::string ts = now_iso8601_utc();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}

TEST_CASE("file io round trip and missing-file error") {
    const std::string path = "/tmp/jrcc_io_test.txt";
    write_file(path, "line1\nline2\n");
    CHECK(read_file(path) == "line1\nline2\n");
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_file("/tmp/jrcc_definitely_missing.txt"), ParseError);
}
