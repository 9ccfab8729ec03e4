#include "doctest.h"

#include <sstream>

#include "hypstab/errors.hpp"
#include "hypstab/io.hpp"
#include "fixtures.hpp"

using namespace hypstab;

TEST_SUITE("io") {

TEST_CASE("polynomial kernel round trip") {
    KernelFile k;
    k.kernel = fixtures::counterexample_kernel();
    k.xi = 0.5;
    const Json j = kernel_to_json(k);
    CHECK(j.at("type") == "polynomial");
    const KernelFile back = kernel_from_json(Json::parse(j.dump()));
    CHECK(back.xi == 0.5);
    CHECK(back.kernel.kind() == KernelKind::Polynomial);
    for (double nu : {0.0, 0.3, 1.0}) CHECK(back.kernel(nu) == k.kernel(nu));
}

TEST_CASE("closed form and truncated kernels round trip") {
    const HyperbolicSystem sys = fixtures::row5();
    const DerivedConstants c = derive_constants(sys);
    for (int p : {-1, 0, 3}) {
        KernelFile k;
        k.kernel = p < 0 ? KernelSpec::closed_form(c) : truncate(c, p);
        k.xi = c.xi;
        k.system = sys;
        const KernelFile back = kernel_from_json(Json::parse(kernel_to_json(k).dump()));
        CHECK(back.kernel.kind() == k.kernel.kind());
        CHECK(back.xi == doctest::Approx(c.xi));
        CHECK(back.kernel.tau() == doctest::Approx(c.tau));
        for (double nu : {0.0, 0.7, 1.9}) CHECK(back.kernel(nu) == doctest::Approx(k.kernel(nu)).epsilon(1e-13));
    }
}

TEST_CASE("malformed kernel files") {
    CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"tau": 1.0})")), ParameterError);
    CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type": "spline"})")), ParameterError);
    CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type": "polynomial", "tau": 1.0, "coeffs": []})")),
                    ParameterError);
    CHECK_THROWS_AS(kernel_from_json(Json::parse(R"({"type": "polynomial", "tau": 1.0, "coeffs": ["x"]})")),
                    ParameterError);
    CHECK_THROWS_AS(load_kernel_file("/nonexistent/kernel.json"), ParameterError);
}

TEST_CASE("parameter table") {
    std::istringstream in(
        "q,rho,sigma_plus,sigma_minus,inv_lambda,inv_mu\n"
        "-0.7,0.5,2.3,-3.5,0.8,1.1\n"
        "1,2,three,4,5,6\n"
        "0.1,0.1,1,1,-1,1\n"
        "\n"
        "0.25,0.4,-0.8,0.7,1.0,1.2\n");
    const ParameterTable t = read_parameter_table(in);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].system.lambda == doctest::Approx(1.25));
    CHECK(t.rows[0].system.q == -0.7);
    CHECK(t.rows[1].line == 6);
    CHECK(t.warnings.size() == 2);

    std::istringstream empty("");
    CHECK(read_parameter_table(empty).rows.empty());

    std::istringstream missing("q,rho\n1,2\n");
    CHECK_THROWS_AS(read_parameter_table(missing), ParameterError);
}

TEST_CASE("criteria table is deterministic") {
    std::vector<CriteriaRow> rows{compare_all(fixtures::table_row(0)), compare_all(fixtures::table_row(1))};
    std::ostringstream a, b;
    write_criteria_csv(a, rows);
    write_criteria_csv(b, rows);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("sigma_plus") == 0);
    CHECK(criteria_to_json(rows[0]).dump() == criteria_to_json(rows[0]).dump());
}

TEST_CASE("report json") {
    const DerivedConstants c = derive_constants(fixtures::row5());
    const Json j = report_to_json(analyze(CharFn(c.xi, KernelSpec::closed_form(c))));
    CHECK(j.at("verdict") == "stable");
    CHECK(j.contains("provenance"));
    CHECK(j.at("m_zeros").empty());
}

TEST_CASE("number formatting round trips") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678}) CHECK(std::stod(format_double(x)) == x);
}

}
