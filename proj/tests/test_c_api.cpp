// exercises the shared library through its C header only

#include "formred/formred.h"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <thread>

using json = nlohmann::json;

namespace {

json take(char* s) {
    REQUIRE(s != nullptr);
    json j = json::parse(s);
    fr_string_free(s);
    return j;
}

fr_form* form_of(const char* text) {
    fr_form* f = nullptr;
    REQUIRE(fr_form_from_json(text, nullptr, &f) == FR_OK);
    REQUIRE(f != nullptr);
    return f;
}

} // namespace

TEST_CASE("version and defaults") {
    CHECK(std::strlen(fr_version()) > 0);
    fr_options o;
    fr_options_init(&o);
    CHECK(o.eps == 0);
    CHECK(o.tol > 0);
    CHECK(o.max_steps > 0);
    CHECK(o.classic == 0);
    fr_selftest_options s;
    fr_selftest_options_init(&s);
    CHECK(s.count > 0);
    fr_options_init(nullptr);
}

TEST_CASE("forms from json, coefficients and roots") {
    fr_form* f = form_of(R"({"coeffs":[1,0,0,0,-1]})");
    CHECK(fr_form_degree(f) == 4);
    CHECK(fr_form_infinite_roots(f) == 0);
    double re[4], im[4];
    REQUIRE(fr_form_roots(f, re, im, 4) == FR_OK);
    for (int i = 0; i < 4; ++i) CHECK(std::hypot(re[i], im[i]) == doctest::Approx(1));
    CHECK(fr_form_roots(f, re, im, 3) == FR_ERR_INPUT);
    CHECK(std::string(fr_last_error_code()) == "InvalidArgument");
    fr_form_free(f);

    const double c[] = {1, -6, 11, -6};
    fr_form* g = nullptr;
    REQUIRE(fr_form_from_coeffs(c, 4, nullptr, &g) == FR_OK);
    CHECK(fr_form_degree(g) == 3);
    char* text = nullptr;
    REQUIRE(fr_form_to_json(g, &text) == FR_OK);
    json j = take(text);
    CHECK(j["degree"] == 3);
    fr_form_free(g);

    const double r_re[] = {0, 0, 2}, r_im[] = {1, -1, 0};
    fr_form* h = nullptr;
    REQUIRE(fr_form_from_roots(r_re, r_im, 3, 2.0, &h) == FR_OK);
    CHECK(fr_form_degree(h) == 3);
    fr_form_free(h);
    fr_form_free(nullptr);
}

TEST_CASE("input errors") {
    fr_form* f = nullptr;
    CHECK(fr_form_from_json("{", nullptr, &f) == FR_ERR_INPUT);
    CHECK(f == nullptr);
    CHECK(std::string(fr_last_error_code()) == "MalformedInput");
    CHECK(std::strlen(fr_last_error()) > 0);

    CHECK(fr_form_from_json(R"({"coeffs":[1,0,1]})", nullptr, &f) == FR_ERR_INPUT);
    CHECK(std::string(fr_last_error_code()) == "DegreeTooLow");

    CHECK(fr_form_from_json(nullptr, nullptr, &f) == FR_ERR_INPUT);
    CHECK(fr_form_from_json("{}", nullptr, nullptr) == FR_ERR_INPUT);

    const double re[] = {0, 0, 1}, im[] = {1, -2, 0};
    CHECK(fr_form_from_roots(re, im, 3, 1.0, &f) == FR_ERR_INPUT);
    CHECK(std::string(fr_last_error_code()) == "ConjugacyViolation");

    double t = 0, u = 0;
    CHECK(fr_covariant(nullptr, nullptr, &t, &u) == FR_ERR_INPUT);
    CHECK(std::string(fr_last_error()).find("null") != std::string::npos);

    fr_form* ok = form_of(R"({"coeffs":[1,0,0,0,-1]})");
    CHECK(std::string(fr_last_error()).empty());
    fr_form_free(ok);
}

TEST_CASE("errors are per thread") {
    fr_form* f = nullptr;
    CHECK(fr_form_from_json("{", nullptr, &f) == FR_ERR_INPUT);
    std::string other = "unset";
    std::thread th([&] { other = fr_last_error(); });
    th.join();
    CHECK(other.empty());
    CHECK(std::strlen(fr_last_error()) > 0);
}

TEST_CASE("covariant") {
    fr_form* f = form_of(R"({"coeffs":[1,0,0,0,-1]})");
    double t = -1, u = -1;
    REQUIRE(fr_covariant(f, nullptr, &t, &u) == FR_OK);
    CHECK(std::abs(t) < 1e-12);
    CHECK(std::abs(u - 1) < 1e-12);
    char* out = nullptr;
    REQUIRE(fr_covariant_json(f, nullptr, &out) == FR_OK);
    json j = take(out);
    CHECK(j["degree"] == 4);
    CHECK(j["u"].get<double>() == doctest::Approx(1));
    fr_form_free(f);

    fr_form* bad = form_of(R"({"roots":[[1,0],[1,0],[1,0],[2,0]]})");
    CHECK(fr_covariant(bad, nullptr, &t, &u) == FR_ERR_INPUT);
    CHECK(std::string(fr_last_error_code()) == "DegenerateCluster");
    fr_form_free(bad);
}

TEST_CASE("reduce") {
    fr_form* f = form_of(
        R"({"roots":[[7,0],[7.309017,0.951057],[7.309017,-0.951057],[6.190983,0.587785],[6.190983,-0.587785]]})");
    for (int classic : {0, 1}) {
        fr_options o;
        fr_options_init(&o);
        o.classic = classic;
        fr_reduction* red = nullptr;
        REQUIRE(fr_reduce(f, &o, &red) == FR_OK);
        int64_t m[4];
        fr_reduction_matrix(red, m);
        CHECK(m[0] * m[3] - m[1] * m[2] == 1);
        double t = 9, u = 0;
        fr_reduction_final_z(red, &t, &u);
        CHECK(std::abs(t) <= 0.5 + 1e-9);
        CHECK(t * t + u * u >= 1 - 1e-9);
        CHECK(fr_reduction_step_count(red) >= 1);

        fr_form* g = nullptr;
        REQUIRE(fr_reduction_form(red, &g) == FR_OK);
        CHECK(fr_form_degree(g) == 5);
        fr_form_free(g);

        char* out = nullptr;
        REQUIRE(fr_reduction_to_json(red, &out) == FR_OK);
        json j = take(out);
        CHECK(j["method"] == (classic ? "classic" : "cluster"));
        CHECK(j["reduced"] == true);
        CHECK(j.contains("eps") == !classic);
        CHECK(j["trace"]["steps"].size() == fr_reduction_step_count(red));
        fr_reduction_free(red);
    }
    fr_form_free(f);

    fr_reduction_free(nullptr);
    CHECK(fr_reduction_step_count(nullptr) == 0);
    fr_reduction* red = nullptr;
    CHECK(fr_reduce(nullptr, nullptr, &red) == FR_ERR_INPUT);

    fr_form* far = form_of(R"({"roots":[[1000.3,0.001],[1000.3,-0.001],[1000.2,0],[1000.4,0]]})");
    fr_options o;
    fr_options_init(&o);
    o.classic = 1;
    o.max_steps = 1;
    CHECK(fr_reduce(far, &o, &red) == FR_ERR_CONVERGENCE);
    CHECK(std::string(fr_last_error_code()) == "StepLimit");
    fr_form_free(far);
}

TEST_CASE("classify") {
    fr_form* f = form_of(R"({"roots":[[0,1e-6],[0,-1e-6],[-300,0],[400,0]]})");
    fr_classification* c = nullptr;
    REQUIRE(fr_classify(f, 0, &c) == FR_OK);
    CHECK(std::string(fr_classification_tag(c)) == "Close-RealProductSmall");
    CHECK(std::string(fr_classification_label(c)) == "3d-iv");
    char* out = nullptr;
    REQUIRE(fr_classification_to_json(c, &out) == FR_OK);
    CHECK(take(out)["label"] == "3d-iv");
    fr_classification_free(c);
    fr_form_free(f);
    CHECK(std::string(fr_classification_tag(nullptr)).empty());
}

TEST_CASE("bounds") {
    fr_form* f = form_of(R"({"roots":[[1,2],[1,-2],[1.1,2.05],[1.1,-2.05]]})");
    char* out = nullptr;
    size_t bad = 99;
    REQUIRE(fr_bounds_json(f, nullptr, &out, &bad) == FR_OK);
    json j = take(out);
    CHECK(j["violations"] == bad);
    CHECK(j["evaluated"] == j["reports"].size());
    CHECK(j["eps"].size() == 6);
    fr_form_free(f);

    fr_form* inf = form_of(R"({"roots":[[0,1],[0,-1],[1,0]],"infinite_roots":1})");
    CHECK(fr_form_degree(inf) == 4);
    CHECK(fr_form_infinite_roots(inf) == 1);
    CHECK(fr_bounds_json(inf, nullptr, &out, &bad) == FR_ERR_INPUT);
    double t, u;
    CHECK(fr_covariant(inf, nullptr, &t, &u) == FR_OK);
    fr_form_free(inf);
}

TEST_CASE("selftest") {
    fr_selftest_options o;
    fr_selftest_options_init(&o);
    o.count = 200;
    o.seed = 3;
    char* out = nullptr;
    size_t bad = 0, failed = 7;
    REQUIRE(fr_selftest_json(&o, &out, &bad, &failed) == FR_OK);
    json j = take(out);
    CHECK(j["count"] == 200);
    CHECK(j["violations"] == bad);
    CHECK(failed == 0);
    CHECK(j["tags"].size() == 12);
    CHECK(j["first_instance"].size() == 12);
    CHECK(fr_selftest_json(&o, nullptr, &bad, &failed) == FR_ERR_INPUT);
}
