#include <doctest.h>

#include "stepanov/report.hpp"

using namespace stepanov;

TEST_CASE("reals print at full precision and round-trip textually") {
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(-2.5e-13) == "-2.4999999999999999e-13");
    CHECK(format_real(0.0) == "0");
}

TEST_CASE("objects keep insertion order") {
    Json o = Json::object();
    o.set("zeta", Json::integer(1));
    o.set("alpha", Json::integer(2));
    o.set("mid", Json::boolean(false));
    std::string s = o.dump(0);
    CHECK(s.find("zeta") < s.find("alpha"));
    CHECK(s.find("alpha") < s.find("mid"));
}

TEST_CASE("nested document serializes stably") {
    Json root = Json::object();
    root.set("name", Json::str("x\"y\\z"));
    Json arr = Json::array();
    arr.push(Json::real(0.5));
    arr.push(Json::null());
    root.set("values", arr);
    Eigen::VectorXd v(2);
    v << 1.5, -3.0;
    root.set("point", Json::reals(v));
    std::string a = root.dump();
    std::string b = root.dump();
    CHECK(a == b);
    CHECK(a.find("\"x\\\"y\\\\z\"") != std::string::npos);
    CHECK(a.find("null") != std::string::npos);
    CHECK(a.back() == '\n');
}

TEST_CASE("control characters are escaped") {
    Json s = Json::str(std::string("a\nb\t") + '\x01');
    std::string out = s.dump(0);
    CHECK(out.find("\\n") != std::string::npos);
    CHECK(out.find("\\t") != std::string::npos);
    CHECK(out.find("\\u0001") != std::string::npos);
}
