#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"

#include "bethe/error.hpp"
#include "bethe/io.hpp"
#include "bethe/learning.hpp"

using namespace bethe;

TEST_CASE("model and marginals survive a JSON round trip") {
    const auto m = generate_random_ising(5, 0.7, 0.9, 61);
    const auto back = io::model_from_json(io::json::parse(io::to_json(m).dump()));
    CHECK(back.graph == m.graph);
    CHECK(back.h == m.h);
    CHECK(back.J == m.J);

    const auto p = exact_marginals(m);
    CHECK(io::marginals_from_json(io::json::parse(io::to_json(p).dump())) == p);

    const auto g = io::graph_from_json(io::json::parse(R"({"n": 3, "edges": [[0, 1], [1, 2]]})"));
    CHECK(g.num_edges() == 2);
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(io::model_from_json(io::json::parse(R"({"n": 2, "edges": [[0, 1]], "h": [0, 0]})")), InvalidArgument);
    CHECK_THROWS_AS(io::graph_from_json(io::json::parse(R"({"n": 2, "edges": [[0, 1, 2]]})")), InvalidArgument);
    CHECK_THROWS_AS(io::graph_from_json(io::json::parse(R"({"n": 2, "edges": [[1, 0]]})")), InvalidArgument);
    CHECK_THROWS_AS(io::model_from_json(io::json::parse(R"({"n": 2, "edges": [[0, 1]], "h": [0], "J": [1]})")), ShapeMismatch);
    CHECK_THROWS_AS(io::marginals_from_json(io::json::parse(R"({"qi_plus": "x"})")), InvalidArgument);
}

TEST_CASE("trajectory round trip") {
    const auto m = symmetric_four_node(0.5);
    LearningOptions o;
    o.iters = 40;
    o.seed = 17;
    const auto t = bethe_wake_sleep(m.graph, exact_marginals(m), o);

    std::ostringstream body;
    io::write_trajectory_jsonl(body, t);
    const auto meta = io::json::parse(io::trajectory_metadata(t).dump());
    std::istringstream in(body.str());
    const auto back = io::read_trajectory(in, meta);

    REQUIRE(back.size() == t.size());
    CHECK(back.graph == t.graph);
    CHECK(back.target == t.target);
    CHECK(back.final_theta == t.final_theta);
    CHECK(back.options.epsilon == t.options.epsilon);
    CHECK(back.options.seed == t.options.seed);
    CHECK(back.options.message_init == t.options.message_init);
    for (std::size_t k = 0; k < t.size(); ++k) {
        CHECK(back.records[k].theta() == t.records[k].theta());
        CHECK(back.records[k].beliefs == t.records[k].beliefs);
        CHECK(back.records[k].converged == t.records[k].converged);
        CHECK(back.records[k].mismatch_inf == t.records[k].mismatch_inf);
    }
    std::ostringstream again;
    io::write_trajectory_jsonl(again, back);
    CHECK(again.str() == body.str());
}

TEST_CASE("format_double") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(io::format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(io::format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(io::format_double(x)) == x);
    CHECK(io::metadata_header({{"b", "2"}, {"a", "1"}}) == "# a=1\n# b=2\n");
}
