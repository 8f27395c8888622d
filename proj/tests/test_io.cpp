#include <gtest/gtest.h>

#include <filesystem>

#include "qwalk/io.hpp"

namespace qwalk {
namespace {

using io::Json;

TEST(CoinJson, Encodings) {
    EXPECT_EQ(io::to_json(CoinOp::identity(3)).dump(), R"({"op":"I"})");
    EXPECT_EQ(io::to_json(CoinOp::increment(5, 3)).dump(), R"({"op":"Xk","k":3})");
    EXPECT_EQ(io::to_json(CoinOp::swap(4, 3, 1)).dump(), R"({"op":"swap","i":1,"j":3})");
    for (const auto& op : coin_family(5)) EXPECT_EQ(io::coin_from_json(io::to_json(op), 5), op);
}

TEST(CoinJson, Rejects) {
    EXPECT_THROW(io::coin_from_json(Json::parse(R"({"op":"H"})"), 3), FormatError);
    EXPECT_THROW(io::coin_from_json(Json::parse(R"({"op":"Xk","k":3})"), 3), FormatError);
    EXPECT_THROW(io::coin_from_json(Json::parse(R"({"op":"swap","i":0})"), 3), FormatError);
    EXPECT_THROW(io::coin_from_json(Json::parse(R"({"op":"swap","i":1,"j":1})"), 3), FormatError);
    EXPECT_THROW(io::coin_from_json(Json::parse(R"({"op":"Xk","k":"1"})"), 3), FormatError);
}

TEST(ScheduleJson, RoundTrip) {
    for (int d = 2; d <= 5; ++d) {
        for (Position p : {-3, 2}) {
            const int n = minimal_steps(d, p) + 1 + (d == 2 ? 1 : 0);
            if (!feasible(d, n, p)) continue;
            const auto s = compile(d, n, p);
            const auto j = io::to_json(s);
            EXPECT_EQ(io::schedule_from_json(j), s);
            EXPECT_EQ(io::to_json(io::schedule_from_json(io::parse(j.dump()))).dump(), j.dump());
        }
    }
}

TEST(ScheduleJson, Layout) {
    const auto j = io::to_json(compile(3, 4, 2));
    EXPECT_EQ(j.dump().substr(0, 30), R"({"d":3,"n":4,"p":2,"entries":[)");
    EXPECT_EQ(j["entries"][0].dump(), R"({"step":1,"x":0,"op":{"op":"swap","i":0,"j":2}})");
    EXPECT_EQ(j["entries"].size(), 5u);
}

TEST(ScheduleJson, Malformed) {
    const auto bad = [](const char* text) { return io::schedule_from_json(io::parse(text)); };
    EXPECT_THROW(io::parse("{not json"), FormatError);
    EXPECT_THROW(bad(R"({"n":4,"p":2,"entries":[]})"), FormatError);
    EXPECT_THROW(bad(R"({"d":1,"n":4,"p":2,"entries":[]})"), FormatError);
    EXPECT_THROW(bad(R"({"d":3,"n":4,"p":2,"entries":{}})"), FormatError);
    EXPECT_THROW(bad(R"({"d":3,"n":4,"p":2,"entries":[{"step":5,"x":0,"op":{"op":"I"}}]})"), FormatError);
    EXPECT_THROW(bad(R"({"d":3,"n":4,"p":2,"entries":[{"step":0,"x":0,"op":{"op":"I"}}]})"), FormatError);
    EXPECT_THROW(bad(R"({"d":3,"n":4,"p":2,"entries":[{"step":1,"x":0}]})"), FormatError);
    EXPECT_THROW(bad(R"({"d":3,"n":4,"p":2,"entries":[{"step":1,"x":0,"op":{"op":"Xk","k":1}},
                                                       {"step":1,"x":0,"op":{"op":"Xk","k":1}}]})"),
                 FormatError);
    EXPECT_THROW(io::read_file("/nonexistent/schedule.json"), FormatError);
}

TEST(PlanJson, RoundTrip) {
    const auto plan = plan_route(4, {3, -3});
    const auto j = io::to_json(plan);
    EXPECT_EQ(j["n"], 6);
    EXPECT_EQ(io::plan_from_json(j), plan);
    auto broken = j;
    broken["axes"][1]["n"] = 7;
    EXPECT_THROW(io::plan_from_json(broken), FormatError);
    broken = j;
    broken.erase("axes");
    EXPECT_THROW(io::plan_from_json(broken), FormatError);
}

TEST(StateJson, SortedAndPruned) {
    auto state = new_localized(3, 0, {0.6, 0.0, Complex(0.0, 0.8)});
    state = shift(state);
    const auto j = io::to_json(state);
    EXPECT_EQ(j["step"], 0);
    ASSERT_EQ(j["entries"].size(), 2u);
    EXPECT_EQ(j["entries"][0]["x"], -1);
    EXPECT_EQ(j["entries"][0]["coin"], 0);
    EXPECT_EQ(j["entries"][1]["x"], 1);
    EXPECT_EQ(j["entries"][1]["im"], 0.8);
}

TEST(StateJson, MultiWalker) {
    std::vector<Complex> v(9);
    v[joint_index(std::vector<int>{2, 1}, 3)] = 1.0;
    const auto s = MultiWalkerState::localized(2, 3, {0, 4}, v);
    EXPECT_EQ(io::to_json(s).dump(), R"({"step":0,"entries":[{"positions":[0,4],"coins":[2,1],"re":1.0,"im":0.0}]})");
}

TEST(CoinVector, AcceptedForms) {
    const auto v = io::coin_vector_from_json(io::parse(R"([0.6, [0, 0.8], {"re": 0.0, "im": 0.0}])"));
    ASSERT_EQ(v.size(), 3u);
    EXPECT_EQ(v[0], Complex(0.6, 0.0));
    EXPECT_EQ(v[1], Complex(0.0, 0.8));
    EXPECT_THROW(io::coin_vector_from_json(io::parse(R"({"a":1})")), FormatError);
    EXPECT_THROW(io::coin_vector_from_json(io::parse(R"(["x"])")), FormatError);
}

TEST(Files, WriteThenRead) {
    const auto path = std::filesystem::temp_directory_path() / "qwalk_io_roundtrip.json";
    const auto s = compile(5, 8, -2);
    io::write_file(path.string(), io::to_json(s));
    EXPECT_EQ(io::schedule_from_json(io::read_file(path.string())), s);
    std::filesystem::remove(path);
}

TEST(ReportJson, SweepLayout) {
    SweepConfig cfg;
    cfg.d_min = cfg.d_max = 2;
    cfg.p_min = cfg.p_max = 1;
    cfg.n_min = 3;
    cfg.n_max = 4;
    const auto j = io::to_json(sweep(cfg));
    EXPECT_EQ(j["tuples_checked"], 2);
    EXPECT_EQ(j["divergences"].size(), 0u);
    EXPECT_EQ(j["skipped"].size(), 2u);
    EXPECT_EQ(j["skipped"][0]["reason"], "parity of n and p differ (qubit)");
}

}  // namespace
}  // namespace qwalk
