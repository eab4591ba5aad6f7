#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#ifndef BVH_CLI
#error "BVH_CLI must name the command line binary"
#endif

namespace {

struct Run {
    int status = -1;
    std::string out;
};

// stdout only; stderr carries the human summary
Run run(const std::string& args) {
    std::string cmd = std::string(BVH_CLI) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

nlohmann::json as_json(const Run& r) { return nlohmann::json::parse(r.out); }

std::string tmp(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "bvh_cli_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

const std::string& file_a() {
    static std::string f = [] {
        std::string p = tmp("a3r.json");
        REQUIRE(run("build --m 3 --variant reduced --side A -o " + p).status == 0);
        return p;
    }();
    return f;
}

const std::string& file_b() {
    static std::string f = [] {
        std::string p = tmp("b3r.json");
        REQUIRE(run("build --m 3 --variant reduced --side B -o " + p).status == 0);
        return p;
    }();
    return f;
}

}  // namespace

TEST_CASE("cli params") {
    auto r = run("params --k 3 --m 3 --variant full");
    REQUIRE(r.status == 0);
    auto j = as_json(r);
    CHECK(j["schema_version"] == 1);
    CHECK(j["gamma_star"] == nlohmann::json::array({"12", "96", "384"}));
    CHECK(run("params --k 3 --m 2 --variant full").status == 2);
}

TEST_CASE("cli build") {
    auto r = run("build --m 3 --variant reduced --side B");
    REQUIRE(r.status == 0);
    auto j = as_json(r);
    CHECK(j["schema_version"] == 1);
    CHECK(j.dump() == as_json(run("build --m 3 --variant reduced --side B")).dump());
    auto dot = run("build --m 3 --variant reduced --side A --format dot");
    CHECK(dot.status == 0);
    CHECK(dot.out.rfind("graph", 0) == 0);
    CHECK(run("build --m 3 --variant sideways --side A").status == 2);
}

TEST_CASE("cli solve") {
    auto same = run("solve " + file_a() + " " + file_a() + " --pebbles 2 --rounds 3");
    CHECK(same.status == 0);
    CHECK(as_json(same)["result"] == "duplicator-wins");
    auto two = run("solve " + file_a() + " " + file_b() + " --pebbles 2 --rounds 3");
    CHECK(two.status == 0);
    auto three = run("solve " + file_a() + " " + file_b() + " --pebbles 3 --rounds 3");
    CHECK(three.status == 1);
    auto j = as_json(three);
    CHECK(j["result"] == "spoiler-wins");
    CHECK(j["witness"].size() >= 2);
    auto ef = run("solve --mode ef-order --len-a 7 --len-b 8 --rounds 3 --pebbles 3");
    CHECK(ef.status == 0);
    CHECK(run("solve --mode ef-order --len-a 6 --len-b 7 --rounds 3 --pebbles 3").status == 1);
    CHECK(run("solve " + tmp("missing.json") + " " + file_b()).status == 2);
    CHECK(run("solve " + file_a() + " " + file_b() + " --pebbles 2 --rounds 3 --max-nodes 5").status == 3);
}

TEST_CASE("cli eval") {
    auto tri = "\"(exists x1 (exists x2 (exists x3 (and (E x1 x2) (E x2 x3) (E x1 x3)))))\"";
    auto a = run("eval " + file_a() + " " + tri);
    REQUIRE(a.status == 0);
    CHECK(as_json(a)["value"] == true);
    CHECK(as_json(run("eval " + file_b() + " " + tri))["value"] == false);
    CHECK(run("eval " + file_a() + " \"(exists x (E x y))\"").status == 2);
    CHECK(run("eval " + file_a() + " \"(exists x (E x\"").status == 2);
    CHECK(as_json(run("eval " + file_a() + " \"(exists x (E x y))\" --assign y=3"))["value"] == true);
}

TEST_CASE("cli verify-strategy") {
    auto r = run("verify-strategy --m 3 --variant reduced");
    CHECK(r.status == 0);
    auto j = as_json(r);
    CHECK(j["violations"] == 0);
    CHECK(j["sequences"].get<uint64_t>() > 0);
    auto once = run("--seed 9 verify-strategy --m 3 --variant reduced --rounds 2");
    CHECK(once.out == run("--seed 9 verify-strategy --m 3 --variant reduced --rounds 2").out);
    CHECK(run("verify-strategy --m 3 --variant reduced --pebbles 3 --rounds 2").status == 2);
}

TEST_CASE("cli play") {
    auto r = run("play " + file_a() + " " + file_b() + " --pebbles 2 --rounds 3 < /dev/null");
    CHECK(r.status == 0);
}
