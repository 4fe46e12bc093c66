#include "doctest.h"

#include "piatr/config.hpp"

#include <filesystem>
#include <fstream>

using namespace piatr;

TEST_CASE("dotted keys") {
    const auto cfg = parse_config(R"(
# WeakFast quadratic
problem.kind = quadratic
problem.dim = 7
schedule.q = 0.5   # trailing comment
schedule.p = 1.8
schedule.delta = 0.25
run.iters = 300
run.dense_iterates = true
run.x_init = zero
diagnostics.energy_variant = weak
diagnostics.r = 0.7
)");
    CHECK(cfg.problem.dim == 7);
    CHECK(cfg.schedule.p == 1.8);
    CHECK(cfg.schedule.delta == 0.25);
    CHECK(cfg.schedule.alpha == 2.0);
    CHECK(cfg.run.iters == 300);
    CHECK(cfg.run.dense_iterates);
    CHECK(cfg.run.x_init == InitKind::Zero);
    CHECK(cfg.initial_point(3).norm() == 0.0);
    CHECK(*cfg.diagnostics.energy_variant == EnergyVariant::Weak);
    const auto e = cfg.energy_config(EnergyVariant::Weak);
    CHECK(e.r == 0.7);
    CHECK(e.a == doctest::Approx(2 * 0.7 + 0.25 + 0.5));
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("malformed configs") {
    CHECK_THROWS_AS(parse_config("schedule.q 0.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("schedule.qq = 0.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("schedule.q = half"), ConfigError);
    CHECK_THROWS_AS(parse_config("run.iters = 2.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("run.x_init = ones"), ConfigError);
    CHECK_THROWS_AS(parse_config("problem.kind = cubic"), ConfigError);
    CHECK_THROWS_AS(parse_config("run.dense_iterates = maybe"), ConfigError);
    try {
        parse_config("\n\nschedule.zz = 1");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("run.iters = 1").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("schedule.q = 1.5").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("diagnostics.window_fraction = 1").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("problem.kind = custom_csv").validate(), ConfigError);
    CHECK_THROWS_AS(parse_config("problem.kind = custom_csv\nproblem.matrix_path = /nonexistent/A.csv\n"
                                 "problem.b_path = /nonexistent/b.csv")
                        .validate(),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("run.dense_iterates = true\nrun.iters = 200000").validate(), ConfigError);
}

TEST_CASE("snapshot round trip") {
    auto cfg = parse_config("schedule.c = 0.3\nschedule.lambda = 0.9\nrun.record_every = 5\ndiagnostics.a = 3.5\n"
                            "problem.kind = box\nproblem.seed = 42");
    const auto back = config_from_snapshot(cfg.snapshot());
    CHECK(back.snapshot() == cfg.snapshot());
    CHECK(back.schedule.lambda0 == 0.9);
    CHECK(back.problem.kind == ProblemKind::Box);
    CHECK(*back.diagnostics.a == 3.5);
    CHECK_FALSE(back.diagnostics.r.has_value());
}

TEST_CASE("relative paths follow the config file") {
    const auto dir = std::filesystem::temp_directory_path() / "piatr_config_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "A.csv") << "1,0\n0,1\n";
        std::ofstream(dir / "b.csv") << "1\n2\n";
        std::ofstream(dir / "run.cfg") << "problem.kind = custom_csv\nproblem.matrix_path = A.csv\n"
                                          "problem.b_path = b.csv\n";
    }
    const auto cfg = load_config(dir / "run.cfg");
    CHECK(cfg.problem.matrix_path == dir / "A.csv");
    CHECK_NOTHROW(cfg.validate());
    CHECK(make_problem(cfg.problem)->dim() == 2);
    CHECK_THROWS_AS(load_config(dir / "missing.cfg"), ConfigError);
    std::filesystem::remove_all(dir);
}
