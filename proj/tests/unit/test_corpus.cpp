#include "doctest.h"

#include "piatr/corpus.hpp"

#include <filesystem>
#include <fstream>

using namespace piatr;

namespace {

std::filesystem::path write_tmp(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "piatr_corpus_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::ofstream(path) << body;
    return path;
}

} // namespace

TEST_CASE("kind names round-trip") {
    for (auto k : {ProblemKind::Quadratic, ProblemKind::L1, ProblemKind::Box, ProblemKind::L2Norm,
                   ProblemKind::QuadraticRankDeficient, ProblemKind::QuadraticIllConditioned, ProblemKind::CustomCsv}) {
        CHECK(parse_problem_kind(problem_kind_name(k)) == k);
    }
    CHECK_THROWS_AS(parse_problem_kind("nope"), std::invalid_argument);
}

TEST_CASE("generators are seed-deterministic") {
    for (auto k : {ProblemKind::Quadratic, ProblemKind::QuadraticRankDeficient, ProblemKind::QuadraticIllConditioned,
                   ProblemKind::L1, ProblemKind::Box}) {
        auto a = make_problem({k, 6, 42});
        auto b = make_problem({k, 6, 42});
        auto c = make_problem({k, 6, 43});
        CHECK(a->ground_truth()->xstar_min_norm == b->ground_truth()->xstar_min_norm);
        CHECK(a->ground_truth()->xstar_min_norm != c->ground_truth()->xstar_min_norm);
    }
}

TEST_CASE("quadratic generators have the advertised shape") {
    auto rd = std::dynamic_pointer_cast<const QuadraticProblem>(make_problem({ProblemKind::QuadraticRankDeficient, 5, 1}));
    REQUIRE(rd);
    CHECK(rd->A().rows() == 3);
    CHECK(rd->A().cols() == 5);
    CHECK(rd->ground_truth()->fstar < 1e-25);

    auto well = std::dynamic_pointer_cast<const QuadraticProblem>(make_problem({ProblemKind::Quadratic, 5, 1}));
    const Eigen::SelfAdjointEigenSolver<Matrix> es(well->A().transpose() * well->A());
    CHECK(es.eigenvalues().minCoeff() == doctest::Approx(0.3));
    CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(3.5));

    auto ill = std::dynamic_pointer_cast<const QuadraticProblem>(make_problem({ProblemKind::QuadraticIllConditioned, 40, 1}));
    const Eigen::SelfAdjointEigenSolver<Matrix> es2(ill->A().transpose() * ill->A());
    CHECK(es2.eigenvalues().maxCoeff() == doctest::Approx(1.0));
    CHECK(es2.eigenvalues().minCoeff() < 1e-9);
}

TEST_CASE("csv ingestion") {
    const auto a = write_tmp("a.csv", "# comment\n1, 2, 3\n\n4,5,6\n");
    const Matrix m = read_matrix_csv(a);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m(1, 2) == 6.0);

    CHECK(read_vector_csv(write_tmp("row.csv", "1,2\n")).size() == 2);
    CHECK(read_vector_csv(write_tmp("col.csv", "1\n2\n3\n")).size() == 3);
    CHECK_THROWS_AS(read_vector_csv(a), ParseError);
    CHECK_THROWS_AS(read_matrix_csv(write_tmp("ragged.csv", "1,2\n3\n")), ParseError);
    CHECK_THROWS_AS(read_matrix_csv(write_tmp("bad.csv", "1,x\n")), ParseError);
    CHECK_THROWS_AS(read_matrix_csv(write_tmp("empty.csv", "\n")), ParseError);
    CHECK_THROWS_AS(read_matrix_csv("/nonexistent/file.csv"), ParseError);

    ProblemSpec spec;
    spec.kind = ProblemKind::CustomCsv;
    spec.matrix_path = a;
    spec.b_path = write_tmp("b2.csv", "1\n2\n");
    auto p = make_problem(spec);
    CHECK(p->dim() == 3);
    spec.b_path = write_tmp("b3.csv", "1\n2\n3\n");
    CHECK_THROWS_AS(make_problem(spec), ParseError);
}
