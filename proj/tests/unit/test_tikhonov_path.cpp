#include "doctest.h"

#include "oracles.hpp"
#include "piatr/corpus.hpp"
#include "piatr/tikhonov_path.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace piatr;

namespace {

std::shared_ptr<QuadraticProblem> shifted_1d() {
    return std::make_shared<QuadraticProblem>(Matrix::Identity(1, 1), Vector::Ones(1));
}

const ParamSchedule kSched{2.0, 0.5, 1.0, 1.2, 1.0, 0.0};

// (A^T A + eps I)^{-1} A^T b by a direct dense solve.
Vector regularized_solution(const Matrix& A, const Vector& b, double eps) {
    Matrix M = A.transpose() * A;
    M.diagonal().array() += eps;
    return M.partialPivLu().solve(A.transpose() * b);
}

} // namespace

TEST_CASE("centers in closed form") {
    auto unit = std::make_shared<QuadraticProblem>(Matrix::Identity(3, 3), Vector::Zero(3));
    for (double eps : {1e-6, 0.1, 1.0, 10.0}) CHECK(tikhonov_center(*unit, eps).norm() == 0.0);

    auto shifted = shifted_1d();
    for (double eps : {1e-6, 0.1, 1.0, 10.0}) {
        CHECK(tikhonov_center(*shifted, eps)[0] == doctest::Approx(1.0 / (1.0 + eps)).epsilon(1e-14));
        CHECK(*center_residual(*shifted, eps, tikhonov_center(*shifted, eps)) < 1e-10);
    }
    CHECK_FALSE(center_residual(L1Problem(Vector::Ones(2)), 1.0, Vector::Zero(2)).has_value());
    CHECK_THROWS_AS(tikhonov_center(*shifted, 0.0), std::invalid_argument);
}

TEST_CASE("rank-deficient centers approach the pseudoinverse solution") {
    auto p = std::dynamic_pointer_cast<const QuadraticProblem>(make_problem({ProblemKind::QuadraticRankDeficient, 5, 1}));
    const Vector xstar = oracle::min_norm_by_projection(p->A(), p->b());
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const Vector c = tikhonov_center(*p, eps);
        // Both solves lose digits in proportion to the conditioning ~ 1/eps.
        CHECK((c - regularized_solution(p->A(), p->b(), eps)).norm() < std::max(1e-12, 1e-15 / eps));
        const double dist = (c - xstar).norm();
        CHECK(dist < prev);
        CHECK(c.norm() <= xstar.norm() + 1e-12);
        prev = dist;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("viscosity paths") {
    auto unit = std::make_shared<QuadraticProblem>(Matrix::Identity(2, 2), Vector::Zero(2));
    for (const auto& pt : viscosity_path(*unit, kSched, 1, 20)) CHECK(pt.center_norm == 0.0);

    const auto path = viscosity_path(*shifted_1d(), kSched, 1, 100);
    REQUIRE(path.size() == 100);
    for (const auto& pt : path) {
        CHECK(pt.eps == doctest::Approx(std::pow(static_cast<double>(pt.k), -1.2)));
        CHECK(pt.center[0] == doctest::Approx(1.0 / (1.0 + pt.eps)).epsilon(1e-14));
    }
    for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i].center_norm >= path[i - 1].center_norm);

    auto rd = make_problem({ProblemKind::QuadraticRankDeficient, 5, 1});
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 10; k <= 10000; k *= 2) ks.push_back(k);
    const auto rdp = viscosity_path(*rd, kSched, ks);
    const Vector& xstar = rd->ground_truth()->xstar_min_norm;
    for (std::size_t i = 1; i < rdp.size(); ++i) CHECK((rdp[i].center - xstar).norm() < (rdp[i - 1].center - xstar).norm());

    ParamSchedule no_pull = kSched;
    no_pull.c = 0.0;
    CHECK_THROWS_AS(viscosity_path(*unit, no_pull, 1, 5), std::invalid_argument);
    CHECK_THROWS_AS(viscosity_path(*unit, kSched, std::vector<std::int64_t>{3, 2}), std::invalid_argument);
}

TEST_CASE("path inequality checker") {
    auto unit = std::make_shared<QuadraticProblem>(Matrix::Identity(2, 2), Vector::Zero(2));
    const auto zero_rep = check_viscosity_inequalities(viscosity_path(*unit, kSched, 1, 50));
    CHECK(zero_rep.ok());
    for (const auto& [name, slack] : zero_rep.min_slack) CHECK(slack == 0.0);

    const auto rep1 = check_viscosity_inequalities(viscosity_path(*shifted_1d(), kSched, 1, 10000));
    CHECK(rep1.ok());
    CHECK(rep1.pairs == 9999);

    const auto rd = make_problem({ProblemKind::QuadraticRankDeficient, 5, 1});
    CHECK(check_viscosity_inequalities(viscosity_path(*rd, kSched, 1, 10000)).ok());

    // A path whose norm shrinks must be flagged.
    std::vector<PathPoint> bad = viscosity_path(*shifted_1d(), kSched, 1, 3);
    bad[2].center *= 0.5;
    bad[2].center_norm *= 0.5;
    const auto bad_rep = check_viscosity_inequalities(bad);
    CHECK_FALSE(bad_rep.ok());
    bool saw_monotone = false;
    for (const auto& v : bad_rep.violations) saw_monotone |= v.check == "norm_monotone";
    CHECK(saw_monotone);

    std::vector<PathPoint> flat = viscosity_path(*shifted_1d(), kSched, 1, 3);
    flat[1].eps = flat[0].eps;
    CHECK_THROWS_AS(check_viscosity_inequalities(flat), std::invalid_argument);
    CHECK_THROWS_AS(check_viscosity_inequalities({flat[0]}), std::invalid_argument);
}

TEST_CASE("closed-form 1-D path satisfies each inequality on both sides") {
    // Independent evaluation of the six slacks from x(eps) = 1/(1+eps).
    for (std::int64_t k = 1; k < 2000; k += 7) {
        const double e = std::pow(static_cast<double>(k), -1.2);
        const double e1 = std::pow(static_cast<double>(k + 1), -1.2);
        const double c = 1.0 / (1.0 + e);
        const double c1 = 1.0 / (1.0 + e1);
        const double d = c1 - c;
        CHECK(c1 * c1 - c * c >= (e + e1) / (e - e1) * d * d - 1e-15);
        CHECK(c * c + e1 / (e - e1) * d * d <= c1 * c + 1e-15);
        CHECK(c1 * c <= c1 * c1 - e / (e - e1) * d * d + 1e-15);
        CHECK(std::fabs(d) <= std::min((e - e1) / e1 * c, (e - e1) / e * c1) + 1e-15);
    }
}

TEST_CASE("step ratio index is detected, not assumed") {
    const auto rd = make_problem({ProblemKind::QuadraticRankDeficient, 5, 1});
    const auto path = viscosity_path(*rd, kSched, 1, 3000);
    const auto idx = step_ratio_index(path, 1.1 * kSched.p);
    REQUIRE(idx.has_value());
    CHECK(*idx >= 1);
    CHECK(*idx < 3000);
}

TEST_CASE("strong convexity gap") {
    auto unit = std::make_shared<QuadraticProblem>(Matrix::Identity(1, 1), Vector::Zero(1));
    // (1 + eps)/2 * ||x||^2 at eps = 1, x = 2.
    CHECK(strong_convexity_gap(*unit, 1.0, Vector::Constant(1, 2.0), Vector::Zero(1)) == doctest::Approx(4.0));
    auto shifted = shifted_1d();
    const Vector c = tikhonov_center(*shifted, 0.3);
    CHECK(strong_convexity_gap(*shifted, 0.3, c, c) == 0.0);

    const auto rd = make_problem({ProblemKind::QuadraticRankDeficient, 5, 2});
    std::mt19937_64 rng(4);
    std::normal_distribution<double> nd;
    for (double eps : {1e-4, 1e-2, 1.0}) {
        const Vector center = tikhonov_center(*rd, eps);
        for (int j = 0; j < 50; ++j) {
            Vector x(5);
            for (int i = 0; i < 5; ++i) x[i] = nd(rng);
            const double g = strong_convexity_gap(*rd, eps, x, center);
            CHECK(g - 0.5 * eps * (x - center).squaredNorm() >= -1e-10);
            CHECK(gap_bound_slack(*rd, eps, x, center, rd->ground_truth()->xstar_min_norm) >= -1e-10);
        }
    }
    CHECK_THROWS_AS(strong_convexity_gap(*shifted, 0.3, Vector::Zero(1), Vector::Constant(1, 5.0)), std::logic_error);
}

TEST_CASE("path csv") {
    const auto path = viscosity_path(*shifted_1d(), kSched, 1, 3);
    const auto file = std::filesystem::temp_directory_path() / "piatr_path_test.csv";
    write_path_csv(path, Vector::Ones(1), file);
    std::ifstream in(file);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "k,eps,center_norm,dist_xstar");
    CHECK(row.rfind("1,1,", 0) == 0);
    const auto comma = row.find(',', 4);
    CHECK(std::stod(row.substr(4, comma - 4)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(std::stod(row.substr(comma + 1)) == doctest::Approx(0.5).epsilon(1e-15));
}
