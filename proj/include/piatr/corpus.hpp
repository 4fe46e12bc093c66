#pragma once

#include "piatr/prox.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

namespace piatr {

enum class ProblemKind {
    Quadratic,
    L1,
    Box,
    L2Norm,
    QuadraticRankDeficient,
    QuadraticIllConditioned,
    CustomCsv,
};

std::string_view problem_kind_name(ProblemKind kind);
// Throws std::invalid_argument for unknown names.
ProblemKind parse_problem_kind(std::string_view name);

struct ProblemSpec {
    ProblemKind kind = ProblemKind::Quadratic;
    Eigen::Index dim = 5;
    std::uint64_t seed = 1;
    std::filesystem::path matrix_path; // custom_csv only
    std::filesystem::path b_path;      // custom_csv only
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Row-major, comma-separated; blank lines and lines starting with '#' skipped.
Matrix read_matrix_csv(const std::filesystem::path& path);
// Accepts a single row or a single column.
Vector read_vector_csv(const std::filesystem::path& path);

// Fixed-seed generators:
//   quadratic                 dim x dim, A^T A spectrum log-spaced in [0.3, 3.5], f* = 0
//   quadratic_rank_deficient  (dim-2) x dim Gaussian, rank dim-2 (3 x 5 at dim 5)
//   quadratic_ill_conditioned dim x dim, A^T A spectrum log-spaced in [1e-10, 1], f* = 0
//   l1                        ||x - center||_1, Gaussian center
//   box                       random box not containing the origin in general
//   l2norm                    ||x||
//   custom_csv                A and b read from files
// Throws ParseError on unreadable or mismatched CSV input and
// std::invalid_argument on bad dimensions.
std::shared_ptr<const ProxProblem> make_problem(const ProblemSpec& spec);

} // namespace piatr
