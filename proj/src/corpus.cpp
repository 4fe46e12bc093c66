#include "piatr/corpus.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace piatr {

std::string_view problem_kind_name(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Quadratic: return "quadratic";
    case ProblemKind::L1: return "l1";
    case ProblemKind::Box: return "box";
    case ProblemKind::L2Norm: return "l2norm";
    case ProblemKind::QuadraticRankDeficient: return "quadratic_rank_deficient";
    case ProblemKind::QuadraticIllConditioned: return "quadratic_ill_conditioned";
    case ProblemKind::CustomCsv: return "custom_csv";
    }
    return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
    for (ProblemKind k : {ProblemKind::Quadratic, ProblemKind::L1, ProblemKind::Box, ProblemKind::L2Norm,
                          ProblemKind::QuadraticRankDeficient, ProblemKind::QuadraticIllConditioned,
                          ProblemKind::CustomCsv}) {
        if (problem_kind_name(k) == name) return k;
    }
    throw std::invalid_argument("unknown problem kind: " + std::string(name));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view field, const std::filesystem::path& path, std::size_t line) {
    field = trim(field);
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ParseError(path.string() + ":" + std::to_string(line) + ": not a finite number: '" + std::string(field) +
                         "'");
    }
    return v;
}

std::vector<std::vector<double>> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        const std::string_view t = trim(text);
        if (t.empty() || t.front() == '#') continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = t.find(',', start);
            row.push_back(parse_double(t.substr(start, comma == std::string_view::npos ? t.npos : comma - start), path,
                                       line));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(path.string() + ":" + std::to_string(line) + ": expected " +
                             std::to_string(rows.front().size()) + " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data");
    return rows;
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

Matrix gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
    std::normal_distribution<double> nd;
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = nd(rng);
    return m;
}

Matrix random_orthogonal(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
    return qr.householderQ();
}

// A = diag(sqrt(mu)) Q^T with mu log-spaced in [lo, hi]; b = A x_true.
std::shared_ptr<const ProxProblem> spectral_quadratic(std::mt19937_64& rng, Eigen::Index n, double lo, double hi,
                                                      std::string id) {
    Vector root(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = n == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        root[i] = std::sqrt(lo * std::pow(hi / lo, t));
    }
    const Matrix Q = random_orthogonal(rng, n);
    Matrix A = root.asDiagonal() * Q.transpose();
    const Vector x_true = gaussian(rng, n);
    Vector b = A * x_true;
    return std::make_shared<QuadraticProblem>(std::move(A), std::move(b), std::move(id));
}

} // namespace

Matrix read_matrix_csv(const std::filesystem::path& path) {
    const auto rows = read_rows(path);
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Vector read_vector_csv(const std::filesystem::path& path) {
    const Matrix m = read_matrix_csv(path);
    if (m.rows() != 1 && m.cols() != 1) {
        throw ParseError(path.string() + ": expected a single row or column, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
    }
    return Eigen::Map<const Vector>(m.data(), m.size());
}

std::shared_ptr<const ProxProblem> make_problem(const ProblemSpec& spec) {
    if (spec.kind != ProblemKind::CustomCsv && spec.dim <= 0) {
        throw std::invalid_argument("problem dimension must be positive");
    }
    std::mt19937_64 rng(spec.seed);
    const Eigen::Index n = spec.dim;
    switch (spec.kind) {
    case ProblemKind::Quadratic: return spectral_quadratic(rng, n, 0.3, 3.5, "quadratic");
    case ProblemKind::QuadraticIllConditioned:
        return spectral_quadratic(rng, n, 1e-10, 1.0, "quadratic_ill_conditioned");
    case ProblemKind::QuadraticRankDeficient: {
        if (n < 3) throw std::invalid_argument("quadratic_rank_deficient needs dim >= 3");
        Matrix A = gaussian(rng, n - 2, n);
        Vector b = gaussian(rng, n - 2);
        return std::make_shared<QuadraticProblem>(std::move(A), std::move(b), "quadratic_rank_deficient");
    }
    case ProblemKind::L1: return std::make_shared<L1Problem>(gaussian(rng, n));
    case ProblemKind::Box: {
        std::uniform_real_distribution<double> lo_d(-1.0, 1.0), width_d(0.5, 1.5);
        Vector lo(n), hi(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            lo[i] = lo_d(rng);
            hi[i] = lo[i] + width_d(rng);
        }
        return std::make_shared<BoxProblem>(std::move(lo), std::move(hi));
    }
    case ProblemKind::L2Norm: return std::make_shared<L2NormProblem>(n);
    case ProblemKind::CustomCsv: {
        if (spec.matrix_path.empty() || spec.b_path.empty()) {
            throw ParseError("custom_csv requires problem.matrix_path and problem.b_path");
        }
        Matrix A = read_matrix_csv(spec.matrix_path);
        Vector b = read_vector_csv(spec.b_path);
        if (b.size() != A.rows()) {
            throw ParseError("custom_csv: b has " + std::to_string(b.size()) + " entries but A has " +
                             std::to_string(A.rows()) + " rows");
        }
        return std::make_shared<QuadraticProblem>(std::move(A), std::move(b), "custom_csv");
    }
    }
    throw std::invalid_argument("unhandled problem kind");
}

} // namespace piatr
