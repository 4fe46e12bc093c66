#include "piatr/prox.hpp"

#include "piatr/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace piatr {

namespace {

void require_positive_step(double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("prox step must be positive and finite");
}

void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": dimension " + std::to_string(got) + ", expected " +
                                    std::to_string(want));
    }
}

Matrix shifted_gram(const Matrix& gram, double s) {
    Matrix m = s * gram;
    m.diagonal().array() += 1.0;
    return m;
}

Vector solve_shifted(const Eigen::LLT<Matrix>& llt, double s, const Vector& x, const Vector& atb) {
    Vector rhs = x + s * atb;
    return llt.solve(rhs);
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = nd(rng);
    return v;
}

// Wide A solves on the row side, x - s A^T (I + s A A^T)^{-1} (A x - b), whose
// condition number stays bounded as s grows; otherwise (I + s A^T A) z = x + s A^T b.
class QuadraticSession final : public ProxSession {
public:
    QuadraticSession(const Matrix& A, const Vector& b, const Matrix& gram, const Vector& atb)
        : A_(A), b_(b), gram_(gram), atb_(atb), row_side_(A.rows() < A.cols()) {}

    void prox(double s, const Vector& x, Vector& out) override {
        require_positive_step(s);
        require_dim(x.size(), A_.cols(), "prox point");
        if (!have_ || s != step_) {
            llt_.compute(row_side_ ? shifted_gram(A_ * A_.transpose(), s) : shifted_gram(gram_, s));
            step_ = s;
            have_ = true;
        }
        if (row_side_) {
            out = x - s * (A_.transpose() * llt_.solve(A_ * x - b_));
        } else {
            out = solve_shifted(llt_, s, x, atb_);
        }
    }

private:
    const Matrix& A_;
    const Vector& b_;
    const Matrix& gram_;
    const Vector& atb_;
    bool row_side_;
    Eigen::LLT<Matrix> llt_;
    double step_ = 0.0;
    bool have_ = false;
};

} // namespace

Vector prox_quadratic(double s, const Vector& x, const Matrix& A, const Vector& b) {
    require_positive_step(s);
    require_dim(x.size(), A.cols(), "prox_quadratic point");
    require_dim(b.size(), A.rows(), "prox_quadratic rhs");
    const Matrix gram = A.transpose() * A;
    const Vector atb = A.transpose() * b;
    QuadraticSession session(A, b, gram, atb);
    Vector out;
    session.prox(s, x, out);
    return out;
}

Vector prox_l1(double s, const Vector& x) {
    require_positive_step(s);
    Vector out(x.size());
    kernels::soft_threshold(view(x), s, view(out));
    return out;
}

Vector prox_box(double /*s*/, const Vector& x, const Vector& lo, const Vector& hi) {
    require_dim(lo.size(), x.size(), "prox_box lower bound");
    require_dim(hi.size(), x.size(), "prox_box upper bound");
    if (lo.hasNaN() || hi.hasNaN() || (lo.array() > hi.array()).any()) {
        throw std::invalid_argument("prox_box: bounds must satisfy lo <= hi");
    }
    Vector out(x.size());
    kernels::clamp(view(x), view(lo), view(hi), view(out));
    return out;
}

Vector prox_l2norm(double s, const Vector& x) {
    require_positive_step(s);
    const double norm = std::sqrt(kernels::squared_norm(view(x)));
    if (norm <= s) return Vector::Zero(x.size());
    return (1.0 - s / norm) * x;
}

Vector min_norm_minimizer(const Matrix& A, const Vector& b) {
    require_dim(b.size(), A.rows(), "min_norm_minimizer rhs");
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Vector out = Vector::Zero(A.cols());
    if (sv.size() == 0 || sv[0] == 0.0) return out;
    const double cutoff = 1e-10 * sv[0];
    const Vector utb = svd.matrixU().transpose() * b;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff) out += (utb[i] / sv[i]) * svd.matrixV().col(i);
    }
    return out;
}

// ---- ProxProblem defaults ----

namespace {

class StatelessSession final : public ProxSession {
public:
    explicit StatelessSession(const ProxProblem& p) : problem_(p) {}
    void prox(double s, const Vector& x, Vector& out) override { out = problem_.prox(s, x); }

private:
    const ProxProblem& problem_;
};

} // namespace

std::unique_ptr<ProxSession> ProxProblem::open_session() const { return std::make_unique<StatelessSession>(*this); }

double ProxProblem::gap(const Vector& x) const {
    if (!truth_) return std::numeric_limits<double>::quiet_NaN();
    return value(x) - truth_->fstar;
}

std::optional<Vector> ProxProblem::sample_minimizer(std::mt19937_64&) const { return std::nullopt; }

std::optional<Vector> ProxProblem::gradient(const Vector&) const { return std::nullopt; }

// ---- Quadratic ----

namespace {

// Refactorizes only when the step changes, so constant step sizes pay for
// one Cholesky per run.
} // namespace

QuadraticProblem::QuadraticProblem(Matrix A, Vector b, std::string id)
    : A_(std::move(A)), b_(std::move(b)), id_(std::move(id)) {
    if (A_.rows() == 0 || A_.cols() == 0) throw std::invalid_argument("quadratic: empty matrix");
    require_dim(b_.size(), A_.rows(), "quadratic rhs");
    if (!A_.allFinite() || !b_.allFinite()) throw std::invalid_argument("quadratic: non-finite data");
    gram_ = A_.transpose() * A_;
    atb_ = A_.transpose() * b_;

    Eigen::JacobiSVD<Matrix> svd(A_, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? 1e-10 * sv[0] : 0.0;
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv[rank] > cutoff) ++rank;
    null_basis_ = svd.matrixV().rightCols(A_.cols() - rank);

    GroundTruth t;
    t.xstar_min_norm = min_norm_minimizer(A_, b_);
    t.fstar = 0.5 * (A_ * t.xstar_min_norm - b_).squaredNorm();
    t.argmin_description = rank == A_.cols() ? "unique least-squares solution"
                                             : "affine set x* + null(A), null space dimension " +
                                                   std::to_string(A_.cols() - rank);
    truth_ = std::move(t);
}

double QuadraticProblem::value(const Vector& x) const {
    require_dim(x.size(), dim(), "quadratic point");
    return 0.5 * (A_ * x - b_).squaredNorm();
}

Vector QuadraticProblem::prox(double s, const Vector& x) const {
    QuadraticSession session(A_, b_, gram_, atb_);
    Vector out;
    session.prox(s, x, out);
    return out;
}

std::unique_ptr<ProxSession> QuadraticProblem::open_session() const {
    return std::make_unique<QuadraticSession>(A_, b_, gram_, atb_);
}

double QuadraticProblem::gap(const Vector& x) const {
    require_dim(x.size(), dim(), "quadratic point");
    return 0.5 * (A_ * (x - truth_->xstar_min_norm)).squaredNorm();
}

double QuadraticProblem::value_difference(const Vector& x, const Vector& y) const {
    require_dim(x.size(), dim(), "quadratic point");
    require_dim(y.size(), dim(), "quadratic point");
    const Vector ad = A_ * (x - y);
    return 0.5 * ad.squaredNorm() + ad.dot(A_ * y - b_);
}

std::optional<Vector> QuadraticProblem::sample_minimizer(std::mt19937_64& rng) const {
    if (null_basis_.cols() == 0) return std::nullopt;
    return Vector(truth_->xstar_min_norm + null_basis_ * gaussian(rng, null_basis_.cols()));
}

std::optional<Vector> QuadraticProblem::gradient(const Vector& x) const { return Vector(gram_ * x - atb_); }

// ---- L1 ----

L1Problem::L1Problem(Vector center) : center_(std::move(center)) {
    if (center_.size() == 0) throw std::invalid_argument("l1: empty center");
    truth_ = GroundTruth{0.0, center_, "singleton {center}"};
}

double L1Problem::value(const Vector& x) const {
    require_dim(x.size(), dim(), "l1 point");
    const Vector d = x - center_;
    return kernels::abs_sum(view(d));
}

Vector L1Problem::prox(double s, const Vector& x) const {
    require_dim(x.size(), dim(), "l1 point");
    return center_ + prox_l1(s, x - center_);
}

// ---- Box ----

BoxProblem::BoxProblem(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    require_dim(hi_.size(), lo_.size(), "box upper bound");
    if (lo_.size() == 0) throw std::invalid_argument("box: empty bounds");
    if (lo_.hasNaN() || hi_.hasNaN() || (lo_.array() > hi_.array()).any()) {
        throw std::invalid_argument("box: bounds must satisfy lo <= hi");
    }
    truth_ = GroundTruth{0.0, lo_.cwiseMax(0.0).cwiseMin(hi_), "the box [lo, hi]"};
}

double BoxProblem::value(const Vector& x) const {
    require_dim(x.size(), dim(), "box point");
    const bool inside = (x.array() >= lo_.array()).all() && (x.array() <= hi_.array()).all();
    return inside ? 0.0 : kInfinity;
}

Vector BoxProblem::prox(double s, const Vector& x) const { return prox_box(s, x, lo_, hi_); }

std::optional<Vector> BoxProblem::sample_minimizer(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector y(dim());
    for (Eigen::Index i = 0; i < dim(); ++i) y[i] = lo_[i] + u(rng) * (hi_[i] - lo_[i]);
    return y;
}

// ---- L2 norm ----

L2NormProblem::L2NormProblem(Eigen::Index dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("l2norm: dimension must be positive");
    truth_ = GroundTruth{0.0, Vector::Zero(dim), "singleton {0}"};
}

double L2NormProblem::value(const Vector& x) const {
    require_dim(x.size(), dim_, "l2norm point");
    return std::sqrt(kernels::squared_norm(view(x)));
}

Vector L2NormProblem::prox(double s, const Vector& x) const {
    require_dim(x.size(), dim_, "l2norm point");
    return prox_l2norm(s, x);
}

// ---- Zero ----

ZeroProblem::ZeroProblem(Eigen::Index dim) : dim_(dim) {
    if (dim <= 0) throw std::invalid_argument("zero: dimension must be positive");
    truth_ = GroundTruth{0.0, Vector::Zero(dim), "whole space"};
}

std::optional<Vector> ZeroProblem::sample_minimizer(std::mt19937_64& rng) const { return gaussian(rng, dim_); }

} // namespace piatr
