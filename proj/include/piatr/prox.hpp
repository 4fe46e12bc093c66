#pragma once

#include "piatr/types.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace piatr {

// Closed-form proximal maps. prox_{s f}(x) = argmin_y f(y) + ||y - x||^2 / (2s).

// f(x) = 0.5 ||Ax - b||^2. Solves (I + s A^T A) z = x + s A^T b by Cholesky.
Vector prox_quadratic(double s, const Vector& x, const Matrix& A, const Vector& b);

// f(x) = ||x||_1.
Vector prox_l1(double s, const Vector& x);

// Indicator of [lo, hi]; independent of s.
Vector prox_box(double s, const Vector& x, const Vector& lo, const Vector& hi);

// f(x) = ||x||_2.
Vector prox_l2norm(double s, const Vector& x);

// Pseudoinverse solution A^+ b with singular values below 1e-10 * sigma_max dropped.
Vector min_norm_minimizer(const Matrix& A, const Vector& b);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct GroundTruth {
    double fstar = 0.0;
    Vector xstar_min_norm;
    std::string argmin_description;
};

// Per-caller mutable prox evaluator. Problems stay immutable; anything that
// benefits from caching (factorizations) lives here.
class ProxSession {
public:
    virtual ~ProxSession() = default;
    virtual void prox(double s, const Vector& x, Vector& out) = 0;
};

class ProxProblem {
public:
    virtual ~ProxProblem() = default;

    virtual std::string id() const = 0;
    virtual Eigen::Index dim() const = 0;

    // Extended-real value: +inf outside the effective domain.
    virtual double value(const Vector& x) const = 0;
    virtual Vector prox(double s, const Vector& x) const = 0;

    // The session borrows from the problem and must not outlive it.
    virtual std::unique_ptr<ProxSession> open_session() const;

    const std::optional<GroundTruth>& ground_truth() const { return truth_; }

    // f(x) - f*; NaN without ground truth, +inf outside the domain.
    // Subclasses may override with a cancellation-free form.
    virtual double gap(const Vector& x) const;

    // f(x) - f(y). Subclasses may override with a form that stays accurate
    // when x and y are close.
    virtual double value_difference(const Vector& x, const Vector& y) const { return value(x) - value(y); }

    // A point of argmin f drawn at random, used to probe the min-norm
    // property. Returns nullopt when argmin is a singleton or unknown.
    virtual std::optional<Vector> sample_minimizer(std::mt19937_64& rng) const;

    // Gradient for differentiable problems.
    virtual std::optional<Vector> gradient(const Vector& x) const;

protected:
    std::optional<GroundTruth> truth_;
};

class QuadraticProblem final : public ProxProblem {
public:
    QuadraticProblem(Matrix A, Vector b, std::string id = "quadratic");

    std::string id() const override { return id_; }
    Eigen::Index dim() const override { return A_.cols(); }
    double value(const Vector& x) const override;
    Vector prox(double s, const Vector& x) const override;
    std::unique_ptr<ProxSession> open_session() const override;
    // 0.5 ||A(x - x*)||^2, exact because A^T(Ax* - b) = 0.
    double gap(const Vector& x) const override;
    double value_difference(const Vector& x, const Vector& y) const override;
    std::optional<Vector> sample_minimizer(std::mt19937_64& rng) const override;
    std::optional<Vector> gradient(const Vector& x) const override;

    const Matrix& A() const { return A_; }
    const Vector& b() const { return b_; }

private:
    Matrix A_;
    Vector b_;
    Matrix gram_; // A^T A
    Vector atb_;  // A^T b
    Matrix null_basis_;
    std::string id_;
};

// f(x) = ||x - center||_1.
class L1Problem final : public ProxProblem {
public:
    explicit L1Problem(Vector center);

    std::string id() const override { return "l1"; }
    Eigen::Index dim() const override { return center_.size(); }
    double value(const Vector& x) const override;
    Vector prox(double s, const Vector& x) const override;
    double gap(const Vector& x) const override { return value(x); }

    const Vector& center() const { return center_; }

private:
    Vector center_;
};

class BoxProblem final : public ProxProblem {
public:
    BoxProblem(Vector lo, Vector hi);

    std::string id() const override { return "box"; }
    Eigen::Index dim() const override { return lo_.size(); }
    double value(const Vector& x) const override;
    Vector prox(double s, const Vector& x) const override;
    double gap(const Vector& x) const override { return value(x); }
    std::optional<Vector> sample_minimizer(std::mt19937_64& rng) const override;

    const Vector& lo() const { return lo_; }
    const Vector& hi() const { return hi_; }

private:
    Vector lo_, hi_;
};

class L2NormProblem final : public ProxProblem {
public:
    explicit L2NormProblem(Eigen::Index dim);

    std::string id() const override { return "l2norm"; }
    Eigen::Index dim() const override { return dim_; }
    double value(const Vector& x) const override;
    Vector prox(double s, const Vector& x) const override;
    double gap(const Vector& x) const override { return value(x); }

private:
    Eigen::Index dim_;
};

// f = 0; argmin is the whole space and x* = 0.
class ZeroProblem final : public ProxProblem {
public:
    explicit ZeroProblem(Eigen::Index dim);

    std::string id() const override { return "zero"; }
    Eigen::Index dim() const override { return dim_; }
    double value(const Vector&) const override { return 0.0; }
    Vector prox(double, const Vector& x) const override { return x; }
    double gap(const Vector&) const override { return 0.0; }
    std::optional<Vector> sample_minimizer(std::mt19937_64& rng) const override;
    std::optional<Vector> gradient(const Vector& x) const override { return Vector::Zero(x.size()); }

private:
    Eigen::Index dim_;
};

} // namespace piatr
