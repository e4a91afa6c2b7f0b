#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stepanov/errors.hpp"

namespace stepanov {

constexpr int kMaxTaylorVars = 8;
constexpr int kMaxTaylorOrder = 5;

// Shared enumeration tables for multivariate monomials of total degree <= order.
class TaylorBasis {
  public:
    static std::shared_ptr<const TaylorBasis> get(int nvars, int order);

    int nvars;
    int order;
    std::vector<std::array<std::uint8_t, kMaxTaylorVars>> exps; // graded-lex order, exps[0] = 0
    std::vector<std::vector<int>> prod; // prod[i][j] = monomial index of exps[i]+exps[j], -1 if truncated
    std::vector<double> factorial;      // factorial[i] = prod of exps[i][v]!

    int find(std::span<const int> alpha) const; // -1 if absent

  private:
    TaylorBasis(int nvars_, int order_);
};

// Truncated multivariate Taylor polynomial: value and all mixed partials of a
// smooth function at a point, carried through arithmetic exactly to roundoff.
class TaylorPoly {
  public:
    TaylorPoly() = default;
    static TaylorPoly constant(int nvars, int order, double v);
    static TaylorPoly variable(int nvars, int order, int var, double value);

    int nvars() const { return basis_->nvars; }
    int order() const { return basis_->order; }
    double value() const { return c_(0); }
    const Eigen::VectorXd& coeffs() const { return c_; }

    // Mixed partial d^alpha evaluated at the expansion point (coefficient times alpha!).
    double partial(std::span<const int> alpha) const;
    double partial(std::initializer_list<int> alpha) const {
        return partial(std::span<const int>(alpha.begin(), alpha.size()));
    }

    // Coordinate partial derivative; result has order reduced by one.
    TaylorPoly derivative(int var) const;

    // Drop terms above the given total degree.
    TaylorPoly truncated(int order) const;

    TaylorPoly operator-() const;
    TaylorPoly& operator+=(const TaylorPoly& o);
    TaylorPoly& operator-=(const TaylorPoly& o);
    TaylorPoly& operator+=(double s);
    TaylorPoly& operator-=(double s);
    TaylorPoly& operator*=(double s);

    friend TaylorPoly operator+(TaylorPoly a, const TaylorPoly& b) { return a += b; }
    friend TaylorPoly operator-(TaylorPoly a, const TaylorPoly& b) { return a -= b; }
    friend TaylorPoly operator+(TaylorPoly a, double s) { return a += s; }
    friend TaylorPoly operator-(TaylorPoly a, double s) { return a -= s; }
    friend TaylorPoly operator+(double s, TaylorPoly a) { return a += s; }
    friend TaylorPoly operator*(TaylorPoly a, double s) { return a *= s; }
    friend TaylorPoly operator*(double s, TaylorPoly a) { return a *= s; }
    friend TaylorPoly operator-(double s, const TaylorPoly& a) { return (-a) += s; }
    friend TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b);
    friend TaylorPoly operator/(const TaylorPoly& a, const TaylorPoly& b);
    friend TaylorPoly operator/(double s, const TaylorPoly& b);
    friend TaylorPoly operator/(TaylorPoly a, double s) { return a *= 1.0 / s; }

    friend TaylorPoly sin(const TaylorPoly& u);
    friend TaylorPoly cos(const TaylorPoly& u);
    friend TaylorPoly tan(const TaylorPoly& u);
    friend TaylorPoly exp(const TaylorPoly& u);
    friend TaylorPoly log(const TaylorPoly& u);
    friend TaylorPoly sinh(const TaylorPoly& u);
    friend TaylorPoly cosh(const TaylorPoly& u);
    friend TaylorPoly sqrt(const TaylorPoly& u);
    friend TaylorPoly atan(const TaylorPoly& u);
    friend TaylorPoly reciprocal(const TaylorPoly& u);
    friend TaylorPoly ipow(const TaylorPoly& u, long long e);
    friend TaylorPoly pow(const TaylorPoly& u, const TaylorPoly& e);

    // Compose f(u) from univariate Taylor coefficients of f at u.value().
    static TaylorPoly compose(const TaylorPoly& u, std::span<const double> fcoeffs);

  private:
    TaylorPoly(std::shared_ptr<const TaylorBasis> basis, Eigen::VectorXd c)
        : basis_(std::move(basis)), c_(std::move(c)) {}

    std::shared_ptr<const TaylorBasis> basis_;
    Eigen::VectorXd c_;
};

TaylorPoly sin(const TaylorPoly& u);
TaylorPoly cos(const TaylorPoly& u);
TaylorPoly tan(const TaylorPoly& u);
TaylorPoly exp(const TaylorPoly& u);
TaylorPoly log(const TaylorPoly& u);
TaylorPoly sinh(const TaylorPoly& u);
TaylorPoly cosh(const TaylorPoly& u);
TaylorPoly sqrt(const TaylorPoly& u);
TaylorPoly atan(const TaylorPoly& u);
TaylorPoly reciprocal(const TaylorPoly& u);
TaylorPoly ipow(const TaylorPoly& u, long long e);
TaylorPoly pow(const TaylorPoly& u, const TaylorPoly& e);

} // namespace stepanov
