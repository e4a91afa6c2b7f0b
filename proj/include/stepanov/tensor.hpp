#pragma once

#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stepanov/errors.hpp"

namespace stepanov {

enum class Variance { Co, Contra };

// Slot addresses for symmetrize / f_pullback; in-range and pairwise distinct.
struct SlotSpec {
    std::vector<int> slots;
    SlotSpec(std::initializer_list<int> s) : slots(s) {}
    explicit SlotSpec(std::vector<int> s) : slots(std::move(s)) {}
};

// Dense tensor value at a point: dim^rank reals in row-major order with an
// explicit covariant/contravariant signature. Immutable by convention after
// construction (all operations return new values).
class Tensor {
  public:
    Tensor(int dim, std::vector<Variance> slots);
    Tensor(int dim, std::vector<Variance> slots, Eigen::VectorXd data);

    static Tensor scalar(int dim, double value);
    // Kronecker delta^h_i (slots Contra, Co).
    static Tensor delta(int dim);
    static Tensor from_matrix(const Eigen::MatrixXd& m, Variance v0, Variance v1);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(slots_.size()); }
    const std::vector<Variance>& slots() const { return slots_; }
    const Eigen::VectorXd& data() const { return data_; }
    Eigen::VectorXd& data() { return data_; }

    double& at(std::span<const int> idx);
    double at(std::span<const int> idx) const;
    double& operator()(std::initializer_list<int> idx) { return at(std::span<const int>(idx.begin(), idx.size())); }
    double operator()(std::initializer_list<int> idx) const { return at(std::span<const int>(idx.begin(), idx.size())); }

    double value() const; // rank-0 access

    Eigen::MatrixXd as_matrix() const; // rank-2 only

    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    Tensor& operator*=(double s);

  private:
    int dim_;
    std::vector<Variance> slots_;
    Eigen::VectorXd data_;
    std::size_t offset(std::span<const int> idx) const;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(Tensor a, double s);
Tensor operator*(double s, Tensor a);

// Contraction over one covariant and one contravariant slot.
Tensor contract(const Tensor& t, int a, int b);

// Average over all permutations of the listed (same-variance) slots.
Tensor symmetrize(const Tensor& t, const SlotSpec& s);

// t_{ijk} + t_{jki} + t_{kij} for rank-3 tensors of uniform variance.
Tensor cyclic_sum(const Tensor& t);

// B_{...i...} -> B_{...a...} F^a_i on every listed covariant slot.
Tensor f_pullback(const Tensor& t, const Tensor& F, const SlotSpec& s);

// (frobenius, max_abs) of the coordinate components. The metric argument is
// reserved for a future invariant-norm mode and is unused.
std::pair<double, double> norms(const Tensor& t);
std::pair<double, double> norms(const Tensor& t, const Tensor& g);

double frobenius(const Tensor& t);
double max_abs(const Tensor& t);

// Slot permutation: result slot p[s] takes input slot s.
Tensor transpose_slots(const Tensor& t, const std::vector<int>& perm);

Tensor outer(const Tensor& a, const Tensor& b);

} // namespace stepanov
