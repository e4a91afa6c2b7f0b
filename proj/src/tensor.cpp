#include "stepanov/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stepanov {

namespace {

std::size_t pow_size(int dim, int rank) {
    std::size_t s = 1;
    for (int i = 0; i < rank; ++i) s *= static_cast<std::size_t>(dim);
    return s;
}

void check_slot(const Tensor& t, int s, const char* op) {
    if (s < 0 || s >= t.rank())
        throw SlotError(std::string(op) + ": slot " + std::to_string(s) + " out of range for rank " +
                        std::to_string(t.rank()));
}

// Iterate all multi-indices of the given rank.
template <class Fn>
void for_each_index(int dim, int rank, Fn&& fn) {
    std::vector<int> idx(static_cast<std::size_t>(rank), 0);
    while (true) {
        fn(idx);
        int s = rank - 1;
        for (; s >= 0; --s) {
            if (++idx[static_cast<std::size_t>(s)] < dim) break;
            idx[static_cast<std::size_t>(s)] = 0;
        }
        if (s < 0) break;
    }
}

} // namespace

Tensor::Tensor(int dim, std::vector<Variance> slots)
    : dim_(dim), slots_(std::move(slots)),
      data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pow_size(dim, static_cast<int>(slots_.size()))))) {
    if (dim_ <= 0) throw Error("tensor dimension must be positive");
}

Tensor::Tensor(int dim, std::vector<Variance> slots, Eigen::VectorXd data)
    : dim_(dim), slots_(std::move(slots)), data_(std::move(data)) {
    if (dim_ <= 0) throw Error("tensor dimension must be positive");
    if (static_cast<std::size_t>(data_.size()) != pow_size(dim_, rank()))
        throw Error("tensor data length does not equal dim^rank");
}

Tensor Tensor::scalar(int dim, double value) {
    Tensor t(dim, {});
    t.data_(0) = value;
    return t;
}

Tensor Tensor::delta(int dim) {
    Tensor t(dim, {Variance::Contra, Variance::Co});
    for (int i = 0; i < dim; ++i) t({i, i}) = 1.0;
    return t;
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m, Variance v0, Variance v1) {
    Tensor t(static_cast<int>(m.rows()), {v0, v1});
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) t({i, static_cast<int>(j)}) = m(i, j);
    return t;
}

std::size_t Tensor::offset(std::span<const int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw SlotError("index rank mismatch");
    std::size_t o = 0;
    for (int s = 0; s < rank(); ++s) {
        int i = idx[static_cast<std::size_t>(s)];
        if (i < 0 || i >= dim_) throw SlotError("index out of range");
        o = o * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
    }
    return o;
}

double& Tensor::at(std::span<const int> idx) { return data_(static_cast<Eigen::Index>(offset(idx))); }
double Tensor::at(std::span<const int> idx) const { return data_(static_cast<Eigen::Index>(offset(idx))); }

double Tensor::value() const {
    if (rank() != 0) throw RankError("value(): tensor is not rank 0");
    return data_(0);
}

Eigen::MatrixXd Tensor::as_matrix() const {
    if (rank() != 2) throw RankError("as_matrix(): tensor is not rank 2");
    Eigen::MatrixXd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = (*this)({i, j});
    return m;
}

Tensor& Tensor::operator+=(const Tensor& o) {
    if (o.dim_ != dim_ || o.slots_ != slots_) throw VarianceError("operator+: shape mismatch");
    data_ += o.data_;
    return *this;
}
Tensor& Tensor::operator-=(const Tensor& o) {
    if (o.dim_ != dim_ || o.slots_ != slots_) throw VarianceError("operator-: shape mismatch");
    data_ -= o.data_;
    return *this;
}
Tensor& Tensor::operator*=(double s) {
    data_ *= s;
    return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
Tensor operator*(Tensor a, double s) { return a *= s; }
Tensor operator*(double s, Tensor a) { return a *= s; }

Tensor contract(const Tensor& t, int a, int b) {
    check_slot(t, a, "contract");
    check_slot(t, b, "contract");
    if (a == b) throw SlotError("contract: slots must differ");
    if (t.slots()[static_cast<std::size_t>(a)] == t.slots()[static_cast<std::size_t>(b)])
        throw VarianceError("contract: slots must have opposite variance");
    const int n = t.dim();
    const int r = t.rank();
    std::vector<Variance> out_slots;
    for (int s = 0; s < r; ++s)
        if (s != a && s != b) out_slots.push_back(t.slots()[static_cast<std::size_t>(s)]);
    Tensor out(n, out_slots);
    std::vector<int> full(static_cast<std::size_t>(r));
    for_each_index(n, r - 2, [&](const std::vector<int>& oi) {
        int p = 0;
        for (int s = 0; s < r; ++s)
            if (s != a && s != b) full[static_cast<std::size_t>(s)] = oi[static_cast<std::size_t>(p++)];
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
            full[static_cast<std::size_t>(a)] = k;
            full[static_cast<std::size_t>(b)] = k;
            acc += t.at(full);
        }
        out.at(oi) = acc;
    });
    return out;
}

Tensor symmetrize(const Tensor& t, const SlotSpec& spec) {
    const int r = t.rank();
    std::vector<int> sel = spec.slots;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        check_slot(t, sel[i], "symmetrize");
        for (std::size_t j = i + 1; j < sel.size(); ++j)
            if (sel[i] == sel[j]) throw SlotError("symmetrize: repeated slot");
    }
    for (std::size_t i = 1; i < sel.size(); ++i)
        if (t.slots()[static_cast<std::size_t>(sel[i])] != t.slots()[static_cast<std::size_t>(sel[0])])
            throw VarianceError("symmetrize: slots must share variance");

    std::vector<int> sorted = sel;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> perm = sorted;
    Tensor out(t.dim(), t.slots());
    std::vector<int> src(static_cast<std::size_t>(r));
    double count = 0.0;
    do {
        ++count;
        for_each_index(t.dim(), r, [&](const std::vector<int>& idx) {
            src = idx;
            for (std::size_t s = 0; s < sorted.size(); ++s)
                src[static_cast<std::size_t>(sorted[s])] = idx[static_cast<std::size_t>(perm[s])];
            out.at(idx) += t.at(src);
        });
    } while (std::next_permutation(perm.begin(), perm.end()));
    out *= 1.0 / count;
    return out;
}

Tensor cyclic_sum(const Tensor& t) {
    if (t.rank() != 3) throw RankError("cyclic_sum: rank must be 3");
    if (t.slots()[0] != t.slots()[1] || t.slots()[1] != t.slots()[2])
        throw VarianceError("cyclic_sum: slots must share variance");
    Tensor out(t.dim(), t.slots());
    const int n = t.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                out({i, j, k}) = t({i, j, k}) + t({j, k, i}) + t({k, i, j});
    return out;
}

Tensor f_pullback(const Tensor& t, const Tensor& F, const SlotSpec& spec) {
    if (F.rank() != 2 || F.slots()[0] != Variance::Contra || F.slots()[1] != Variance::Co)
        throw VarianceError("f_pullback: F must be a (1,1) tensor");
    Tensor out = t;
    const int n = t.dim();
    for (int s : spec.slots) {
        check_slot(t, s, "f_pullback");
        if (t.slots()[static_cast<std::size_t>(s)] != Variance::Co)
            throw VarianceError("f_pullback: listed slot is not covariant");
        Tensor next(n, t.slots());
        std::vector<int> src(static_cast<std::size_t>(t.rank()));
        for_each_index(n, t.rank(), [&](const std::vector<int>& idx) {
            src = idx;
            double acc = 0.0;
            for (int a = 0; a < n; ++a) {
                src[static_cast<std::size_t>(s)] = a;
                acc += out.at(src) * F({a, idx[static_cast<std::size_t>(s)]});
            }
            next.at(idx) = acc;
        });
        out = std::move(next);
    }
    return out;
}

std::pair<double, double> norms(const Tensor& t) {
    return {t.data().norm(), t.data().size() ? t.data().cwiseAbs().maxCoeff() : 0.0};
}
std::pair<double, double> norms(const Tensor& t, const Tensor&) { return norms(t); }

double frobenius(const Tensor& t) { return t.data().norm(); }
double max_abs(const Tensor& t) { return t.data().size() ? t.data().cwiseAbs().maxCoeff() : 0.0; }

Tensor transpose_slots(const Tensor& t, const std::vector<int>& perm) {
    const int r = t.rank();
    if (static_cast<int>(perm.size()) != r) throw SlotError("transpose_slots: permutation rank mismatch");
    std::vector<Variance> out_slots(static_cast<std::size_t>(r));
    for (int s = 0; s < r; ++s) out_slots[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = t.slots()[static_cast<std::size_t>(s)];
    Tensor out(t.dim(), out_slots);
    std::vector<int> dst(static_cast<std::size_t>(r));
    for_each_index(t.dim(), r, [&](const std::vector<int>& idx) {
        for (int s = 0; s < r; ++s) dst[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = idx[static_cast<std::size_t>(s)];
        out.at(dst) = t.at(idx);
    });
    return out;
}

Tensor outer(const Tensor& a, const Tensor& b) {
    if (a.dim() != b.dim()) throw Error("outer: dimension mismatch");
    std::vector<Variance> slots = a.slots();
    slots.insert(slots.end(), b.slots().begin(), b.slots().end());
    Tensor out(a.dim(), slots);
    const Eigen::Index nb = b.data().size();
    for (Eigen::Index i = 0; i < a.data().size(); ++i)
        for (Eigen::Index j = 0; j < nb; ++j) out.data()(i * nb + j) = a.data()(i) * b.data()(j);
    return out;
}

} // namespace stepanov
