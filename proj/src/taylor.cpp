#include "stepanov/taylor.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace stepanov {

namespace {

constexpr double kDivisionFloor = 1e-14;

void enumerate(int nvars, int order, std::vector<std::array<std::uint8_t, kMaxTaylorVars>>& out) {
    // graded enumeration: all multi-indices of total degree d, d = 0..order
    std::array<std::uint8_t, kMaxTaylorVars> cur{};
    for (int d = 0; d <= order; ++d) {
        // enumerate compositions of d into nvars parts, lexicographic
        std::vector<int> a(static_cast<std::size_t>(nvars), 0);
        a[0] = d;
        while (true) {
            cur.fill(0);
            for (int v = 0; v < nvars; ++v) cur[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(a[static_cast<std::size_t>(v)]);
            out.push_back(cur);
            // next composition
            int i = nvars - 2;
            while (i >= 0 && a[static_cast<std::size_t>(i)] == 0) --i;
            if (i < 0) break;
            int rest = 0;
            for (int v = i + 1; v < nvars; ++v) {
                rest += a[static_cast<std::size_t>(v)];
                a[static_cast<std::size_t>(v)] = 0;
            }
            a[static_cast<std::size_t>(i)] -= 1;
            a[static_cast<std::size_t>(i + 1)] = rest + 1;
        }
    }
}

std::uint64_t pack(const std::array<std::uint8_t, kMaxTaylorVars>& e) {
    std::uint64_t k = 0;
    for (int v = 0; v < kMaxTaylorVars; ++v) k = (k << 8) | e[static_cast<std::size_t>(v)];
    return k;
}

} // namespace

TaylorBasis::TaylorBasis(int nvars_, int order_) : nvars(nvars_), order(order_) {
    enumerate(nvars, order, exps);
    std::map<std::uint64_t, int> lookup;
    for (int i = 0; i < static_cast<int>(exps.size()); ++i) lookup[pack(exps[static_cast<std::size_t>(i)])] = i;
    const int N = static_cast<int>(exps.size());
    prod.assign(static_cast<std::size_t>(N), std::vector<int>(static_cast<std::size_t>(N), -1));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            std::array<std::uint8_t, kMaxTaylorVars> s{};
            int deg = 0;
            for (int v = 0; v < nvars; ++v) {
                s[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(
                    exps[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] +
                    exps[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)]);
                deg += s[static_cast<std::size_t>(v)];
            }
            if (deg <= order) prod[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = lookup.at(pack(s));
        }
    }
    factorial.resize(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        double f = 1.0;
        for (int v = 0; v < nvars; ++v)
            for (int k = 2; k <= exps[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]; ++k) f *= k;
        factorial[static_cast<std::size_t>(i)] = f;
    }
}

int TaylorBasis::find(std::span<const int> alpha) const {
    for (int i = 0; i < static_cast<int>(exps.size()); ++i) {
        bool match = true;
        for (int v = 0; v < nvars; ++v)
            if (exps[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] !=
                (v < static_cast<int>(alpha.size()) ? alpha[static_cast<std::size_t>(v)] : 0)) {
                match = false;
                break;
            }
        if (match) return i;
    }
    return -1;
}

std::shared_ptr<const TaylorBasis> TaylorBasis::get(int nvars, int order) {
    if (nvars < 1 || nvars > kMaxTaylorVars) throw Error("taylor: unsupported number of variables");
    if (order < 0 || order > kMaxTaylorOrder) throw Error("taylor: unsupported order");
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::shared_ptr<const TaylorBasis>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot = std::shared_ptr<const TaylorBasis>(new TaylorBasis(nvars, order));
    return slot;
}

TaylorPoly TaylorPoly::constant(int nvars, int order, double v) {
    auto b = TaylorBasis::get(nvars, order);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b->exps.size()));
    c(0) = v;
    return TaylorPoly(std::move(b), std::move(c));
}

TaylorPoly TaylorPoly::variable(int nvars, int order, int var, double value) {
    auto b = TaylorBasis::get(nvars, order);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b->exps.size()));
    c(0) = value;
    if (order >= 1) {
        std::vector<int> alpha(static_cast<std::size_t>(nvars), 0);
        alpha[static_cast<std::size_t>(var)] = 1;
        c(b->find(alpha)) = 1.0;
    }
    return TaylorPoly(std::move(b), std::move(c));
}

double TaylorPoly::partial(std::span<const int> alpha) const {
    int i = basis_->find(alpha);
    if (i < 0) throw Error("taylor: partial order exceeds truncation order");
    return c_(i) * basis_->factorial[static_cast<std::size_t>(i)];
}

TaylorPoly TaylorPoly::derivative(int var) const {
    const int new_order = basis_->order > 0 ? basis_->order - 1 : 0;
    auto b = TaylorBasis::get(basis_->nvars, new_order);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b->exps.size()));
    std::vector<int> alpha(static_cast<std::size_t>(basis_->nvars));
    for (std::size_t i = 0; i < basis_->exps.size(); ++i) {
        int ev = basis_->exps[i][static_cast<std::size_t>(var)];
        if (ev == 0) continue;
        for (int v = 0; v < basis_->nvars; ++v) alpha[static_cast<std::size_t>(v)] = basis_->exps[i][static_cast<std::size_t>(v)];
        alpha[static_cast<std::size_t>(var)] -= 1;
        int j = b->find(alpha);
        if (j >= 0) c(j) += c_(static_cast<Eigen::Index>(i)) * ev;
    }
    return TaylorPoly(std::move(b), std::move(c));
}

TaylorPoly TaylorPoly::truncated(int order) const {
    if (order >= basis_->order) return *this;
    auto b = TaylorBasis::get(basis_->nvars, order);
    Eigen::VectorXd c = c_.head(static_cast<Eigen::Index>(b->exps.size()));
    return TaylorPoly(std::move(b), std::move(c));
}

TaylorPoly TaylorPoly::operator-() const { return TaylorPoly(basis_, -c_); }

TaylorPoly& TaylorPoly::operator+=(const TaylorPoly& o) {
    if (basis_ != o.basis_) throw Error("taylor: basis mismatch");
    c_ += o.c_;
    return *this;
}
TaylorPoly& TaylorPoly::operator-=(const TaylorPoly& o) {
    if (basis_ != o.basis_) throw Error("taylor: basis mismatch");
    c_ -= o.c_;
    return *this;
}
TaylorPoly& TaylorPoly::operator+=(double s) {
    c_(0) += s;
    return *this;
}
TaylorPoly& TaylorPoly::operator-=(double s) {
    c_(0) -= s;
    return *this;
}
TaylorPoly& TaylorPoly::operator*=(double s) {
    c_ *= s;
    return *this;
}

TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b) {
    if (a.basis_ != b.basis_) throw Error("taylor: basis mismatch");
    const auto& basis = *a.basis_;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(a.c_.size());
    const int N = static_cast<int>(basis.exps.size());
    for (int i = 0; i < N; ++i) {
        double ai = a.c_(i);
        if (ai == 0.0) continue;
        const auto& row = basis.prod[static_cast<std::size_t>(i)];
        for (int j = 0; j < N; ++j) {
            int k = row[static_cast<std::size_t>(j)];
            if (k >= 0 && b.c_(j) != 0.0) c(k) += ai * b.c_(j);
        }
    }
    return TaylorPoly(a.basis_, std::move(c));
}

TaylorPoly TaylorPoly::compose(const TaylorPoly& u, std::span<const double> f) {
    // Horner evaluation of sum_k f[k] w^k where w = u - u.value().
    TaylorPoly w = u;
    w.c_(0) = 0.0;
    TaylorPoly r = TaylorPoly::constant(u.nvars(), u.order(), f[f.size() - 1]);
    for (int k = static_cast<int>(f.size()) - 2; k >= 0; --k) {
        r = r * w;
        r += f[static_cast<std::size_t>(k)];
    }
    return r;
}

TaylorPoly reciprocal(const TaylorPoly& u) {
    double u0 = u.value();
    if (std::abs(u0) < kDivisionFloor) throw DomainError("division by (near-)zero");
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    double p = 1.0 / u0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = (k % 2 == 0) ? p : -p;
        p /= u0;
    }
    return TaylorPoly::compose(u, f);
}

TaylorPoly operator/(const TaylorPoly& a, const TaylorPoly& b) { return a * reciprocal(b); }
TaylorPoly operator/(double s, const TaylorPoly& b) { return reciprocal(b) * s; }

TaylorPoly exp(const TaylorPoly& u) {
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    double e = std::exp(u.value());
    double fact = 1.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        f[k] = e / fact;
    }
    return TaylorPoly::compose(u, f);
}

TaylorPoly log(const TaylorPoly& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw DomainError("log of nonpositive value");
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    f[0] = std::log(u0);
    double p = 1.0 / u0;
    for (std::size_t k = 1; k < f.size(); ++k) {
        f[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
        p /= u0;
    }
    return TaylorPoly::compose(u, f);
}

TaylorPoly sqrt(const TaylorPoly& u) {
    double u0 = u.value();
    if (u0 <= 0.0) throw DomainError("sqrt of nonpositive value");
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    // binomial series: d^k sqrt / k! = C(1/2, k) u0^{1/2-k}
    double coef = 1.0;
    double power = std::sqrt(u0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = coef * power;
        coef *= (0.5 - static_cast<double>(k)) / static_cast<double>(k + 1);
        power /= u0;
    }
    return TaylorPoly::compose(u, f);
}

namespace {
TaylorPoly trig(const TaylorPoly& u, double s0, double c0, bool want_sin) {
    // derivatives cycle with period 4
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    double cyc[4];
    if (want_sin) {
        cyc[0] = s0; cyc[1] = c0; cyc[2] = -s0; cyc[3] = -c0;
    } else {
        cyc[0] = c0; cyc[1] = -s0; cyc[2] = -c0; cyc[3] = s0;
    }
    double fact = 1.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        f[k] = cyc[k % 4] / fact;
    }
    return TaylorPoly::compose(u, f);
}
} // namespace

TaylorPoly sin(const TaylorPoly& u) { return trig(u, std::sin(u.value()), std::cos(u.value()), true); }
TaylorPoly cos(const TaylorPoly& u) { return trig(u, std::sin(u.value()), std::cos(u.value()), false); }
TaylorPoly tan(const TaylorPoly& u) { return sin(u) / cos(u); }

TaylorPoly sinh(const TaylorPoly& u) {
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    double sh = std::sinh(u.value()), ch = std::cosh(u.value());
    double fact = 1.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        f[k] = ((k % 2 == 0) ? sh : ch) / fact;
    }
    return TaylorPoly::compose(u, f);
}

TaylorPoly cosh(const TaylorPoly& u) {
    std::vector<double> f(static_cast<std::size_t>(u.order()) + 1);
    double sh = std::sinh(u.value()), ch = std::cosh(u.value());
    double fact = 1.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k > 0) fact *= static_cast<double>(k);
        f[k] = ((k % 2 == 0) ? ch : sh) / fact;
    }
    return TaylorPoly::compose(u, f);
}

TaylorPoly atan(const TaylorPoly& u) {
    const int ord = u.order();
    double u0 = u.value();
    // univariate series of 1/(1 + (u0+t)^2) = 1/(q0 + q1 t + t^2)
    double q0 = 1.0 + u0 * u0, q1 = 2.0 * u0;
    std::vector<double> b(static_cast<std::size_t>(ord) + 1, 0.0);
    b[0] = 1.0 / q0;
    for (int k = 1; k <= ord; ++k) {
        double acc = q1 * b[static_cast<std::size_t>(k - 1)];
        if (k >= 2) acc += b[static_cast<std::size_t>(k - 2)];
        b[static_cast<std::size_t>(k)] = -acc / q0;
    }
    std::vector<double> f(static_cast<std::size_t>(ord) + 1);
    f[0] = std::atan(u0);
    for (int k = 1; k <= ord; ++k) f[static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(k - 1)] / static_cast<double>(k);
    return TaylorPoly::compose(u, f);
}

TaylorPoly ipow(const TaylorPoly& u, long long e) {
    if (e < 0) return ipow(reciprocal(u), -e);
    TaylorPoly r = TaylorPoly::constant(u.nvars(), u.order(), 1.0);
    TaylorPoly base = u;
    long long k = e;
    while (k > 0) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

TaylorPoly pow(const TaylorPoly& u, const TaylorPoly& e) {
    // constant integer exponent: exact repeated multiplication, any base sign
    bool const_exp = true;
    for (Eigen::Index i = 1; i < e.coeffs().size(); ++i)
        if (e.coeffs()(i) != 0.0) { const_exp = false; break; }
    if (const_exp) {
        double ev = e.value();
        if (ev == std::floor(ev) && std::abs(ev) < 64.0) return ipow(u, static_cast<long long>(ev));
    }
    return exp(e * log(u));
}

} // namespace stepanov
