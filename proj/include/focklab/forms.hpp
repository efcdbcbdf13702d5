#pragma once

// Exterior differential forms on a parameter space, with coefficients in any
// ring C that supports +, -, *, conj and a partial derivative
// `derivative(c, var)`. Scalar forms use C = RationalFunction, matrix-valued
// forms use Matrix<RationalFunction>, operator-valued forms use UElement.

#include <map>
#include <string>
#include <vector>

#include "focklab/diff_field.hpp"
#include "focklab/errors.hpp"
#include "focklab/matrix.hpp"

namespace focklab {

/// Strictly increasing parameter indices: {0, 2} is dp0 ^ dp2.
using WedgeKey = std::vector<std::size_t>;

inline RationalFunction derivative(const RationalFunction& f, std::size_t var) { return f.derivative(var); }

inline Matrix<RationalFunction> derivative(const Matrix<RationalFunction>& m, std::size_t var) {
    Matrix<RationalFunction> out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).derivative(var);
    return out;
}

inline Matrix<RationalFunction> conj(const Matrix<RationalFunction>& m) { return m.conj(); }
inline bool is_zero(const Matrix<RationalFunction>& m) { return m.is_zero(); }

namespace detail {

/// Sign of sorting the concatenation a ++ b, or 0 when they share an index.
inline int merge_sign(const WedgeKey& a, const WedgeKey& b, WedgeKey& merged) {
    merged.clear();
    int inversions = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i] < b[j])) {
            merged.push_back(a[i++]);
        } else if (i == a.size() || b[j] < a[i]) {
            inversions += static_cast<int>(a.size() - i);
            merged.push_back(b[j++]);
        } else {
            return 0;
        }
    }
    return inversions % 2 ? -1 : 1;
}

}  // namespace detail

template <class C>
class Form {
public:
    Form() : n_(0), degree_(0), zero_() {}
    /// Zero form of the given degree; `zero` fixes the coefficient shape.
    Form(std::size_t num_params, int degree, C zero) : n_(num_params), degree_(degree), zero_(std::move(zero)) {}

    static Form function(std::size_t num_params, const C& f, const C& zero) {
        Form w(num_params, 0, zero);
        w.add(WedgeKey{}, f);
        return w;
    }

    /// coeff * d(param var)
    static Form differential(std::size_t num_params, std::size_t var, const C& coeff, const C& zero) {
        Form w(num_params, 1, zero);
        w.add(WedgeKey{var}, coeff);
        return w;
    }

    std::size_t num_params() const { return n_; }
    int degree() const { return degree_; }
    const C& zero_coefficient() const { return zero_; }
    const std::map<WedgeKey, C>& terms() const { return terms_; }

    C coefficient(const WedgeKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? zero_ : it->second;
    }

    bool is_zero() const { return terms_.empty(); }

    void add(const WedgeKey& key, const C& c) {
        if (static_cast<int>(key.size()) != degree_) throw DimensionMismatch("wedge key of wrong degree");
        if (focklab::is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second = it->second + c;
            if (focklab::is_zero(it->second)) terms_.erase(it);
        }
    }

    Form& operator+=(const Form& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        check_compatible(o);
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator-(const Form& a) {
        Form r(a.n_, a.degree_, a.zero_);
        for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, -c);
        return r;
    }

    /// Exterior derivative. A top-degree input has zero derivative.
    Form d() const {
        Form r(n_, degree_ + 1, zero_);
        if (static_cast<std::size_t>(degree_) >= n_) return r;
        WedgeKey merged;
        for (const auto& [k, c] : terms_) {
            for (std::size_t v = 0; v < n_; ++v) {
                int s = detail::merge_sign(WedgeKey{v}, k, merged);
                if (s == 0) continue;
                C dc = derivative(c, v);
                if (focklab::is_zero(dc)) continue;
                r.add(merged, s > 0 ? dc : -dc);
            }
        }
        return r;
    }

    /// Coefficientwise map (same degree), e.g. scaling or taking a trace.
    template <class F>
    auto map(F&& f) const {
        using D = decltype(f(zero_));
        Form<D> r(n_, degree_, f(zero_));
        for (const auto& [k, c] : terms_) r.add(k, f(c));
        return r;
    }

    Form conj() const {
        return map([](const C& c) { return focklab::conj(c); });
    }

    friend bool operator==(const Form& a, const Form& b) {
        return a.n_ == b.n_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

private:
    void check_compatible(const Form& o) const {
        if (n_ != o.n_ || degree_ != o.degree_) throw DimensionMismatch("form degree or base mismatch");
    }

    std::size_t n_;
    int degree_;
    C zero_;
    std::map<WedgeKey, C> terms_;
};

/// a ^ b with coefficient product mul(ca, cb); the default is ca * cb.
template <class A, class B, class Mul>
auto wedge(const Form<A>& a, const Form<B>& b, Mul mul) {
    using C = decltype(mul(a.zero_coefficient(), b.zero_coefficient()));
    if (a.num_params() != b.num_params()) throw DimensionMismatch("wedge of forms on different bases");
    Form<C> r(a.num_params(), a.degree() + b.degree(), mul(a.zero_coefficient(), b.zero_coefficient()));
    WedgeKey merged;
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            int s = detail::merge_sign(ka, kb, merged);
            if (s == 0) continue;
            C p = mul(ca, cb);
            r.add(merged, s > 0 ? p : -p);
        }
    }
    return r;
}

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    return wedge(a, b, [](const C& x, const C& y) { return x * y; });
}

using ScalarForm = Form<RationalFunction>;
using MatrixForm = Form<Matrix<RationalFunction>>;

inline MatrixForm zero_matrix_form(std::size_t num_params, int degree, std::size_t rows, std::size_t cols) {
    return MatrixForm(num_params, degree, Matrix<RationalFunction>(rows, cols));
}

/// d(omega) + omega ^ omega for a matrix-valued 1-form.
inline MatrixForm curvature(const MatrixForm& omega) { return omega.d() + wedge(omega, omega); }

inline ScalarForm trace(const MatrixForm& w) {
    return w.map([](const Matrix<RationalFunction>& m) { return m.trace(); });
}

/// Renders with parameter names: "(1/2)*dx^dy + ...".
inline std::string to_string(const ScalarForm& w, const std::vector<std::string>& names) {
    if (w.is_zero()) return "0";
    std::string out;
    for (const auto& [k, c] : w.terms()) {
        if (!out.empty()) out += " + ";
        out += "(" + c.str(names) + ")";
        for (std::size_t j = 0; j < k.size(); ++j) out += (j ? "^d" : "*d") + names.at(k[j]);
    }
    return out;
}

}  // namespace focklab
