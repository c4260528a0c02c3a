#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hr {

// Truncated bivariate power series Σ c(k,l) z^k w^l, k + l ≤ max_degree.
template <class S>
class Jet2 {
public:
    using Coeffs = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

    explicit Jet2(int max_degree = 6) : d_(max_degree), c_(Coeffs::Zero(max_degree + 1, max_degree + 1)) {
        if (max_degree < 0) throw std::invalid_argument("Jet2: negative degree");
    }

    static Jet2 constant(S v, int d) {
        Jet2 j(d);
        j.c_(0, 0) = v;
        return j;
    }
    static Jet2 z(int d) {
        Jet2 j(d);
        if (d >= 1) j.c_(1, 0) = S(1);
        return j;
    }
    static Jet2 w(int d) {
        Jet2 j(d);
        if (d >= 1) j.c_(0, 1) = S(1);
        return j;
    }

    int max_degree() const { return d_; }
    const Coeffs& coeffs() const { return c_; }

    S& operator()(int k, int l) {
        if (k < 0 || l < 0 || k + l > d_) throw std::out_of_range("Jet2: index beyond degree bound");
        return c_(k, l);
    }
    S operator()(int k, int l) const {
        if (k < 0 || l < 0 || k + l > d_) return S(0);
        return c_(k, l);
    }

    Jet2& operator+=(const Jet2& o) { check(o); c_ += o.c_; return *this; }
    Jet2& operator-=(const Jet2& o) { check(o); c_ -= o.c_; return *this; }
    Jet2& operator*=(const S& s) { c_ *= s; return *this; }
    Jet2& operator+=(const S& s) { c_(0, 0) += s; return *this; }
    Jet2& operator-=(const S& s) { c_(0, 0) -= s; return *this; }

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator-(Jet2 a) { a.c_ = -a.c_; return a; }
    friend Jet2 operator*(Jet2 a, const S& s) { return a *= s; }
    friend Jet2 operator*(const S& s, Jet2 a) { return a *= s; }
    friend Jet2 operator/(Jet2 a, const S& s) { a.c_ /= s; return a; }
    friend Jet2 operator+(Jet2 a, const S& s) { return a += s; }
    friend Jet2 operator+(const S& s, Jet2 a) { return a += s; }
    friend Jet2 operator-(Jet2 a, const S& s) { return a -= s; }

    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        a.check(b);
        Jet2 r(a.d_);
        for (int k1 = 0; k1 <= a.d_; ++k1)
            for (int l1 = 0; k1 + l1 <= a.d_; ++l1) {
                const S x = a.c_(k1, l1);
                if (x == S(0)) continue;
                for (int k2 = 0; k1 + l1 + k2 <= a.d_; ++k2)
                    for (int l2 = 0; k1 + l1 + k2 + l2 <= a.d_; ++l2)
                        r.c_(k1 + k2, l1 + l2) += x * b.c_(k2, l2);
            }
        return r;
    }

    Jet2 dz() const {
        Jet2 r(d_);
        for (int k = 1; k <= d_; ++k)
            for (int l = 0; k + l <= d_; ++l) r.c_(k - 1, l) = S(k) * c_(k, l);
        return r;
    }
    Jet2 dw() const {
        Jet2 r(d_);
        for (int k = 0; k <= d_; ++k)
            for (int l = 1; k + l <= d_; ++l) r.c_(k, l - 1) = S(l) * c_(k, l);
        return r;
    }

    Jet2 homogeneous(int deg) const {
        Jet2 r(d_);
        for (int k = 0; k <= deg && k <= d_; ++k)
            if (deg - k <= d_) r.c_(k, deg - k) = c_(k, deg - k);
        return r;
    }
    Jet2 truncated(int deg) const {
        Jet2 r(d_);
        for (int k = 0; k <= d_; ++k)
            for (int l = 0; k + l <= std::min(deg, d_); ++l) r.c_(k, l) = c_(k, l);
        return r;
    }

    template <class T>
    T eval(const T& z, const T& w) const {
        T acc = T(0);
        for (int k = d_; k >= 0; --k) {
            T row = T(0);
            for (int l = d_ - k; l >= 0; --l) row = row * w + T(c_(k, l));
            acc = acc * z + row;
        }
        return acc;
    }

    double max_abs() const { return c_.cwiseAbs().maxCoeff(); }

private:
    void check(const Jet2& o) const {
        if (o.d_ != d_) throw std::invalid_argument("DegreeMismatch");
    }

    int d_;
    Coeffs c_;
};

template <class S>
using JetPair = std::array<Jet2<S>, 2>;

template <class S>
JetPair<S> identity_pair(int d) {
    return {Jet2<S>::z(d), Jet2<S>::w(d)};
}

template <class S>
Jet2<S> compose(const Jet2<S>& outer, const JetPair<S>& inner) {
    const int d = outer.max_degree();
    if (inner[0].max_degree() != d || inner[1].max_degree() != d)
        throw std::invalid_argument("DegreeMismatch");
    std::vector<Jet2<S>> pz{Jet2<S>::constant(S(1), d)}, pw{Jet2<S>::constant(S(1), d)};
    for (int k = 1; k <= d; ++k) {
        pz.push_back(pz.back() * inner[0]);
        pw.push_back(pw.back() * inner[1]);
    }
    Jet2<S> r(d);
    for (int k = 0; k <= d; ++k)
        for (int l = 0; k + l <= d; ++l)
            if (outer(k, l) != S(0)) r += outer(k, l) * (pz[k] * pw[l]);
    return r;
}

template <class S>
JetPair<S> jet_compose(const JetPair<S>& outer, const JetPair<S>& inner) {
    return {compose(outer[0], inner), compose(outer[1], inner)};
}

// {Y,F} = ∂_wY ∂_zF − ∂_zY ∂_wF
template <class S>
Jet2<S> poisson(const Jet2<S>& Y, const Jet2<S>& F) {
    return Y.dw() * F.dz() - Y.dz() * F.dw();
}

// F∘Φ_Y by the Lie series F + {Y,F} + ½{Y,{Y,F}} + …
template <class S>
Jet2<S> lie_transform(const Jet2<S>& Y, const Jet2<S>& F) {
    Jet2<S> term = F, acc = F;
    for (int n = 1; n <= F.max_degree(); ++n) {
        term = poisson(Y, term) / S(n);
        if (term.max_abs() == 0.0) break;
        acc += term;
    }
    return acc;
}

// Φ_Y, time-one map of J∇Y = (∂_wY, −∂_zY)
template <class S>
JetPair<S> lie_flow(const Jet2<S>& Y) {
    const int d = Y.max_degree();
    return {lie_transform(Y, Jet2<S>::z(d)), lie_transform(Y, Jet2<S>::w(d))};
}

// ι_F from z̃ = z + ∂_w̃F(z,w̃), w = w̃ + ∂_zF(z,w̃)
template <class S>
JetPair<S> canonical_map(const Jet2<S>& F) {
    const int d = F.max_degree();
    const Jet2<S> z = Jet2<S>::z(d), w = Jet2<S>::w(d);
    const Jet2<S> Fz = F.dz(), Fw = F.dw();
    Jet2<S> wt = w;
    for (int it = 0; it <= d; ++it) wt = w - compose(Fz, JetPair<S>{z, wt});
    return {z + compose(Fw, JetPair<S>{z, wt}), wt};
}

// inverse of canonical_map for maps tangent to the identity
template <class S>
Jet2<S> generating_function(const JetPair<S>& map) {
    const int d = map[0].max_degree();
    const Jet2<S> z = Jet2<S>::z(d), wt = Jet2<S>::w(d);
    const Jet2<S> B = map[1] - wt;  // as a function of (z,w)
    Jet2<S> W = wt;                   // w as a function of (z, w̃)
    for (int it = 0; it <= d; ++it) W = wt - compose(B, JetPair<S>{z, W});
    const Jet2<S> Fw = compose(map[0], JetPair<S>{z, W}) - z;
    const Jet2<S> Fz = W - wt;
    Jet2<S> F(d);
    for (int k = 0; k <= d; ++k)
        for (int l = 0; k + l <= d; ++l) {
            if (l >= 1)
                F(k, l) = Fw(k, l - 1) / S(l);
            else if (k >= 1)
                F(k, 0) = Fz(k - 1, 0) / S(k);
        }
    return F;
}

}  // namespace hr
