/**
 * Exact multivariate polynomials over the rationals (up to 3 variables),
 * with the vector/matrix calculus used by the differential operators and
 * the adjointness oracle, and closed-form monomial integration over
 * reference simplices.
 */

#ifndef BGG_POLY_HPP
#define BGG_POLY_HPP

#include <array>
#include <map>
#include <stdexcept>
#include <vector>

#include "bgg/rational.hpp"

namespace bgg {

using Mono = std::array<int, 3>;

class Poly {
  public:
    Poly() = default;
    explicit Poly(const Rational& c) {
        if (c != 0) terms_[{0, 0, 0}] = c;
    }
    static Poly var(int i) {
        Poly p;
        Mono m{0, 0, 0};
        m.at(i) = 1;
        p.terms_[m] = 1;
        return p;
    }
    static Poly monomial(const Mono& m, const Rational& c) {
        Poly p;
        if (c != 0) p.terms_[m] = c;
        return p;
    }

    const std::map<Mono, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[0] + m[1] + m[2]);
        return d;
    }

    void add_term(const Mono& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Poly operator+(const Poly& o) const {
        Poly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }
    Poly operator-(const Poly& o) const {
        Poly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }
    Poly operator*(const Poly& o) const {
        Poly r;
        for (const auto& [m, c] : terms_)
            for (const auto& [n, d] : o.terms_) r.add_term({m[0] + n[0], m[1] + n[1], m[2] + n[2]}, c * d);
        return r;
    }
    Poly operator*(const Rational& s) const {
        Poly r;
        if (s == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, c] : r.terms_) c *= s;
        return r;
    }
    Poly operator-() const { return *this * Rational(-1); }
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly diff(int var) const {
        Poly r;
        for (const auto& [m, c] : terms_) {
            if (m.at(var) == 0) continue;
            Mono n = m;
            --n.at(var);
            r.add_term(n, c * m.at(var));
        }
        return r;
    }

    Rational eval(const Vec3& x) const {
        Rational s(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int v = 0; v < 3; ++v)
                for (int k = 0; k < m[v]; ++k) t *= x[v];
            s += t;
        }
        return s;
    }

    /**
     * Substitute x_v = affine[v] (polynomials in the new variables) for
     * v = 0..n_old-1, by nested Horner evaluation.
     */
    Poly substitute(const std::vector<Poly>& affine) const { return subst_rec(*this, affine, static_cast<int>(affine.size()) - 1); }

    /**
     * Integral over the reference k-simplex {t >= 0, sum t_i <= 1} of a
     * polynomial in variables 0..k-1:  integral of t^a equals
     * (prod a_i!) / (k + sum a_i)!.
     */
    Rational integrate_reference(int k) const {
        Rational s(0);
        for (const auto& [m, c] : terms_) {
            for (int v = k; v < 3; ++v)
                if (m[v] != 0) throw std::invalid_argument("integrate_reference: stray variable");
            Integer num(1);
            int total = k;
            for (int v = 0; v < k; ++v) {
                num *= factorial(m[v]);
                total += m[v];
            }
            s += c * Rational(num, factorial(total));
        }
        return s;
    }

  private:
    static Integer factorial(int n) {
        static std::vector<Integer> cache{1};
        while (static_cast<int>(cache.size()) <= n) cache.push_back(cache.back() * static_cast<int>(cache.size()));
        return cache[n];
    }

    static Poly subst_rec(const Poly& p, const std::vector<Poly>& affine, int var) {
        if (var < 0) return p; // constant in all substituted variables
        // Split p = sum_d q_d * x_var^d with q_d free of x_var, then Horner.
        std::map<int, Poly> layers;
        for (const auto& [m, c] : p.terms_) {
            Mono n = m;
            int d = n.at(var);
            n.at(var) = 0;
            layers[d].add_term(n, c);
        }
        Poly result;
        int prev_deg = -1;
        for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
            if (prev_deg >= 0)
                for (int k = 0; k < prev_deg - it->first; ++k) result = result * affine[var];
            result = result + subst_rec(it->second, affine, var - 1);
            prev_deg = it->first;
        }
        if (prev_deg > 0)
            for (int k = 0; k < prev_deg; ++k) result = result * affine[var];
        return result;
    }

    std::map<Mono, Rational> terms_;
};

inline Poly operator*(const Rational& s, const Poly& p) { return p * s; }

using VecPoly = std::array<Poly, 3>;
using MatPoly = std::array<std::array<Poly, 3>, 3>;

// -------------------------- constructors ----------------------------------

inline VecPoly vec_poly(const Vec3& v) { return {Poly(v[0]), Poly(v[1]), Poly(v[2])}; }

/// The coordinate field x (componentwise position polynomial).
inline VecPoly position_poly() { return {Poly::var(0), Poly::var(1), Poly::var(2)}; }

inline MatPoly outer(const Vec3& a, const Vec3& b) {
    MatPoly m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = Poly(a[i] * b[j]);
    return m;
}

/// Outer product of a polynomial vector and a constant vector.
inline MatPoly outer_poly(const VecPoly& a, const Vec3& b) {
    MatPoly m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i] * b[j];
    return m;
}

// -------------------------- algebra ---------------------------------------

inline VecPoly operator+(const VecPoly& a, const VecPoly& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline VecPoly operator-(const VecPoly& a, const VecPoly& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline VecPoly operator*(const Rational& s, const VecPoly& a) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline MatPoly operator+(const MatPoly& a, const MatPoly& b) {
    MatPoly m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] + b[i][j];
    return m;
}
inline MatPoly operator-(const MatPoly& a, const MatPoly& b) {
    MatPoly m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] - b[i][j];
    return m;
}
inline MatPoly operator*(const Rational& s, const MatPoly& a) {
    MatPoly m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = a[i][j] * s;
    return m;
}

inline Poly dot(const VecPoly& a, const VecPoly& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Poly dot(const Vec3& a, const VecPoly& b) { return b[0] * a[0] + b[1] * a[1] + b[2] * a[2]; }

inline Poly frobenius(const MatPoly& a, const MatPoly& b) {
    Poly s;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s = s + a[i][j] * b[i][j];
    return s;
}

inline VecPoly mat_vec(const MatPoly& m, const Vec3& v) {
    VecPoly r;
    for (int i = 0; i < 3; ++i) r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    return r;
}

inline VecPoly vec_mat(const Vec3& v, const MatPoly& m) {
    VecPoly r;
    for (int j = 0; j < 3; ++j) r[j] = m[0][j] * v[0] + m[1][j] * v[1] + m[2][j] * v[2];
    return r;
}

inline Poly bilinear(const Vec3& a, const MatPoly& m, const Vec3& b) { return dot(a, mat_vec(m, b)); }

inline MatPoly transpose(const MatPoly& m) {
    MatPoly t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[i][j] = m[j][i];
    return t;
}

inline MatPoly sym(const MatPoly& m) {
    MatPoly s;
    Rational half(1, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s[i][j] = (m[i][j] + m[j][i]) * half;
    return s;
}

inline Poly trace(const MatPoly& m) { return m[0][0] + m[1][1] + m[2][2]; }

inline MatPoly deviatoric(const MatPoly& m, int dim) {
    MatPoly d = m;
    Poly t = trace(m) * Rational(1, dim);
    for (int i = 0; i < dim; ++i) d[i][i] = d[i][i] - t;
    return d;
}

/// Cross product of a polynomial vector with each column: (v x m)_{:,j} = v x m_{:,j}.
inline MatPoly cross_cols(const VecPoly& v, const MatPoly& m) {
    MatPoly r;
    for (int j = 0; j < 3; ++j) {
        r[0][j] = v[1] * m[2][j] - v[2] * m[1][j];
        r[1][j] = v[2] * m[0][j] - v[0] * m[2][j];
        r[2][j] = v[0] * m[1][j] - v[1] * m[0][j];
    }
    return r;
}

inline Vec3 cross(const Vec3& a, const Vec3& b); // from rational.hpp (already defined)

// -------------------------- calculus --------------------------------------

inline VecPoly grad(const Poly& p, int dim) {
    VecPoly g;
    for (int i = 0; i < dim; ++i) g[i] = p.diff(i);
    return g;
}

inline Poly divergence(const VecPoly& v, int dim) {
    Poly d;
    for (int i = 0; i < dim; ++i) d = d + v[i].diff(i);
    return d;
}

/// Jacobian matrix (grad u)_{ij} = d u_i / d x_j.
inline MatPoly grad_vec(const VecPoly& u, int dim) {
    MatPoly g;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g[i][j] = u[i].diff(j);
    return g;
}

/// Row-wise divergence of a matrix field.
inline VecPoly div_rows(const MatPoly& m, int dim) {
    VecPoly d;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) d[i] = d[i] + m[i][j].diff(j);
    return d;
}

inline MatPoly hessian(const Poly& p, int dim) {
    MatPoly h;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) h[i][j] = p.diff(i).diff(j);
    return h;
}

inline Poly divdiv(const MatPoly& m, int dim) { return divergence(div_rows(m, dim), dim); }

/// 3D curl of a vector field.
inline VecPoly curl3(const VecPoly& v) {
    return {v[2].diff(1) - v[1].diff(2), v[0].diff(2) - v[2].diff(0), v[1].diff(0) - v[0].diff(1)};
}

/// 3D row-wise curl of a matrix field: row i of the result is curl(row i).
inline MatPoly curl_rows3(const MatPoly& m) {
    MatPoly r;
    for (int i = 0; i < 3; ++i) {
        VecPoly row{m[i][0], m[i][1], m[i][2]};
        VecPoly c = curl3(row);
        for (int j = 0; j < 3; ++j) r[i][j] = c[j];
    }
    return r;
}

/// 2D curl of a scalar: (grad p)^perp = (-dp/dy, dp/dx).
inline VecPoly curl2(const Poly& p) { return {-p.diff(1), p.diff(0), Poly()}; }

/// 2D row-wise curl of a vector field: row i = curl(u_i).
inline MatPoly curl_rows2(const VecPoly& u) {
    MatPoly r;
    for (int i = 0; i < 2; ++i) {
        r[i][0] = -u[i].diff(1);
        r[i][1] = u[i].diff(0);
    }
    return r;
}

/// 2D row-wise rot of a matrix field: (rot m)_i = d m_{i1}/dx - d m_{i0}/dy.
inline VecPoly rot_rows2(const MatPoly& m) {
    VecPoly r;
    for (int i = 0; i < 2; ++i) r[i] = m[i][1].diff(0) - m[i][0].diff(1);
    return r;
}

// -------------------------- simplex pullback ------------------------------

/// Affine parametrization t -> base + sum t_i dirs[i] of a k-simplex.
struct AffineMap {
    Vec3 base;
    std::vector<Vec3> dirs;
    int k() const { return static_cast<int>(dirs.size()); }
};

/// Substitute the parametrization into p (a polynomial in ambient x).
inline Poly pullback(const Poly& p, const AffineMap& map, int ambient_dim) {
    std::vector<Poly> affine(ambient_dim);
    for (int v = 0; v < ambient_dim; ++v) {
        affine[v] = Poly(map.base[v]);
        for (int i = 0; i < map.k(); ++i) affine[v].add_term(Mono{i == 0 ? 1 : 0, i == 1 ? 1 : 0, i == 2 ? 1 : 0}, map.dirs[i][v]);
    }
    return p.substitute(affine);
}

/// Plain reference integral of p over the k-simplex parametrized by map
/// (no metric factor: this is the pullback measure used by all atom actions).
inline Rational reference_integral(const Poly& p, const AffineMap& map, int ambient_dim) {
    return pullback(p, map, ambient_dim).integrate_reference(map.k());
}

} // namespace bgg

#endif // BGG_POLY_HPP
