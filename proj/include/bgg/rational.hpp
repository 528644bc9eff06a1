/**
 * Exact rational scalar type and small fixed-size vector helpers.
 *
 * All geometry and linear algebra in this library is carried out over the
 * rationals; no floating point is used anywhere.
 */

#ifndef BGG_RATIONAL_HPP
#define BGG_RATIONAL_HPP

#include <array>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/gmp.hpp>

namespace bgg {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Fixed 3-slot vector; 2D data keeps the third coordinate at zero.
using Vec3 = std::array<Rational, 3>;

inline Vec3 vec3(Rational x, Rational y, Rational z = 0) { return {std::move(x), std::move(y), std::move(z)}; }

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(const Rational& s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline Rational dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// 2D perp convention ([x,y])^perp = [-y,x]; acts on the first two slots.
inline Vec3 perp2d(const Vec3& a) { return {-a[1], a[0], 0}; }

inline bool is_zero_vec(const Vec3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

inline int sign_of(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

/// Parse "p/q" or a plain integer; throws std::invalid_argument on garbage.
/// Always returns a canonical (reduced, positive-denominator) value.
inline Rational parse_rational(const std::string& tok) {
    auto is_int = [](const std::string& s) {
        size_t i = (s.size() > 1 && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i >= s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    auto slash = tok.find('/');
    std::string num = tok.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : tok.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw std::invalid_argument("malformed rational token: " + tok);
    Integer d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in rational token: " + tok);
    return Rational(Integer(num)) / Rational(d);
}

inline std::string to_string(const Rational& r) { return r.str(); }

} // namespace bgg

#endif // BGG_RATIONAL_HPP
