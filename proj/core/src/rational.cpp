#include <cctype>
#include <sstream>

#include "indep/pregeom.hpp"

namespace indep {

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto s = strip(text);
    const auto slash = s.find('/');
    const auto num = s.substr(0, slash);
    const auto den = slash == std::string_view::npos ? std::string_view{} : strip(s.substr(slash + 1));
    if (!is_integer_literal(strip(num)) || (slash != std::string_view::npos && !is_integer_literal(den)))
        throw std::invalid_argument("invalid rational '" + std::string(text) + "'");
    std::string n(strip(num));
    if (n.front() == '+') n.erase(0, 1);
    mpz_class p(n, 10), q(1);
    if (slash != std::string_view::npos) {
        std::string d(den);
        if (d.front() == '+') d.erase(0, 1);
        q = mpz_class(d, 10);
        if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& q) { return q.get_str(10); }

Vector::Vector(std::vector<Rational> coords) : coords_(std::move(coords)) {}

Vector::Vector(std::initializer_list<long> coords) {
    for (long c : coords) coords_.emplace_back(c);
}

Vector Vector::zero(std::size_t dim) { return Vector(std::vector<Rational>(dim, Rational(0))); }

Vector Vector::unit(std::size_t dim, std::size_t i) {
    if (i >= dim) throw DimensionError("basis index " + std::to_string(i) + " outside dimension " + std::to_string(dim));
    auto v = std::vector<Rational>(dim, Rational(0));
    v[i] = 1;
    return Vector(std::move(v));
}

Vector Vector::ones(std::size_t dim) { return Vector(std::vector<Rational>(dim, Rational(1))); }

bool Vector::is_zero() const {
    for (const auto& c : coords_)
        if (c != 0) return false;
    return true;
}

bool Vector::is_integral() const {
    for (const auto& c : coords_)
        if (c.get_den() != 1) return false;
    return true;
}

Vector operator+(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw DimensionError("vector dimensions differ");
    std::vector<Rational> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return Vector(std::move(out));
}

Vector operator-(const Vector& a, const Vector& b) {
    if (a.dim() != b.dim()) throw DimensionError("vector dimensions differ");
    std::vector<Rational> out(a.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return Vector(std::move(out));
}

Vector operator*(const Rational& c, const Vector& v) {
    std::vector<Rational> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * v[i];
    return Vector(std::move(out));
}

Vector parse_vector(std::string_view text) {
    auto s = strip(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw std::invalid_argument("vector literal must be bracketed: '" + std::string(text) + "'");
    s = strip(s.substr(1, s.size() - 2));
    std::vector<Rational> coords;
    if (s.empty()) return Vector(std::move(coords));
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        coords.push_back(parse_rational(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return Vector(std::move(coords));
}

std::string format_vector(const Vector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) out += ", ";
        out += format_rational(v[i]);
    }
    return out + "]";
}

std::string format_elements(std::span<const Vector> s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += format_vector(s[i]);
    }
    return out + "}";
}

}  // namespace indep
