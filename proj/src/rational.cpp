#include "kstab/rational.hpp"

#include <sstream>
#include <stdexcept>

namespace kstab {

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    std::string s = text;
    // mpq_rational accepts "p/q" directly but also tolerates whitespace and
    // leading '+' poorly across versions; validate the shape ourselves.
    auto valid_int = [](const std::string& t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw std::invalid_argument("malformed rational '" + text + "'");
        return Rat(Int(s));
    }
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den))
        throw std::invalid_argument("malformed rational '" + text + "'");
    Int d(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rat(Int(num), d);
}

std::string format_rational(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

RatVec parse_rational_vector(const std::string& text) {
    std::vector<Rat> parts;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, ',')) parts.push_back(parse_rational(cur));
    if (parts.empty()) throw std::invalid_argument("empty vector");
    RatVec v(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<int>(i)) = parts[i];
    return v;
}

std::string format_rational_vector(const RatVec& v) {
    std::ostringstream os;
    for (int i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v(i);
    }
    return os.str();
}

Int content(const RatVec& v) {
    Int g = 0;
    for (int i = 0; i < v.size(); ++i) {
        if (!is_integer(v(i))) throw std::invalid_argument("content of a non-integer vector");
        g = boost::multiprecision::gcd(g, numerator(v(i)));
    }
    return boost::multiprecision::abs(g);
}

RatVec primitivize(const RatVec& v) {
    Int l = denominator_lcm(v);
    RatVec w = v * Rat(l);
    Int g = content(w);
    if (g == 0) throw std::invalid_argument("primitivize of the zero vector");
    return w / Rat(g);
}

Int denominator_lcm(const RatVec& v) {
    Int l = 1;
    for (int i = 0; i < v.size(); ++i) l = boost::multiprecision::lcm(l, denominator(v(i)));
    return l;
}

Rat binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Rat r = 1;
    for (long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace kstab
