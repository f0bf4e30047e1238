#include "paperfold/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

namespace paperfold {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

bool try_parse_rat(std::string_view text, Rat& out) {
    if (text.empty()) return false;
    bool neg = false;
    std::string_view s = text;
    if (s.front() == '-' || s.front() == '+') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return false;
        mpz_class n{std::string(num), 10}, d{std::string(den), 10};
        if (d == 0) return false;
        out = Rat(n, d);
    } else if (dot != std::string_view::npos) {
        auto ip = s.substr(0, dot);
        auto fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || (!fp.empty() && !all_digits(fp))) return false;
        mpz_class n{std::string(ip) + std::string(fp), 10};
        mpz_class d = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) d *= 10;
        out = Rat(n, d);
    } else {
        if (!all_digits(s)) return false;
        out = Rat(mpz_class{std::string(s), 10});
    }
    out.canonicalize();
    if (neg) out = -out;
    return true;
}

Rat parse_rat(std::string_view text) {
    Rat r;
    if (!try_parse_rat(text, r))
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rat& r) { return r.get_d(); }

long double to_ldouble(const Rat& r) {
    // mpq get_d truncates; two-step division keeps a few more bits
    mpf_class n(r.get_num(), 128), d(r.get_den(), 128);
    mpf_class q = n / d;
    long exp = 0;
    double mant = mpf_get_d_2exp(&exp, q.get_mpf_t());
    mpf_class hi(mant, 128);
    mpf_class scaled = q;
    if (exp >= 0)
        mpf_div_2exp(scaled.get_mpf_t(), q.get_mpf_t(), static_cast<mp_bitcnt_t>(exp));
    else
        mpf_mul_2exp(scaled.get_mpf_t(), q.get_mpf_t(), static_cast<mp_bitcnt_t>(-exp));
    mpf_class lo = scaled - hi;
    long double res = static_cast<long double>(mant) + static_cast<long double>(lo.get_d());
    return std::ldexp(res, static_cast<int>(exp));
}

std::string dec12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string dec12(const Rat& r) { return dec12(to_double(r)); }

Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat floor_dyadic(double v, int bits) {
    double scaled = std::floor(std::ldexp(v, bits));
    mpz_class n(scaled);
    mpz_class d = 1;
    d <<= bits;
    Rat r(n, d);
    r.canonicalize();
    return r;
}

bool rat_sqrt(const Rat& r, Rat& out) {
    if (r < 0) return false;
    mpz_class n = r.get_num(), d = r.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    out = Rat(sn, sd);
    out.canonicalize();
    return true;
}

std::size_t RatHash::operator()(const Rat& r) const {
    auto mix = [](const mpz_class& z) {
        std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
        std::size_t n = mpz_size(z.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i)
            h = h * 1000003u ^ static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), static_cast<mp_size_t>(i)));
        return h;
    };
    return mix(r.get_num()) * 31u ^ mix(r.get_den());
}

}  // namespace paperfold
