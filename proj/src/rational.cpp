#include "clw/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace clw {

std::optional<Rat> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    // mpq_set_str accepts whitespace and bases we do not want; pre-validate
    // as [-]digits[/digits].
    std::size_t i = 0;
    if (text[i] == '-') ++i;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        ++i;
        ++digits;
    }
    if (digits == 0) return std::nullopt;
    if (i != text.size()) {
        if (text[i] != '/') return std::nullopt;
        ++i;
        std::size_t den_digits = 0;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            ++den_digits;
        }
        if (den_digits == 0 || i != text.size()) return std::nullopt;
    }
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), text.c_str(), 10) != 0) return std::nullopt;
    if (mpq_denref(q.get_mpq_t())->_mp_size == 0) return std::nullopt;  // p/0
    q.canonicalize();
    return q;
}

std::string rational_string(const Rat& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

unsigned long rat_ceil_ulong(const Rat& q) {
    if (q < 0) throw std::invalid_argument("rat_ceil_ulong: negative input");
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    if (!r.fits_ulong_p()) throw std::overflow_error("rat_ceil_ulong: result too large");
    return r.get_ui();
}

std::string to_string(const ExtRat& e) {
    return e.infinite ? "inf" : rational_string(e.value);
}

}  // namespace clw
