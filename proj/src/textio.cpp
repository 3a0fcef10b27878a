#include "modsurf/textio.hpp"

#include <charconv>

namespace modsurf {

namespace {

std::optional<double> real_part(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> imag_coeff(std::string_view s) {
  if (s == "" || s == "+") return 1.0;
  if (s == "-") return -1.0;
  return real_part(s);
}

}  // namespace

std::optional<cplx> parse_complex(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.back() != 'i') {
    const auto re = real_part(text);
    return re ? std::optional<cplx>(cplx(*re, 0.0)) : std::nullopt;
  }
  text.remove_suffix(1);
  // Split at the last sign that is not the leading one or an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    const auto im = imag_coeff(text);
    return im ? std::optional<cplx>(cplx(0.0, *im)) : std::nullopt;
  }
  const auto re = real_part(text.substr(0, split));
  const auto im = imag_coeff(text.substr(split));
  if (!re || !im) return std::nullopt;
  return cplx(*re, *im);
}

std::string format_complex(cplx z) {
  // Adding +0.0 turns a negative zero into a positive one.
  std::string s = format_real(z.real() + 0.0);
  const std::string im = format_real(z.imag() + 0.0);
  if (im.front() != '-') s += '+';
  return s + im + "i";
}

}  // namespace modsurf
