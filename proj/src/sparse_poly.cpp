#include "fewnomial/sparse_poly.hpp"

#include <cctype>
#include <charconv>

namespace fewnomial {

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::uint64_t parse_exponent(const std::string& raw) {
  std::string s = strip(raw);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(ErrorCode::ParseError, "bad exponent '" + raw + "'");
  }
  return v;
}

}  // namespace

Poly parse_poly(const std::string& text) {
  std::vector<Term<Rational>> terms;
  std::string body = strip(text);
  if (body.empty() || body == "0") return {};
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t semi = body.find(';', start);
    std::string item = body.substr(start, semi == std::string::npos ? std::string::npos : semi - start);
    if (!strip(item).empty()) {
      std::size_t comma = item.find(',');
      if (comma == std::string::npos || item.find(',', comma + 1) != std::string::npos) {
        fail(ErrorCode::ParseError, "term '" + strip(item) + "' is not 'coeff,exp'");
      }
      mpq_class c = parse_rational(item.substr(0, comma));
      std::uint64_t e = parse_exponent(item.substr(comma + 1));
      for (const auto& t : terms) {
        if (t.exp == e) fail(ErrorCode::ParseError, "exponent " + std::to_string(e) + " repeated");
      }
      terms.push_back({Rational(c), e});
    } else if (semi != std::string::npos) {
      fail(ErrorCode::ParseError, "empty term in '" + text + "'");
    }
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return Poly::from_terms(std::move(terms));
}

std::string format_poly(const Poly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& t : f.terms()) {
    if (!out.empty()) out += ';';
    out += t.coeff.value().get_str();
    out += ',';
    out += std::to_string(t.exp);
  }
  return out;
}

}  // namespace fewnomial
