#include "genuslab/rational.hpp"

#include <cctype>

#include "genuslab/error.hpp"

namespace genuslab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::IncompatibleOffsets: return "IncompatibleOffsets";
    case ErrorCode::InvalidOffset: return "InvalidOffset";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NeedMoreOrder: return "NeedMoreOrder";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::NotACharacteristicClass: return "NotACharacteristicClass";
    case ErrorCode::MissingPairing: return "MissingPairing";
    case ErrorCode::InconsistentTable: return "InconsistentTable";
    case ErrorCode::OddWeightSum: return "OddWeightSum";
    case ErrorCode::NoFixedPoints: return "NoFixedPoints";
    case ErrorCode::RequiresP1Zero: return "RequiresP1Zero";
    case ErrorCode::CapacityExceeded: return "CapacityExceeded";
    case ErrorCode::UnknownMode: return "UnknownMode";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::ParityMismatch: return "ParityMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidStructureConstants: return "InvalidStructureConstants";
    case ErrorCode::SpectralObstruction: return "SpectralObstruction";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Rational parse_rational(std::string_view text) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  std::string s(text.substr(b, e - b));
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  if (s.front() == '+') s.erase(0, 1);
  // GMP accepts bases/prefixes we do not want ("0x..."), so validate first.
  bool seen_slash = false;
  bool digit_before = false;
  bool digit_after = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    char c = s[k];
    if (c == '-' && k == 0) continue;
    if (c == '/' && !seen_slash) {
      seen_slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
    }
    (seen_slash ? digit_after : digit_before) = true;
  }
  if (!digit_before || (seen_slash && !digit_after)) {
    throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
  }
  Rational q;
  if (q.set_str(s, 10) != 0) throw Error(ErrorCode::ParseError, "not a rational: '" + s + "'");
  if (seen_slash && q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& value) { return value.get_str(); }

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  if (sgn(re_) == 0 && sgn(o.re_) == 0) {
    re_ = -(im_ * o.im_);
    im_ = 0;
    return *this;
  }
  if (sgn(im_) == 0) {
    im_ = re_ * o.im_;
    re_ *= o.re_;
    return *this;
  }
  if (sgn(o.im_) == 0) {
    re_ *= o.re_;
    im_ *= o.re_;
    return *this;
  }
  Rational re = re_ * o.re_ - im_ * o.im_;
  Rational im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw std::domain_error("GaussianRational division by zero");
  Rational n = o.norm();
  *this *= o.conj();
  re_ /= n;
  im_ /= n;
  return *this;
}

std::string GaussianRational::str() const {
  if (sgn(im_) == 0) return to_string(re_);
  std::string im = (im_ == 1) ? "i" : (im_ == -1) ? "-i" : to_string(im_) + "i";
  if (sgn(re_) == 0) return im;
  if (im.front() == '-') return to_string(re_) + im;
  return to_string(re_) + "+" + im;
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

}  // namespace genuslab
