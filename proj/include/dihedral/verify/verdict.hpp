#ifndef DIHEDRAL_VERIFY_VERDICT_HPP
#define DIHEDRAL_VERIFY_VERDICT_HPP

#include <string>
#include <utility>

namespace dihedral::verify {

/// Inequality outcome against a discretization band. Never a bare bool.
enum class Verdict { Satisfied, WithinBand, Violated };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::WithinBand: return "within-band";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

/// Verdict on "margin >= 0" given an error band.
inline Verdict judge(double margin, double band) {
  if (margin > band) return Verdict::Satisfied;
  if (margin >= -band) return Verdict::WithinBand;
  return Verdict::Violated;
}

struct HypothesisCheck {
  std::string name;
  double margin = 0.0;  ///< worst pointwise margin; >= 0 means the hypothesis holds
  double band = 0.0;
  Verdict verdict = Verdict::Satisfied;
};

inline HypothesisCheck make_check(std::string name, double margin, double band) {
  return {std::move(name), margin, band, judge(margin, band)};
}

}  // namespace dihedral::verify

#endif  // DIHEDRAL_VERIFY_VERDICT_HPP
