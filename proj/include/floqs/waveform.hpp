#pragma once

#include <string>
#include <vector>

#include "floqs/types.hpp"

namespace floqs {

/// User-facing modulation of a single model parameter:
/// value(t) = offset + amplitude * cos(frequency * t + phase).
class Waveform {
 public:
  enum class Kind { constant, cosine, offset_cosine };

  static Waveform constant(double value);
  static Waveform cosine(double amplitude, double frequency, double phase = 0.0);
  /// amplitude * (1 + cos(frequency t + phase))
  static Waveform offset_cosine(double amplitude, double frequency,
                                double phase = 0.0);

  double value(double t) const;
  double antiderivative(double t) const;  // zero at t = 0
  bool is_constant() const { return kind == Kind::constant; }
  /// 2*pi/frequency; throws for constant waveforms.
  double period() const;

  Kind kind = Kind::constant;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  double offset = 0.0;
};

std::string to_string(Waveform::Kind kind);

/// Real trigonometric polynomial c0 + sum_k a_k cos(w_k t + p_k); closed under
/// products, which is what turns waveforms into generator coefficients
/// (e.g. rates proportional to the square of a coupling).
class TrigPoly {
 public:
  struct Term {
    double amplitude;
    double frequency;  // > 0
    double phase;
  };

  TrigPoly() = default;
  explicit TrigPoly(double constant) : constant_(constant) {}
  static TrigPoly from(const Waveform& w);

  double value(double t) const;
  double antiderivative(double t) const;  // zero at t = 0
  double mean() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }
  /// Zero-mean part.
  TrigPoly tilde() const;

  TrigPoly operator*(const TrigPoly& other) const;
  TrigPoly operator*(double s) const;
  TrigPoly operator+(const TrigPoly& other) const;

  double constant_part() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  void add_term(double amplitude, double frequency, double phase);

 private:
  double constant_ = 0.0;
  std::vector<Term> terms_;
};

}  // namespace floqs
