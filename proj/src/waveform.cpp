#include "floqs/waveform.hpp"

#include <cmath>
#include <numbers>

namespace floqs {

Waveform Waveform::constant(double value) {
  Waveform w;
  w.kind = Kind::constant;
  w.offset = value;
  return w;
}

Waveform Waveform::cosine(double amplitude, double frequency, double phase) {
  if (frequency <= 0) throw InvalidInput("Waveform::cosine: frequency must be positive");
  Waveform w;
  w.kind = Kind::cosine;
  w.amplitude = amplitude;
  w.frequency = frequency;
  w.phase = phase;
  return w;
}

Waveform Waveform::offset_cosine(double amplitude, double frequency, double phase) {
  Waveform w = cosine(amplitude, frequency, phase);
  w.kind = Kind::offset_cosine;
  w.offset = amplitude;
  return w;
}

double Waveform::value(double t) const {
  if (kind == Kind::constant) return offset;
  return offset + amplitude * std::cos(frequency * t + phase);
}

double Waveform::antiderivative(double t) const {
  if (kind == Kind::constant) return offset * t;
  return offset * t +
         amplitude / frequency * (std::sin(frequency * t + phase) - std::sin(phase));
}

double Waveform::period() const {
  if (kind == Kind::constant)
    throw InvalidInput("Waveform::period: constant waveform has no period");
  return 2.0 * std::numbers::pi / frequency;
}

std::string to_string(Waveform::Kind kind) {
  switch (kind) {
    case Waveform::Kind::constant: return "constant";
    case Waveform::Kind::cosine: return "cosine";
    case Waveform::Kind::offset_cosine: return "offset_cosine";
  }
  return "?";
}

TrigPoly TrigPoly::from(const Waveform& w) {
  TrigPoly p(w.offset);
  if (w.kind != Waveform::Kind::constant && w.amplitude != 0.0)
    p.add_term(w.amplitude, w.frequency, w.phase);
  return p;
}

void TrigPoly::add_term(double amplitude, double frequency, double phase) {
  if (amplitude == 0.0) return;
  if (frequency < 0) {  // cos is even
    frequency = -frequency;
    phase = -phase;
  }
  if (frequency == 0.0) {
    constant_ += amplitude * std::cos(phase);
    return;
  }
  // normalize phase to (-pi, pi] and merge with an existing matching term
  phase = std::remainder(phase, 2.0 * std::numbers::pi);
  for (auto& term : terms_) {
    if (std::abs(term.frequency - frequency) < 1e-12 * frequency) {
      // combine a1 cos(wt+p1) + a2 cos(wt+p2)
      const double x = term.amplitude * std::cos(term.phase) + amplitude * std::cos(phase);
      const double y = term.amplitude * std::sin(term.phase) + amplitude * std::sin(phase);
      term.amplitude = std::hypot(x, y);
      term.phase = (term.amplitude == 0.0) ? 0.0 : std::atan2(y, x);
      return;
    }
  }
  terms_.push_back({amplitude, frequency, phase});
}

double TrigPoly::value(double t) const {
  double v = constant_;
  for (const auto& term : terms_)
    v += term.amplitude * std::cos(term.frequency * t + term.phase);
  return v;
}

double TrigPoly::antiderivative(double t) const {
  double v = constant_ * t;
  for (const auto& term : terms_)
    v += term.amplitude / term.frequency *
         (std::sin(term.frequency * t + term.phase) - std::sin(term.phase));
  return v;
}

TrigPoly TrigPoly::tilde() const {
  TrigPoly p;
  p.terms_ = terms_;
  return p;
}

TrigPoly TrigPoly::operator*(double s) const {
  TrigPoly p(constant_ * s);
  for (const auto& term : terms_) p.add_term(term.amplitude * s, term.frequency, term.phase);
  return p;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const {
  TrigPoly p(constant_ + other.constant_);
  for (const auto& term : terms_) p.add_term(term.amplitude, term.frequency, term.phase);
  for (const auto& term : other.terms_) p.add_term(term.amplitude, term.frequency, term.phase);
  return p;
}

TrigPoly TrigPoly::operator*(const TrigPoly& other) const {
  TrigPoly p(constant_ * other.constant_);
  for (const auto& term : other.terms_)
    p.add_term(constant_ * term.amplitude, term.frequency, term.phase);
  for (const auto& term : terms_)
    p.add_term(other.constant_ * term.amplitude, term.frequency, term.phase);
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      // cos A cos B = (cos(A-B) + cos(A+B))/2
      const double half = 0.5 * a.amplitude * b.amplitude;
      p.add_term(half, a.frequency - b.frequency, a.phase - b.phase);
      p.add_term(half, a.frequency + b.frequency, a.phase + b.phase);
    }
  }
  return p;
}

}  // namespace floqs
