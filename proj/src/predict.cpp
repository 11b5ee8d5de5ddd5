// Copyright 2026 The hypvol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hypvol/predict.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <regex>
#include <sstream>

#include "hypvol/geometry.hpp"

namespace hypvol {

namespace {

Real ToReal(const Integer& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

Integer Floor(const Real& x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDD);
  return z;
}

Integer Nearest(const Real& x) {
  Integer z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDN);
  return z;
}

// Real-valued precision of an MPFR number, in bits.
unsigned BitsOf(const Real& x) { return static_cast<unsigned>(mpfr_get_prec(x.backend().data())); }

Real Ulp(const Real& x, unsigned bits) {
  const Real a = abs(x);
  return a == 0 ? Real(0) : ldexp(a, -static_cast<int>(bits) + 2);
}

std::string FactorizationText(const std::vector<std::pair<Integer, int>>& f) {
  if (f.empty()) return "1";
  std::string out;
  for (const auto& [prime, exponent] : f) {
    if (!out.empty()) out += " * ";
    out += prime.get_str();
    if (exponent > 1) out += "^" + std::to_string(exponent);
  }
  return out;
}

std::vector<std::uint64_t> PrimesUpTo(int bound) {
  std::vector<std::uint64_t> primes;
  for (int p = 2; p <= bound; ++p) {
    bool prime = true;
    for (std::uint64_t d : primes) {
      if (d * d > static_cast<std::uint64_t>(p)) break;
      if (p % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(p);
  }
  return primes;
}

// All products of the given primes up to `limit`, at most `cap` of them.
std::vector<Integer> SmoothNumbers(const std::vector<std::uint64_t>& primes, const Integer& limit,
                                   std::size_t cap, bool& truncated) {
  std::vector<Integer> out;
  std::vector<std::pair<Integer, std::size_t>> stack = {{Integer(1), 0}};
  while (!stack.empty()) {
    auto [value, first] = stack.back();
    stack.pop_back();
    if (out.size() >= cap) {
      truncated = true;
      break;
    }
    out.push_back(value);
    for (std::size_t i = first; i < primes.size(); ++i) {
      Integer next = value * primes[i];
      if (next > limit) continue;
      stack.emplace_back(std::move(next), i);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string FieldName(std::int64_t delta) {
  return "Q(sqrt(" + std::to_string(delta) + "))";
}

std::string FactorExpression(const VolumePrediction& p) {
  if (p.field_case == VolumePrediction::Case::kRationalField)
    return "zeta(" + std::to_string(p.m) + ")";
  const std::int64_t d = std::llabs(p.discriminant->value);
  return std::to_string(d) + "^(" + std::to_string(p.n) + "/2) * L(" + std::to_string(p.m) +
         ", chi_" + std::to_string(p.discriminant->value) + ")";
}

}  // namespace

std::string_view PredictionCaseName(VolumePrediction::Case c) {
  return c == VolumePrediction::Case::kRationalField ? "RationalField" : "QuadraticField";
}

VolumePrediction TranscendentalFactor(int n, std::int64_t delta, const PrecisionContext& ctx) {
  if (n % 2 == 0)
    throw Error(ErrorCode::kEvenDimension,
                "n = " + std::to_string(n) +
                    " is even; there the covolume is a rational multiple of pi^(n/2) by the "
                    "generalized Gauss-Bonnet theorem");
  if (n < 5) throw Error(ErrorCode::kInvalidArgument, "the prediction needs odd n >= 5");
  VolumePrediction p;
  p.n = n;
  p.m = (n + 1) / 2;
  p.delta = delta;
  if (delta == 1) {
    p.field_case = VolumePrediction::Case::kRationalField;
    p.factor = RiemannZeta(p.m, ctx);
    return p;
  }
  p.field_case = VolumePrediction::Case::kQuadraticField;
  p.discriminant = MakeFundamentalDiscriminant(delta);
  assert(p.delta != 1 && p.discriminant->value != 1);
  const Enclosed l = DirichletL(p.m, *p.discriminant, ctx);
  const unsigned bits = std::max(ctx.bits, BitsOf(l.value));
  ScopedPrecision precision(bits);
  const Integer power = [&] {
    Integer z;
    mpz_ui_pow_ui(z.get_mpz_t(), static_cast<unsigned long>(std::llabs(p.discriminant->value)),
                  static_cast<unsigned long>(n));
    return z;
  }();
  const Real scale = sqrt(ToReal(power));  // |D|^(n/2), correctly rounded
  p.factor.value = scale * l.value;
  p.factor.error = scale * l.error + 2 * Ulp(p.factor.value, bits);
  return p;
}

std::string_view RecognitionStatusName(RecognitionStatus s) {
  switch (s) {
    case RecognitionStatus::kRecognized: return "Recognized";
    case RecognitionStatus::kRecognizedSmooth: return "RecognizedSmooth";
    case RecognitionStatus::kUnrecognized: return "Unrecognized";
  }
  return "?";
}

RationalRecognition RecognizeRational(const Real& x, const Real& err,
                                      const RecognitionOptions& options) {
  if (!(x > 0)) throw Error(ErrorCode::kInvalidArgument, "recognition needs x > 0");
  if (!(err > 0)) throw Error(ErrorCode::kInvalidArgument, "recognition needs a positive error");
  const unsigned bits = std::max(BitsOf(x), 64u);
  ScopedPrecision precision(bits);

  RationalRecognition r;
  r.error = err;
  r.max_denominator = Floor(1 / sqrt(4 * err));

  // Convergents h/k, stopping after the first one past the guard.
  struct Convergent {
    Integer h, k;
  };
  std::vector<Convergent> convergents;
  {
    Integer h2 = 0, h1 = 1, k2 = 1, k1 = 0;
    Real y = x;
    const Real noise = ldexp(Real(1), -static_cast<int>(bits) + 8);
    for (int iter = 0; iter < 100000; ++iter) {
      const Integer a = Floor(y);
      Integer h = a * h1 + h2, k = a * k1 + k2;
      h2 = h1;
      h1 = h;
      k2 = k1;
      k1 = k;
      convergents.push_back({h, k});
      if (k > r.max_denominator) break;
      const Real frac = y - ToReal(a);
      if (frac <= noise * abs(y)) break;
      y = 1 / frac;
    }
  }

  auto residual = [&](const Integer& p, const Integer& q) { return abs(x - ToReal(p) / ToReal(q)); };

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < convergents.size(); ++i) {
    const Convergent& c = convergents[i];
    if (c.k > r.max_denominator || c.h <= 0) continue;
    best = i;
    if (residual(c.h, c.k) <= err) {
      r.status = RecognitionStatus::kRecognized;
      // Any other fraction with denominator within the guard lies at least
      // 1 / (q * max_denominator) away.
      const Real gap = 1 / (ToReal(c.k) * ToReal(r.max_denominator));
      r.confidence = static_cast<double>(gap / err);
      break;
    }
  }
  if (best) {
    r.p = convergents[*best].h;
    r.q = convergents[*best].k;
  } else {
    r.p = Nearest(x);
    r.q = 1;
  }

  if (r.status == RecognitionStatus::kUnrecognized && options.smooth_bound >= 2) {
    // Each denominator q admits about 2 err q numerators within err of a
    // random x; stop once that expectation exceeds the budget.
    const std::vector<std::uint64_t> primes = PrimesUpTo(options.smooth_bound);
    const Integer limit = Floor(options.chance_budget / (2 * err)) + 1;
    bool truncated = false;
    std::vector<Integer> candidates = SmoothNumbers(primes, limit, 2000000, truncated);
    // A truncated list is not an initial segment; search nothing rather than
    // an arbitrary subset.
    if (truncated) candidates.clear();
    const Real two_err = 2 * err;
    Real expected = 0;
    for (const Integer& q : candidates) {
      expected += two_err * ToReal(q);
      if (expected > options.chance_budget) break;
      ++r.candidates_tried;
      const Integer p = Nearest(x * ToReal(q));
      if (p <= 0) continue;
      if (residual(p, q) <= err) {
        r.status = RecognitionStatus::kRecognizedSmooth;
        r.p = p;
        r.q = q;
        r.confidence = static_cast<double>(1 / expected);
        break;
      }
    }
  }

  Integer g;
  mpz_gcd(g.get_mpz_t(), r.p.get_mpz_t(), r.q.get_mpz_t());
  if (g > 1) {
    r.p /= g;
    r.q /= g;
  }
  r.residual = residual(r.p, r.q);
  r.q_factorization = Factorize(r.q);
  return r;
}

int AnalysisReport::ExitCode() const {
  if (errors.empty()) return 0;
  for (const StageError& e : errors)
    if (e.code == ErrorCode::kNotLorentzian) return 3;
  return 2;
}

std::string AnalysisReport::SuggestedIdentity() const {
  if (!recognition || !prediction || recognition->status == RecognitionStatus::kUnrecognized)
    return "";
  std::string out = "vol = " + recognition->p.get_str() + "/" + recognition->q.get_str() + " * ";
  if (prediction->field_case == VolumePrediction::Case::kRationalField) {
    out += "zeta(" + std::to_string(prediction->m) + ")";
  } else {
    const std::string m = std::to_string(prediction->m);
    out += std::to_string(std::llabs(prediction->discriminant->value)) + "^(" +
           std::to_string(prediction->n) + "/2) * zeta_l(" + m + ")/zeta(" + m + "), l = " +
           FieldName(prediction->delta);
  }
  return out;
}

namespace {

nlohmann::json Bounded(const Real& value, const Real& error, int digits) {
  return {{"value", ToString(value, digits)}, {"error", static_cast<double>(error)}};
}

nlohmann::json Bounded(double value, double error) {
  return {{"value", value}, {"error", error}};
}

nlohmann::json InertiaJson(const Inertia& s) {
  return {{"positive", s.positive}, {"negative", s.negative}, {"zero", s.zero}};
}

}  // namespace

nlohmann::json AnalysisReport::ToJson() const {
  using nlohmann::json;
  const int digits = static_cast<int>(BitsToDigits10(precision_bits)) - 4;
  json j;
  j["schema_version"] = 1;
  j["exit_code"] = ExitCode();
  j["precision_bits"] = precision_bits;
  if (diagram) {
    json edges = json::array();
    for (const DiagramEdge& e : diagram->edges())
      edges.push_back({{"i", e.i}, {"j", e.j}, {"label", e.label.ToString()}});
    j["diagram"] = {{"dimension", diagram->dimension()},
                    {"facets", diagram->facet_count()},
                    {"edges", edges},
                    {"text", diagram->ToText()}};
  }
  if (signature) {
    j["signature"] = InertiaJson(*signature);
    if (diagram)
      j["signature"]["lorentzian"] =
          IsLorentzian(*signature, diagram->dimension(), diagram->facet_count());
  }
  if (arithmeticity) {
    const ArithmeticityReport& a = *arithmeticity;
    json w = json::array();
    for (const ArithmeticityWitness& x : a.witnesses) {
      if (x.kind == ArithmeticityWitness::Kind::kNonIntegralCycle)
        w.push_back({{"kind", "NonIntegralCycle"}, {"cycle", x.cycle}, {"value", x.value.ToString()}});
      else
        w.push_back({{"kind", "IndefiniteConjugate"},
                     {"flip_primes", x.flip_primes},
                     {"inertia", InertiaJson(x.conjugate_inertia)}});
    }
    j["arithmeticity"] = {{"classification", ArithmeticityName(a.classification)},
                          {"field_generators", a.field_generators},
                          {"field_is_Q", a.field_generators.empty()},
                          {"cycle_count", a.cycle_count},
                          {"form_basis_facets", a.form.basis_facets},
                          {"witnesses", w}};
    if (a.disc_class) j["arithmeticity"]["disc_class"] = a.disc_class->get_si();
    if (a.delta) j["arithmeticity"]["delta"] = a.delta->get_si();
  }
  if (prediction) {
    const VolumePrediction& p = *prediction;
    j["prediction"] = {{"n", p.n},
                       {"m", p.m},
                       {"delta", p.delta},
                       {"case", PredictionCaseName(p.field_case)},
                       {"expression", FactorExpression(p)},
                       {"transcendental_factor", Bounded(p.factor.value, p.factor.error, digits)}};
    if (p.discriminant) {
      j["prediction"]["fundamental_discriminant"] = p.discriminant->value;
      j["prediction"]["field"] = FieldName(p.delta);
    }
  }
  if (volume) {
    j["volume"] = {{"estimate", Bounded(volume->value, volume->abs_error)},
                   {"rel_error", volume->rel_error},
                   {"samples", volume->samples},
                   {"strategy", StrategyName(volume->strategy)}};
  }
  if (assumed_volume)
    j["assumed_volume"] = Bounded(assumed_volume->value, assumed_volume->error, digits);
  if (recognition) {
    const RationalRecognition& r = *recognition;
    json f = json::array();
    for (const auto& [prime, exponent] : r.q_factorization)
      f.push_back({{"prime", prime.get_si()}, {"exponent", exponent}});
    j["recognition"] = {{"source", ratio_source},
                        {"ratio", Bounded(ratio->value, ratio->error, digits)},
                        {"status", RecognitionStatusName(r.status)},
                        {"p", r.p.get_str()},
                        {"q", r.q.get_str()},
                        {"q_factorization", f},
                        {"q_factorization_text", FactorizationText(r.q_factorization)},
                        {"residual", Bounded(r.residual, r.error, 6)},
                        {"max_denominator", r.max_denominator.get_str()},
                        {"candidates_tried", r.candidates_tried}};
    j["recognition"]["confidence"] = r.confidence;
    const std::string identity = SuggestedIdentity();
    if (!identity.empty()) j["recognition"]["suggested_identity"] = identity;
  }
  if (geometry) j["geometry"] = *geometry;
  j["notes"] = notes;
  json errs = json::array();
  for (const StageError& e : errors)
    errs.push_back({{"stage", e.stage}, {"code", ErrorCodeName(e.code)}, {"message", e.message}});
  j["errors"] = errs;
  json t = json::array();
  for (const StageTiming& s : timings) t.push_back({{"stage", s.stage}, {"seconds", s.seconds}});
  j["timings"] = t;
  return j;
}

std::string AnalysisReport::ToText() const {
  std::ostringstream out;
  const int digits = 20;
  auto row = [&](std::string_view key) -> std::ostringstream& {
    out << key;
    for (std::size_t i = key.size(); i < 16; ++i) out << ' ';
    return out;
  };
  if (diagram) row("diagram") << "n = " << diagram->dimension() << ", " << diagram->facet_count() << " facets\n";
  if (signature) {
    row("signature") << "(" << signature->positive << ", " << signature->negative << ", "
                     << signature->zero << ")";
    if (diagram && !IsLorentzian(*signature, diagram->dimension(), diagram->facet_count()))
      out << "  not Lorentzian";
    out << "\n";
  }
  if (arithmeticity) {
    const ArithmeticityReport& a = *arithmeticity;
    std::string field = "Q";
    if (!a.field_generators.empty()) {
      field = "Q(";
      bool first = true;
      for (Radicand d : a.field_generators) {
        field += (first ? "sqrt(" : ", sqrt(") + std::to_string(d) + ")";
        first = false;
      }
      field += ")";
    }
    row("field K") << field << "\n";
    row("classification") << ArithmeticityName(a.classification) << "\n";
    if (a.disc_class) row("disc class") << a.disc_class->get_str() << "\n";
    if (a.delta) row("delta") << a.delta->get_str() << "\n";
  }
  if (prediction) {
    const VolumePrediction& p = *prediction;
    if (p.discriminant)
      row("field l") << FieldName(p.delta) << ", D_l = " << p.discriminant->value << "\n";
    row("T") << FactorExpression(p) << " = " << ToString(p.factor.value, digits) << " +- "
             << ToString(p.factor.error, 2) << "\n";
  }
  if (volume)
    row("volume") << volume->value << " +- " << volume->abs_error << " ("
                  << StrategyName(volume->strategy) << ", " << volume->samples << " samples)\n";
  if (assumed_volume)
    row("assumed volume") << ToString(assumed_volume->value, digits) << " +- "
                          << ToString(assumed_volume->error, 2) << "\n";
  if (recognition) {
    const RationalRecognition& r = *recognition;
    row("vol / T") << ToString(ratio->value, digits) << " +- " << ToString(ratio->error, 2) << " ("
                   << ratio_source << ")\n";
    row("recognition") << RecognitionStatusName(r.status) << ": " << r.p.get_str() << "/"
                       << r.q.get_str() << ", q = " << FactorizationText(r.q_factorization)
                       << ", residual " << ToString(r.residual, 3) << ", confidence "
                       << r.confidence << "\n";
    const std::string identity = SuggestedIdentity();
    if (!identity.empty()) row("suggested") << identity << "  (numerical identity, unproven)\n";
  }
  for (const std::string& n : notes) row("note") << n << "\n";
  for (const StageError& e : errors) row("error") << "[" << e.stage << "] " << e.message << "\n";
  for (const StageTiming& t : timings) row("time " + t.stage) << t.seconds << " s\n";
  return out.str();
}

namespace {

bool ValidDecimal(const std::string& s) {
  static const std::regex kDecimal(R"(^\+?([0-9]+\.?[0-9]*|\.[0-9]+)([eE][-+]?[0-9]+)?$)");
  return std::regex_match(s, kDecimal);
}

// Half a unit in the last written digit of a decimal literal.
Real HalfUnitInLastPlace(const std::string& s) {
  const std::size_t e = s.find_first_of("eE");
  const std::string mantissa = s.substr(0, e);
  const long exponent = e == std::string::npos ? 0 : std::stol(s.substr(e + 1));
  const std::size_t dot = mantissa.find('.');
  const long fraction_digits =
      dot == std::string::npos ? 0 : static_cast<long>(mantissa.size() - dot - 1);
  return Real("5e" + std::to_string(exponent - fraction_digits - 1));
}

}  // namespace

AnalysisReport Analyze(std::string_view diagram_text, const AnalysisOptions& options) {
  AnalysisReport report;
  report.precision_bits = options.precision_bits;

  auto stage = [&](const char* name, auto&& body) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    try {
      body();
    } catch (const Error& e) {
      report.errors.push_back({name, e.code(), e.what()});
      ok = false;
    }
    report.timings.push_back(
        {name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    return ok;
  };

  if (options.precision_bits < 64) {
    report.errors.push_back({"input", ErrorCode::kInvalidArgument, "precision must be at least 64 bits"});
    return report;
  }
  ScopedPrecision precision(options.precision_bits);

  if (options.assume_volume) {
    stage("input", [&] {
      const std::string& v = *options.assume_volume;
      if (!ValidDecimal(v)) throw Error(ErrorCode::kInvalidArgument, "assumed volume is not a decimal: " + v);
      Enclosed a{Real(v), HalfUnitInLastPlace(v)};
      if (options.assume_error) {
        if (!ValidDecimal(*options.assume_error))
          throw Error(ErrorCode::kInvalidArgument, "assumed error is not a decimal: " + *options.assume_error);
        a.error = Real(*options.assume_error);
      }
      if (!(a.value > 0) || !(a.error > 0))
        throw Error(ErrorCode::kInvalidArgument, "assumed volume and error must be positive");
      report.assumed_volume = std::move(a);
    });
  } else if (options.assume_error) {
    report.errors.push_back({"input", ErrorCode::kInvalidArgument, "an assumed error needs an assumed volume"});
  }

  GramMatrix gram;
  const bool lorentzian = stage("coxeter", [&] {
    report.diagram = ParseDiagram(diagram_text);
    gram = BuildGramMatrix(*report.diagram);
    report.signature = Signature(gram);
    const int n = report.diagram->dimension(), facets = report.diagram->facet_count();
    if (!IsLorentzian(*report.signature, n, facets))
      throw Error(ErrorCode::kNotLorentzian,
                  "Gram signature (" + std::to_string(report.signature->positive) + ", " +
                      std::to_string(report.signature->negative) + ", " +
                      std::to_string(report.signature->zero) + "), expected (" + std::to_string(n) +
                      ", 1, " + std::to_string(facets - n - 1) + ")");
  });
  if (!lorentzian) {
    if (report.diagram) report.notes.push_back("volume integration skipped: no hyperbolic realization");
    return report;
  }
  const int n = report.diagram->dimension();

  if (stage("vinberg", [&] { report.arithmeticity = Classify(gram, n); })) {
    const ArithmeticityReport& a = *report.arithmeticity;
    if (a.classification == Arithmeticity::kNotQuasiArithmetic) {
      report.notes.push_back("no volume prediction: the group is not quasi-arithmetic");
    } else if (!a.field_generators.empty()) {
      report.notes.push_back("no volume prediction: the field of definition is not Q");
    } else if (n % 2 == 0 || n < 5) {
      try {
        TranscendentalFactor(n, 1);
      } catch (const Error& e) {
        report.notes.push_back(std::string("no volume prediction: ") + e.what());
      }
    } else {
      stage("lfunc", [&] {
        PrecisionContext ctx;
        ctx.bits = options.precision_bits;
        ctx.target_error = std::ldexp(1.0, -static_cast<int>(options.precision_bits) + 8);
        report.prediction = TranscendentalFactor(n, a.delta->get_si(), ctx);
      });
    }
  }

  std::optional<KleinPolytope> klein;
  if (options.integrate || options.dump_geometry) {
    stage("geometry", [&] {
      PolytopeRealization r = Realize(gram, n, options.precision_bits);
      EnumerateVertices(r);
      KleinPolytope k = ToKlein(r);
      if (options.dump_geometry) report.geometry = GeometryToJson(r, k);
      klein = std::move(k);
    });
  }
  if (options.integrate && klein) {
    stage("volume", [&] {
      VolumeOptions v;
      v.target_rel_error = options.target_rel_error;
      v.seed = options.seed;
      v.max_samples = options.max_samples;
      v.threads = options.threads;
      report.volume = PolytopeVolume(*klein, v);
      if (report.volume->rel_error > options.target_rel_error)
        report.notes.push_back("volume target error not reached within the sample cap");
    });
  }

  if (report.volume && report.assumed_volume) {
    const double diff = std::abs(report.volume->value - static_cast<double>(report.assumed_volume->value));
    std::ostringstream s;
    s << "integrated volume differs from the assumed one by " << diff << " (reported bound "
      << report.volume->abs_error << ")";
    report.notes.push_back(s.str());
  }

  if (report.prediction) {
    std::optional<Enclosed> source;
    if (report.assumed_volume) {
      source = report.assumed_volume;
      report.ratio_source = "assumed";
    } else if (report.volume) {
      source = Enclosed{Real(report.volume->value), Real(report.volume->abs_error)};
      report.ratio_source = "integrated";
    }
    if (!source) {
      report.notes.push_back("no recognition: no volume available");
    } else {
      stage("recognize", [&] {
        const Enclosed& t = report.prediction->factor;
        if (!(t.value > t.error)) throw Error(ErrorCode::kPrecisionExhausted, "transcendental factor not separated from zero");
        const Real x = source->value / t.value;
        const Real err = (source->error + abs(x) * t.error) / (t.value - t.error) + Ulp(x, options.precision_bits);
        report.ratio = Enclosed{x, err};
        RecognitionOptions r;
        r.smooth_bound = options.smooth_bound < 0 ? n + 2 : options.smooth_bound;
        report.recognition = RecognizeRational(x, err, r);
        if (report.recognition->status == RecognitionStatus::kRecognizedSmooth)
          report.notes.push_back(
              "denominator exceeds the continued-fraction guard; accepted from the smooth-denominator "
              "search, see confidence");
      });
    }
  }
  return report;
}

}  // namespace hypvol
