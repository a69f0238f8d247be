#include <doctest.h>

#include <cmath>

#include "spright/fwht.hpp"
#include "spright/peeling.hpp"

using namespace spright;

namespace {

SparseSpectrum worked_example() {
  SparseSpectrum s(4);
  s.set(BitIndex::parse("0100"), 2);
  s.set(BitIndex::parse("0110"), 4);
  s.set(BitIndex::parse("1010"), 1);
  s.set(BitIndex::parse("1111"), 1);
  return s;
}

DecodeResult noiseless_decode(const SparseSpectrum& truth, const SubsamplingPlan& plan, Rng& rng) {
  const OffsetPlan offsets = build_offsets(OffsetVariant::kNoiseless, plan, {}, std::nullopt, rng);
  NoisyAccess access(truth, 0.0, 1);
  DecodeOptions options;
  options.detector.zero_tol = 1e-9;
  return decode(observe(access, plan, offsets), plan, offsets, options);
}

}  // namespace

TEST_CASE("worked example peels completely") {
  const auto plan = plan_from_segments(4, 2, 0, {{1}, {0}}, Regime::kWindow);
  Rng rng = make_rng(1);
  const auto result = noiseless_decode(worked_example(), plan, rng);
  CHECK(result.spectrum.size() == 4);
  CHECK(verify_support(result.spectrum, worked_example()).success());
  CHECK_FALSE(verify_support(result.spectrum, worked_example()).value_mismatch);
  CHECK_FALSE(result.report.stalled);
  CHECK(result.report.residual_energy < 1e-18);
}

TEST_CASE("zero spectrum decodes to nothing in one sweep") {
  Rng rng = make_rng(2);
  const auto plan = build_plan(10, 8, {});
  const auto result = noiseless_decode(SparseSpectrum(10), plan, rng);
  CHECK(result.spectrum.empty());
  CHECK(result.report.sweeps == 1);
  CHECK(result.report.peels == 0);
}

TEST_CASE("recovered coefficients match the dense transform") {
  const int n = 10, k = 8, trials = 500;
  int sound = 0, complete = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(3, static_cast<std::uint64_t>(t));
    const auto truth = draw_spectrum(n, k, 1.0, rng);
    const auto plan = build_plan(n, k, {.profile = PlanProfile::kBenchmark});
    const auto result = noiseless_decode(truth, plan, rng);
    const DenseSignal dense = naive_wht(fwht(densify(truth)));
    bool ok = true;
    for (const auto& [idx, v] : result.spectrum.entries()) ok = ok && std::abs(dense.values[idx] - v) < 1e-9;
    sound += ok;
    complete += verify_support(result.spectrum, truth).success();
  }
  CHECK(sound >= 0.99 * trials);
  // B = K = 8 with three groups: ideal peeling finishes about 94% of the time.
  CHECK(complete >= 0.80 * trials);
}

TEST_CASE("peeling conserves energy and is deterministic") {
  Rng rng = make_rng(4);
  const auto truth = draw_spectrum(12, 20, 1.0, rng);
  const auto plan = build_plan(12, 20, {});
  const OffsetPlan offsets = build_offsets(OffsetVariant::kNso, plan, default_offset_params(OffsetVariant::kNso, 12),
                                           std::nullopt, rng);
  const double snr = db_to_linear(15.0);
  const double sigma = sigma_for_snr(1.0, 20, 4096, snr);
  NoisyAccess access(truth, sigma, 5);
  const BinObservations obs = observe(access, plan, offsets);
  DecodeOptions options;
  options.detector = make_detector_config(12, plan.b, 1.0, sigma, snr);

  const auto first = decode(obs, plan, offsets, options);
  const auto second = decode(obs, plan, offsets, options);
  CHECK(first.spectrum == second.spectrum);
  CHECK(first.report.peels == second.report.peels);

  // Subtracting the recovered spectrum from fresh observations leaves the reported residual.
  NoisyAccess again(truth, sigma, 5);
  BinObservations residual = observe(again, plan, offsets);
  SparseSpectrum negated(12);
  for (const auto& [k, v] : first.spectrum.entries()) negated.set(BitIndex(k, 12), -v);
  NoisyAccess correction(negated, 0.0, 0);
  const BinObservations delta = observe(correction, plan, offsets);
  for (std::size_t i = 0; i < residual.data.size(); ++i) residual.data[i] += delta.data[i];
  CHECK(residual_energy(residual) == doctest::Approx(first.report.residual_energy).epsilon(1e-6));

  // Decoding the residual again finds nothing more.
  const auto rest = decode(residual, plan, offsets, options);
  CHECK(rest.spectrum.empty());
}

TEST_CASE("support verification") {
  SparseSpectrum a(4), b(4);
  a.set(BitIndex::parse("0100"), 2);
  b.set(BitIndex::parse("0100"), 2.5);
  const auto check = verify_support(a, b);
  CHECK(check.support_equal);
  CHECK(check.value_mismatch);
  b.set(BitIndex::parse("1000"), 1);
  CHECK_FALSE(verify_support(a, b).success());
  CHECK(default_max_sweeps(10) == 30);
}

TEST_CASE("report serializes") {
  DecodeReport r;
  r.sweeps = 3;
  r.stalled = true;
  const auto j = to_json(r);
  CHECK(j.at("sweeps") == 3);
  CHECK(j.at("stalled") == true);
}
