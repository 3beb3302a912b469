#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "tailsitter/config.hpp"
#include "tailsitter/error.hpp"
#include "tailsitter/sysid.hpp"

using namespace tailsitter;
using namespace tailsitter::sysid;

namespace {

const VehicleParams kParams;

double truth(Constant c) {
  switch (c) {
    case Constant::kThrust: return kParams.k_thrust;
    case Constant::kMoment: return kParams.k_moment;
    case Constant::kLift: return kParams.k_lift;
    case Constant::kDrag: return kParams.k_drag;
    case Constant::kPitch: return kParams.k_pitch;
  }
  return 0.0;
}

std::vector<StaticTestRecord> fixture(double noise, std::uint64_t seed = 7, Side side = Side::kLeft) {
  return generate_synthetic(kParams, default_omega_grid(), default_delta_grid(), NoiseSpec{noise}, seed, side);
}

}  // namespace

TEST(Synthetic, GridCardinalityAndExactness) {
  const auto records = fixture(0.0);
  ASSERT_EQ(records.size(), 54U);
  EXPECT_EQ(records.front().omega, 300.0);
  EXPECT_EQ(records.back().omega, 790.0);
  for (const auto& r : records) {
    const Wrench w = prop_wrench(r.omega, Side::kLeft, kParams) + aero_wrench(r.omega, r.delta, kParams);
    EXPECT_EQ(r.force, w.force);
    EXPECT_EQ(r.torque, w.torque);
  }
}

TEST(Synthetic, SeedReproducible) {
  const auto a = fixture(0.05, 3);
  const auto b = fixture(0.05, 3);
  const auto c = fixture(0.05, 4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].force, b[i].force);
    EXPECT_EQ(a[i].torque, b[i].torque);
  }
  EXPECT_NE(a[10].force, c[10].force);
}

TEST(Fit, NoiselessRoundTrip) {
  const FitResult fit = fit_params(fixture(0.0));
  EXPECT_TRUE(fit.unidentified().empty());
  for (Constant c : kAllConstants) {
    EXPECT_NEAR(fit[c].value / truth(c), 1.0, 1e-9) << constant_key(c);
    EXPECT_LT(fit[c].residual_rms, 1e-12);
  }
}

TEST(Fit, RightSideUnit) {
  FitOptions options;
  options.reaction_sign = -1.0;
  const FitResult fit = fit_params(fixture(0.0, 7, Side::kRight), options);
  EXPECT_NEAR(fit[Constant::kMoment].value / kParams.k_moment, 1.0, 1e-9);
}

TEST(Fit, FivePercentNoise) {
  const FitResult fit = fit_params(fixture(0.05, 2024));
  for (Constant c : kAllConstants) {
    EXPECT_NEAR(fit[c].value / truth(c), 1.0, 0.05) << constant_key(c);
    EXPECT_GT(fit[c].std_error, 0.0) << constant_key(c);
  }
}

TEST(Fit, ResidualGrowsWithNoise) {
  double previous = -1.0;
  for (double noise : {0.0, 0.01, 0.03, 0.1}) {
    const double r = fit_params(fixture(noise, 5))[Constant::kThrust].residual_rms;
    EXPECT_GT(r, previous);
    previous = r;
  }
}

TEST(Fit, RecordOrderDoesNotMatter) {
  auto records = fixture(0.05, 9);
  const FitResult a = fit_params(records);
  std::mt19937_64 rng(1);
  std::shuffle(records.begin(), records.end(), rng);
  const FitResult b = fit_params(records);
  for (Constant c : kAllConstants) EXPECT_NEAR(a[c].value / b[c].value, 1.0, 1e-12);
}

TEST(Fit, ZeroDeflectionOnly) {
  const auto records = generate_synthetic(kParams, default_omega_grid(), {0.0}, NoiseSpec{}, 1);
  const FitResult fit = fit_params(records);
  EXPECT_NEAR(fit[Constant::kThrust].value / kParams.k_thrust, 1.0, 1e-9);
  EXPECT_NEAR(fit[Constant::kMoment].value / kParams.k_moment, 1.0, 1e-9);
  const auto missing = fit.unidentified();
  EXPECT_EQ(missing, (std::vector<Constant>{Constant::kLift, Constant::kDrag, Constant::kPitch}));
  try {
    fit.require_complete();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kInsufficientExcitation);
    EXPECT_NE(std::string(e.what()).find("k_l"), std::string::npos);
  }
}

TEST(Fit, NeedsTwoSpeeds) {
  const auto records = generate_synthetic(kParams, {500.0}, default_delta_grid(), NoiseSpec{}, 1);
  try {
    fit_params(records);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kInsufficientExcitation);
  }
}

TEST(Fit, InterceptReportsBias) {
  auto records = fixture(0.0);
  for (auto& r : records) r.force.z() += 0.02;
  FitOptions options;
  options.intercept = true;
  const FitResult fit = fit_params(records, options);
  EXPECT_NEAR(fit[Constant::kThrust].value / kParams.k_thrust, 1.0, 1e-9);
  EXPECT_NEAR(fit[Constant::kThrust].bias, 0.02, 1e-12);
}

TEST(Csv, RoundTrip) {
  const auto records = fixture(0.05, 1);
  std::stringstream buffer;
  write_csv(buffer, records);
  std::string header;
  std::getline(std::stringstream(buffer.str()), header);
  EXPECT_EQ(header, kCsvHeader);
  const auto back = read_csv(buffer);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(back[i].omega, records[i].omega);
    EXPECT_EQ(back[i].delta, records[i].delta);
    EXPECT_EQ(back[i].force, records[i].force);
    EXPECT_EQ(back[i].torque, records[i].torque);
  }
}

TEST(Csv, MalformedRowIsIoError) {
  std::stringstream in(std::string(kCsvHeader) + "\n1, 2, 3\n");
  try {
    read_csv(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kIo);
  }
  std::stringstream bad_header("a,b\n");
  EXPECT_THROW(read_csv(bad_header), Error);
}

TEST(ParamFile, LoadsAsConfigOverlay) {
  std::stringstream out;
  write_param_file(out, fit_params(fixture(0.0)));
  const KeyValues values = parse_key_values(out, "fit");
  EXPECT_EQ(values.size(), 5U);
  const Config c = apply_key_values(values, Config{}, false);
  EXPECT_NEAR(c.vehicle.k_pitch / kParams.k_pitch, 1.0, 1e-9);
  EXPECT_NEAR(c.vehicle.k_drag / kParams.k_drag, 1.0, 1e-9);
}
