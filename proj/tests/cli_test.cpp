#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "projcoords/commands.hpp"
#include "support/sampling.hpp"

using namespace projcoords;
using namespace projcoords::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kSamples = PROJCOORDS_SAMPLES_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("projcoords_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }
  static std::string sample(const std::string& name) {
    return (kSamples / name).string();
  }

  std::string write_json(const std::string& name, const json& j) const {
    std::ofstream(tmp(name)) << j.dump(2);
    return tmp(name);
  }

  static json read_json(const std::string& path) {
    std::ifstream in(path);
    return json::parse(in);
  }

  std::ostringstream out, err;
  fs::path dir_;
};

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_F(CliTest, ConvertPantsToBd) {
  ASSERT_EQ(cmd_convert(sample("pants.goldman.json"), CoordinateSystem::BD,
                        tmp("p.bd.json"), out, err),
            kExitOk);
  const json j = read_json(tmp("p.bd.json"));
  EXPECT_EQ(j["system"], "bd");
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(j["values"]["pants"]["P"]["sigma1"][k].get<double>(), -0.8047190, 1e-7);
    EXPECT_NEAR(j["values"]["pants"]["P"]["sigma2"][k].get<double>(), -0.8047190, 1e-7);
  }
  EXPECT_NEAR(j["values"]["pants"]["P"]["tau_plus"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(j["values"]["pants"]["P"]["tau_minus"].get<double>(), 0.0, 1e-12);
}

TEST_F(CliTest, ConvertTwiceRestoresValues) {
  for (const char* name : {"pants", "torus", "genus2"}) {
    const std::string src = sample(std::string(name) + ".goldman.json");
    ASSERT_EQ(cmd_convert(src, CoordinateSystem::BD, tmp("a.json"), out, err), kExitOk);
    ASSERT_EQ(cmd_convert(tmp("a.json"), CoordinateSystem::Goldman, tmp("b.json"), out, err),
              kExitOk);
    const json a = read_json(src)["values"], b = read_json(tmp("b.json"))["values"];
    for (const auto& section : {"curves", "pants"}) {
      for (const auto& [key, entry] : a[section].items()) {
        for (const auto& [field, value] : entry.items()) {
          EXPECT_NEAR(b[section][key][field].get<double>(), value.get<double>(), 1e-10)
              << name << " " << key << "." << field;
        }
      }
    }
  }
}

TEST_F(CliTest, ConvertWindowViolationExits3) {
  json j = read_json(sample("torus.goldman.json"));
  j["values"]["curves"]["D"] = {{"lambda", 0.2}, {"tau", 4.0}};
  const int code = cmd_convert(write_json("bad.json", j), CoordinateSystem::BD,
                               tmp("out.json"), out, err);
  EXPECT_EQ(code, kExitDomain);
  EXPECT_NE(err.str().find("window"), std::string::npos);
  EXPECT_NE(err.str().find("'D'"), std::string::npos);
  EXPECT_FALSE(fs::exists(tmp("out.json")));
}

TEST_F(CliTest, ConvertParseErrorsExit2) {
  std::ofstream(tmp("broken.json")) << "{";
  EXPECT_EQ(cmd_convert(tmp("broken.json"), CoordinateSystem::BD, tmp("o.json"), out, err),
            kExitParse);
  EXPECT_EQ(cmd_convert(tmp("missing.json"), CoordinateSystem::BD, tmp("o.json"), out, err),
            kExitParse);
}

TEST_F(CliTest, ConvertClosureViolationExits3) {
  json j = read_json(sample("genus2.bd.json"));
  j["values"]["pants"]["Q"]["sigma1"][0] = j["values"]["pants"]["Q"]["sigma1"][0].get<double>() + 0.5;
  EXPECT_EQ(cmd_convert(write_json("c.json", j), CoordinateSystem::Goldman, tmp("o.json"),
                        out, err),
            kExitDomain);
  EXPECT_NE(err.str().find("ClosureViolation"), std::string::npos);
  EXPECT_NE(err.str().find("'C2'"), std::string::npos);
}

TEST_F(CliTest, ValidateSamples) {
  for (const char* name : {"pants.goldman.json", "pants.bd.json", "torus.goldman.json",
                           "torus.bd.json", "genus2.goldman.json", "genus2.bd.json"}) {
    std::ostringstream o;
    EXPECT_EQ(cmd_validate(sample(name), o, err), kExitOk) << name << "\n" << o.str();
    EXPECT_EQ(count(o.str(), "FAIL"), 0u);
  }
}

TEST_F(CliTest, ValidatePerturbedClosureNamesCurve) {
  json j = read_json(sample("torus.bd.json"));
  j["values"]["pants"]["P"]["sigma2"][0] = j["values"]["pants"]["P"]["sigma2"][0].get<double>() - 0.5;
  EXPECT_EQ(cmd_validate(write_json("v.json", j), out, err), kExitCheckFailed);
  EXPECT_NE(out.str().find("FAIL closure curve 'C'"), std::string::npos) << out.str();
}

TEST_F(CliTest, ValidateZeroPantsCitesLengths) {
  json j = read_json(sample("pants.bd.json"));
  j["values"]["pants"]["P"] = {{"sigma1", {0, 0, 0}}, {"sigma2", {0, 0, 0}},
                               {"tau_plus", 0}, {"tau_minus", 0}};
  EXPECT_EQ(cmd_validate(write_json("z.json", j), out, err), kExitCheckFailed);
  EXPECT_NE(out.str().find("FAIL length positivity pants 'P'"), std::string::npos);
}

TEST_F(CliTest, ValidateGoldmanWindowFailure) {
  json j = read_json(sample("pants.goldman.json"));
  j["values"]["curves"]["A2"]["tau"] = 4.0;
  EXPECT_EQ(cmd_validate(write_json("w.json", j), out, err), kExitCheckFailed);
  EXPECT_NE(out.str().find("FAIL window curve 'A2'"), std::string::npos);
}

TEST_F(CliTest, OracleSamples) {
  for (const char* name : {"pants.bd.json", "torus.bd.json", "genus2.goldman.json"}) {
    std::ostringstream o;
    EXPECT_EQ(cmd_oracle(sample(name), true, o, err), kExitOk) << o.str();
    EXPECT_NE(o.str().find("monodromy"), std::string::npos);
    EXPECT_EQ(count(o.str(), "FAIL"), 0u);
  }
}

TEST_F(CliTest, OracleSymmetricResidualsTiny) {
  ASSERT_EQ(cmd_oracle(sample("pants.bd.json"), false, out, err), kExitOk);
  // Every residual printed in the table is below 1e-12.
  const std::regex number(R"(([0-9]\.[0-9]+)e([-+][0-9]+))");
  const std::string text = out.str();
  std::size_t seen = 0;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), number);
       it != std::sregex_iterator(); ++it, ++seen) {
    EXPECT_LE(std::stod((*it)[0]), 1e-12);
  }
  EXPECT_EQ(seen, 3u);
}

TEST_F(CliTest, OracleRandomFileAndInvalidDomain) {
  projcoords::testing::Rng rng(projcoords::testing::kSeed + 50);
  json j = read_json(sample("pants.bd.json"));
  const FGPants f = projcoords::testing::random_fg(rng);
  j["values"]["pants"]["P"] = {{"sigma1", f.sigma1}, {"sigma2", f.sigma2},
                               {"tau_plus", f.tau_plus}, {"tau_minus", f.tau_minus}};
  EXPECT_EQ(cmd_oracle(write_json("r.json", j), true, out, err), kExitOk) << out.str();
  j["values"]["pants"]["P"]["tau_plus"] = 30.0;
  EXPECT_EQ(cmd_oracle(write_json("bad.json", j), false, out, err), kExitDomain);
  EXPECT_NE(err.str().find("'P'"), std::string::npos);
}

TEST_F(CliTest, FlowShiftsCurveShears) {
  const json before = read_json(sample("torus.bd.json"))["values"]["curves"]["C"];
  ASSERT_EQ(cmd_flow(sample("torus.bd.json"), "C", 1.0, std::nullopt, tmp("t.json"), out, err),
            kExitOk);
  const json twisted = read_json(tmp("t.json"))["values"]["curves"]["C"];
  EXPECT_NEAR(twisted["sigma1_C"].get<double>(), before["sigma1_C"].get<double>() + 1.0, 1e-15);
  EXPECT_NEAR(twisted["sigma2_C"].get<double>(), before["sigma2_C"].get<double>() + 1.0, 1e-15);
  ASSERT_EQ(cmd_flow(sample("torus.bd.json"), "C", std::nullopt, 0.1, tmp("b.json"), out, err),
            kExitOk);
  const json bulged = read_json(tmp("b.json"))["values"]["curves"]["C"];
  EXPECT_NEAR(bulged["sigma1_C"].get<double>(), before["sigma1_C"].get<double>() - 0.3, 1e-15);
  EXPECT_NEAR(bulged["sigma2_C"].get<double>(), before["sigma2_C"].get<double>() + 0.3, 1e-15);
  // Pants data untouched.
  EXPECT_EQ(read_json(tmp("b.json"))["values"]["pants"],
            read_json(sample("torus.bd.json"))["values"]["pants"]);
}

TEST_F(CliTest, FlowBadCurveExits4) {
  EXPECT_EQ(cmd_flow(sample("torus.bd.json"), "D", 1.0, std::nullopt, tmp("x.json"), out, err),
            kExitCurve);
  EXPECT_NE(err.str().find("'D'"), std::string::npos);
  EXPECT_EQ(cmd_flow(sample("torus.bd.json"), "Z", 1.0, std::nullopt, tmp("x.json"), out, err),
            kExitCurve);
  EXPECT_EQ(cmd_flow(sample("pants.goldman.json"), "A1", std::nullopt, 1.0, tmp("x.json"), out,
                     err),
            kExitCurve);
}

TEST_F(CliTest, FlowCommutesWithConvert) {
  const std::string src = sample("genus2.goldman.json");
  ASSERT_EQ(cmd_flow(src, "C2", 0.7, -0.15, tmp("f.json"), out, err), kExitOk);
  ASSERT_EQ(cmd_convert(tmp("f.json"), CoordinateSystem::BD, tmp("fc.json"), out, err), kExitOk);
  ASSERT_EQ(cmd_convert(src, CoordinateSystem::BD, tmp("c.json"), out, err), kExitOk);
  ASSERT_EQ(cmd_flow(tmp("c.json"), "C2", 0.7, -0.15, tmp("cf.json"), out, err), kExitOk);
  const json a = read_json(tmp("fc.json"))["values"], b = read_json(tmp("cf.json"))["values"];
  for (const auto& [key, entry] : a["curves"].items()) {
    for (const auto& [field, value] : entry.items()) {
      EXPECT_NEAR(b["curves"][key][field].get<double>(), value.get<double>(), 1e-12);
    }
  }
  EXPECT_EQ(a["pants"], b["pants"]);
}

TEST_F(CliTest, RenderStructure) {
  for (const char* name : {"pants.bd.json", "genus2.goldman.json"}) {
    ASSERT_EQ(cmd_render(sample(name), std::nullopt, tmp("r.svg"), out, err), kExitOk);
    std::ifstream in(tmp("r.svg"));
    const std::string svg((std::istreambuf_iterator<char>(in)), {});
    EXPECT_EQ(count(svg, "<polygon"), 4u);
    EXPECT_EQ(count(svg, "<line"), 3u);
    EXPECT_EQ(svg.rfind("</svg>"), svg.size() - 7);
  }
  EXPECT_EQ(cmd_render(sample("genus2.bd.json"), std::string("Q"), tmp("q.svg"), out, err),
            kExitOk);
  EXPECT_EQ(cmd_render(sample("genus2.bd.json"), std::string("R"), tmp("q.svg"), out, err),
            kExitParse);
}

TEST_F(CliTest, RenderDomainViolationExits3) {
  json j = read_json(sample("pants.bd.json"));
  j["values"]["pants"]["P"]["tau_minus"] = 10.0;
  EXPECT_EQ(cmd_render(write_json("d.json", j), std::nullopt, tmp("d.svg"), out, err),
            kExitDomain);
  EXPECT_FALSE(fs::exists(tmp("d.svg")));
}

TEST(RenderGeometry, SymmetricConfigurationIsRotationInvariant) {
  FGPants f;
  f.sigma1 = {-1, -1, -1};
  f.sigma2 = {-1, -1, -1};
  const PantsFlagConfig c = config_from_fg(f);
  auto rotate = [](const Vec3& v) { return Vec3(v[2], v[0], v[1]); };
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE(projective_distance(rotate(c.outer_point(k).coords()),
                                  c.outer_point(cyc_next(k)).coords()),
              1e-15);
  }
  // Flag lines: meet points permute as well.
  EXPECT_LE(projective_distance(rotate(c.meet13()), c.meet12()), 1e-15);
  EXPECT_LE(projective_distance(rotate(c.meet12()), c.meet23()), 1e-15);
}

TEST(RenderGeometry, TrianglesAndChart) {
  FGPants f;
  f.sigma1 = {-1, -1, -1};
  f.sigma2 = {-1, -1, -1};
  const ConfigScene flat = scene_of(config_from_fg(f));
  f.tau_plus = 2.0;
  const ConfigScene tilted = scene_of(config_from_fg(f));
  // a3 and c1 scale by e^{+-2}; the Delta_1 and Delta_3 apexes move.
  EXPECT_GT((flat.triangles[1][2] - tilted.triangles[1][2]).norm(), 0.1);
  EXPECT_GT((flat.triangles[3][2] - tilted.triangles[3][2]).norm(), 0.1);
  EXPECT_EQ(flat.triangles[2][2], tilted.triangles[2][2]);
  for (const auto& tri : tilted.triangles) {
    for (const Vec3& v : tri) EXPECT_GT(v.sum(), 0.0);
  }
  const ChartPoint p = to_chart(Vec3(2, 4, 2));
  EXPECT_DOUBLE_EQ(p.x, 0.25);
  EXPECT_DOUBLE_EQ(p.y, 0.5);
  try {
    to_chart(Vec3(1, -1, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ChartFailure);
    EXPECT_EQ(exit_code_for(e.kind()), kExitChart);
  }
}

TEST(RenderGeometry, TitleIsEscaped) {
  FGPants f;
  f.sigma1 = {-1, -1, -1};
  f.sigma2 = {-1, -1, -1};
  const std::string svg = render_config_svg(config_from_fg(f), "a<b&c");
  EXPECT_NE(svg.find("a&lt;b&amp;c"), std::string::npos);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(ErrorKind::Schema), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::SlotReuse), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::WindowViolation), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::DomainViolation), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::ClosureViolation), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::UnknownCurve), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::BoundaryCurve), 4);
  EXPECT_EQ(exit_code_for(ErrorKind::ChartFailure), 5);
}
