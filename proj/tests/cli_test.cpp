#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_app.hpp"
#include "test_util.hpp"

using namespace zstab;
using zt::Q;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "zstab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

io::Json json_of(const Run& r) { return io::Json::parse(r.out); }

}  // namespace

TEST(RoundTrip, Functions) {
  const std::vector<RealFunc> fs{
      cubic(Q(1, 64)),
      plateau(9),
      spike_sum({{Q(1, 4), Q(1, 8), Q(1, 2)}, {Q(3, 4), Q(1, 8), Q(-7, 8)}}),
      RealFunc::join(linear_half(), RealFunc::polynomial(Polynomial({Q(-1, 2), Q(1)}), {Q(1), Q(2)})),
      derivative(plateau(3)),
  };
  for (const auto& f : fs) {
    const io::Json j = io::to_json(f);
    const RealFunc g = io::function_from(j);
    EXPECT_TRUE(g == f) << j.dump();
    EXPECT_EQ(io::to_json(g).dump(), j.dump());
  }
  EXPECT_EQ(io::to_json(cubic(0))["variant"], "polynomial");
}

TEST(RoundTrip, ModuliWitnessesCertificates) {
  const std::vector<Modulus> ms{
      Modulus::uniform(FormulaModulus{Q(3, 2), 2}),
      Modulus::pointwise(TableModulus{{{Q(1, 8), Q(1, 64)}, {Q(1, 4), Q(1, 32)}}}, Q(1, 3)),
      certified_modulus(plateau(5), LocatedZeroSet::finite({Q(1)}), {Q(1, 8), Q(1, 4)}, pow2(-20)),
  };
  for (const auto& M : ms) {
    const auto back = io::modulus_from(io::to_json(M));
    EXPECT_TRUE(back.rep() == M.rep());
    EXPECT_EQ(back.at(), M.at());
  }
  const FalsificationWitness w{Q(1, 4), pow2(-10), Q(3, 4), pow2(-9), Q(1, 4)};
  EXPECT_EQ(io::witness_from(io::to_json(w)), w);
  EXPECT_EQ(io::to_json(w).dump(), R"({"x":"1/4","fx_abs":"1/1024","dist_lower":"3/4","delta":"1/512","eps":"1/4"})");

  const auto cert = uniform_modulus(cubic(0), LocatedZeroSet::finite({Q(0), Q(1, 2)}), Q(1, 4), pow2(-20));
  EXPECT_TRUE(io::same_certificate(io::certificate_from(io::to_json(cert)), cert));
  const auto vac = uniform_modulus(linear_half(), LocatedZeroSet::finite({Q(1, 2)}), Q(4), pow2(-20));
  EXPECT_EQ(io::to_json(vac)["delta"], "inf");
  EXPECT_TRUE(io::same_certificate(io::certificate_from(io::to_json(vac)), vac));
  const auto Z = io::zero_set_from(io::to_json(LocatedZeroSet::finite({Q(0), Q(1, 2)}, {2, 1})));
  EXPECT_EQ(Z.finite_zeros()->multiplicities, (std::vector<int>{2, 1}));
  EXPECT_NE(io::zero_set_from(io::to_json(reciprocal_zeros())).enumerated_zeros(), nullptr);
}

TEST(Cli, ModulusExample) {
  const auto r = run({"modulus", "--family", "plateau", "--n", "10", "--eps", "1/4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["delta"], "1/1024");
}

TEST(Cli, FalsifyExample) {
  const auto r = run({"falsify", "--family", "plateau", "--n", "10", "--eps", "1/4", "--delta", "1/512"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json_of(r)["witness"]["x"], "1/4");
  const auto s = run({"falsify", "--family", "plateau", "--n", "10", "--eps", "1/4", "--delta", "1/1024"});
  EXPECT_EQ(s.code, 0);
  EXPECT_EQ(json_of(s)["status"], "survived");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"modulus", "--family", "plateau", "--n", "10", "--eps", "0/1"}).code, 2);
  EXPECT_EQ(run({"modulus", "--family", "plateau", "--n", "10", "--eps", "0.25"}).code, 2);
  EXPECT_EQ(run({"modulus", "--family", "plateau", "--n", "10", "--eps", "1/4", "--bogus", "1"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"modulus", "--family", "cubic", "--a", "1/2", "--eps", "1/4"}).code, 2);
  EXPECT_EQ(run({"modulus", "--family", "plateau", "--n", "3", "--eps", "1/4", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"bisect", "--family", "plateau", "--n", "3", "--eps", "1/4"}).code, 2);  // no sign change
}

TEST(Cli, PlateauSweepCsv) {
  const auto r = run({"modulus", "--family", "plateau", "--eps", "1/4", "--sweep", "1:20", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,eps,delta,inf_lower,inf_upper");
  for (int n = 1; n <= 20; ++n) {
    ASSERT_TRUE(std::getline(in, line));
    EXPECT_EQ(line, std::to_string(n) + ",1/4," + to_string(pow2(-n)) + "," + to_string(pow2(-n)) + "," +
                        to_string(pow2(-n)));
  }
  EXPECT_FALSE(std::getline(in, line));
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
}

TEST(Cli, EmptySweepIsHeaderOnly) {
  const auto r = run({"modulus", "--family", "plateau", "--eps", "1/4", "--sweep", "5:4", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "n,eps,delta,inf_lower,inf_upper\n");
}

TEST(Cli, PolyboundSummaryRow) {
  const auto r = run({"polybound", "--trials", "5", "--hits", "100", "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "trials,seed,instances,samples,hits,min_hits,violations");
  EXPECT_EQ(r.out.substr(r.out.rfind(',') + 1), "0\n");
  const auto f = run({"polybound", "--roots", "1/1,0/1;-1/1,0/1", "--eps", "1/2"});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(json_of(f)["delta"], "1/16");
}

TEST(Cli, OtherCommands) {
  const auto iso = run({"isolate", "--zeros", "reciprocal", "--X", "21/100:1/1"});
  EXPECT_EQ(iso.code, 0);
  EXPECT_EQ(json_of(iso)["N"], 4);
  EXPECT_EQ(json_of(iso)["sep"], "1/100");

  const auto roots = run({"isolate", "--family", "cubic", "--a", "0/1"});
  EXPECT_EQ(roots.code, 0);
  EXPECT_EQ(json_of(roots)["roots"].size(), 2u);

  const auto b = run({"bisect", "--family", "cubic", "--a", "0/1", "--lo", "1/4", "--hi", "3/4", "--eps", "1/1048576"});
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(json_of(b)["kind"], "exact_zero");

  const auto nc = run({"coverage", "--family", "plateau", "--n", "10", "--delta", "1/512", "--eps", "1/4"});
  EXPECT_EQ(nc.code, 1);
  EXPECT_EQ(json_of(nc)["verdict"], "NotCovered");
  const auto cv = run({"coverage", "--family", "cubic", "--a", "0/1", "--delta", "1/1024", "--eps", "1/4"});
  EXPECT_EQ(cv.code, 0);
  EXPECT_EQ(json_of(cv)["verdict"], "Covered");

  const auto list = run({"corpus", "list"});
  EXPECT_EQ(list.code, 0);
  EXPECT_EQ(json_of(list).size(), corpus_families().size());
  const auto ex = run({"corpus", "export", "--family", "plateau", "--params", "n=10"});
  EXPECT_EQ(ex.code, 0);
  const auto fn = io::function_from(json_of(ex)["function"]);
  EXPECT_TRUE(fn == plateau(10));
}

TEST(Cli, FunctionFileInput) {
  const auto path = std::filesystem::temp_directory_path() / "zstab_cli_test_fn.json";
  {
    std::ofstream f(path);
    f << run({"corpus", "export", "--family", "plateau", "--n", "6"}).out;
  }
  const auto r = run({"modulus", "--function", path.string(), "--eps", "1/4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["delta"], "1/64");
  std::filesystem::remove(path);
}

TEST(Cli, DemoStopping) {
  const auto r = run({"demo-stopping"});
  EXPECT_EQ(r.code, 1);
  const auto j = json_of(r);
  EXPECT_TRUE(j["tolerance_scan"]["mislocated"].get<bool>());
  EXPECT_TRUE(j["certified"]["sound"].get<bool>());
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto path = std::filesystem::temp_directory_path() / "zstab_cli_test_out.csv";
  const std::vector<std::string> args{"modulus", "--family", "plateau", "--eps", "1/4", "--sweep", "1:6", "--format", "csv"};
  auto with_file = args;
  with_file.insert(with_file.end(), {"--output", path.string()});
  const auto a = run(args);
  const auto b = run(with_file);
  EXPECT_EQ(b.out, "");
  std::ifstream in(path, std::ios::binary);
  const std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(body, a.out);
  std::filesystem::remove(path);
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> specs{
      {"polybound", "--trials", "8", "--hits", "50", "--seed", "11"},
      {"falsify", "--family", "spike-barrier", "--K", "6", "--zeros", "-1/1", "--eps", "1/4", "--delta", "1/32"},
      {"demo-stopping", "--format", "csv"},
      {"modulus", "--family", "cubic", "--eps", "1/4", "--sweep", "2:6", "--zeros", "0/1,1/2", "--format", "csv"},
  };
  for (const auto& s : specs) {
    const auto a = run(s), b = run(s);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}
