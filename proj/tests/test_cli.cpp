#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "varadhan/cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = vf::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "vf_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& content) {
  auto path = work_dir() / name;
  std::ofstream(path) << content;
  return path.string();
}

std::string read(const fs::path& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("eval") {
  auto fn = write("logint.json", R"({"kind": "log_integral", "weights": [0.5, 0.5]})");
  auto f = write("f_ln3.json", R"({"values": [1.0986122886681098, 0]})");
  auto r = run({"eval", "--functional", fn, "--f", f});
  CHECK(r.code == vf::cli::kOk);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(0.6931471805599453).epsilon(1e-14));
  auto csv = run({"eval", "--functional", fn, "--f", f, "--format", "csv"});
  CHECK(csv.out.rfind("value\n0.693147180559945", 0) == 0);
}

TEST_CASE("dual with the default schedule") {
  auto fn = write("logint_q.json", R"({"kind": "log_integral", "weights": [0.25, 0.75]})");
  auto r = run({"dual", "--functional", fn, "--schedule", "default"});
  REQUIRE(r.code == vf::cli::kOk);
  auto j = json::parse(r.out);
  CHECK(j["rate"][0].get<double>() == doctest::Approx(1.3862943611198906).epsilon(1e-12));
  CHECK(j["rate"][1].get<double>() == doctest::Approx(0.28768207245178093).epsilon(1e-12));
  CHECK(std::abs(j["L0"].get<double>()) <= 1e-15);

  auto tail = write("tail.json", R"({"kind": "tail_limsup", "grid": [0, 1, 2]})");
  auto t = json::parse(run({"dual", "--functional", tail}).out);
  for (const auto& v : t["rate"]) CHECK(v == "inf");

  auto shallow = run({"dual", "--functional", fn, "--cmax", "3", "--format", "csv"});
  CHECK(shallow.out.find("\nx1,") != std::string::npos);
  auto explicit_depths = run({"dual", "--functional", fn, "--schedule", "1,2,4,8"});
  CHECK(explicit_depths.code == vf::cli::kOk);
}

TEST_CASE("reconstruct and gap") {
  auto rate = write("rate.json", R"({"rate": [0, 1], "L0": 0})");
  auto f = write("f_two.json", R"({"values": [0.2, 1.5]})");
  CHECK(json::parse(run({"reconstruct", "--rate", rate, "--f", f}).out)["value"] == 0.5);
  CHECK(json::parse(run({"reconstruct", "--rate", rate, "--f", f, "--l0", "2"}).out)["value"] == 2.5);

  auto fn = write("logint_u.json", R"({"kind": "log_integral", "weights": [0.5, 0.5]})");
  auto f10 = write("f_10.json", R"({"values": [1, 0]})");
  auto g = run({"gap", "--functional", fn, "--f", f10});
  CHECK(json::parse(g.out)["gap"].get<double>() == doctest::Approx(0.3132616875182228).epsilon(1e-10));
}

TEST_CASE("conjugate and recover") {
  auto fn = write("logint_c.json", R"({"kind": "log_integral", "weights": [0.5, 0.5]})");
  auto mu = write("mu.json", R"({"weights": [0.75, 0.25]})");
  auto r = run({"conjugate", "--functional", fn, "--measure", mu, "--exact-gradient"});
  CHECK(r.code == vf::cli::kOk);
  CHECK(json::parse(r.out)["value"].get<double>() == doctest::Approx(0.13081203594113696).epsilon(1e-9));

  auto fd = run({"conjugate", "--functional", fn, "--measure", mu});
  CHECK(json::parse(fd.out)["value"].get<double>() == doctest::Approx(0.13081203594113696).epsilon(1e-6));

  auto dirac = write("dirac.csv", "label,weight\nx1,1\nx2,0\n");
  auto closed = run({"conjugate", "--functional", fn, "--measure", dirac, "--closed-form"});
  CHECK(json::parse(closed.out)["value"].get<double>() == doctest::Approx(0.6931471805599453).epsilon(1e-14));

  auto nu = write("nu.json", R"({"weights": [0.5, 0.5]})");
  auto f = write("f_rec.json", R"({"values": [1.0986122886681098, 0]})");
  auto rec = run({"recover", "--measure", nu, "--f", f, "--exact-gradient"});
  CHECK(rec.code == vf::cli::kOk);
  auto j = json::parse(rec.out);
  CHECK(std::abs(j["value"].get<double>() - 0.6931471805599453) <= 1e-6);
  CHECK(j["maximizer"][0].get<double>() == doctest::Approx(0.75).epsilon(1e-5));
}

TEST_CASE("check exit codes") {
  auto sup = write("supform.json", R"({"kind": "sup_form", "rate": [0, 0.3, 2.5, "inf"], "L0": 1})");
  auto ok = run({"check", "--functional", sup, "--property", "maximal", "--trials", "1000", "--seed", "42"});
  CHECK(ok.code == vf::cli::kOk);
  CHECK(json::parse(ok.out)["violations"] == 0);

  auto li = write("logint_k.json", R"({"kind": "log_integral", "weights": [0.5, 0.5]})");
  auto bad = run({"check", "--functional", li, "--property", "maximal", "--trials", "100"});
  CHECK(bad.code == vf::cli::kViolations);
  CHECK(json::parse(bad.out)["witness"].size() == 2);

  auto all = run({"check", "--functional", li, "--format", "csv"});
  CHECK(all.code == vf::cli::kViolations);
  CHECK(all.out.find("\nmonotone,1000,0,0\n") != std::string::npos);

  auto tail = write("tail_k.json", R"({"kind": "tail_limsup", "grid": [0, 1, 10]})");
  auto sigma = run({"check", "--functional", tail, "--property", "sigma"});
  CHECK(sigma.code == vf::cli::kViolations);
  for (const auto& v : json::parse(sigma.out)["trajectory"]) CHECK(v == 1.0);
  CHECK(run({"check", "--functional", li, "--property", "sigma"}).code == vf::cli::kOk);
  CHECK(run({"check", "--functional", li, "--property", "const_preserving"}).code == vf::cli::kOk);
}

TEST_CASE("cramer and tightness") {
  auto f = write("f_lin.json", R"({"values": [0, 1]})");
  auto r = run({"cramer", "--p", "0.5", "--schedule", "16,64,256,1024,4096", "--f", f, "--format", "csv"});
  CHECK(r.code == vf::cli::kOk);
  CHECK(r.out.rfind("n,value\n16,", 0) == 0);
  const auto last = r.out.rfind("extrapolated,");
  REQUIRE(last != std::string::npos);
  CHECK(std::stod(r.out.substr(last + 13)) == doctest::Approx(0.6201145069582775).epsilon(1e-9));
  CHECK(r.out.back() == '\n');

  auto t = run({"tightness", "--p", "0.5", "--a", "10"});
  for (const auto& row : json::parse(t.out)) CHECK(row["diameter"] == 1.0);

  auto seq = write("seq.csv", "n,point,weight\n1,0,0.5\n1,1,0.5\n2,0,0.25\n2,0.5,0.5\n2,1,0.25\n4,0,0.0625\n4,0.25,0.25\n4,0.5,0.375\n4,0.75,0.25\n4,1,0.0625\n");
  auto from_file = run({"cramer", "--sequence", seq, "--f", f});
  CHECK(json::parse(from_file.out)["terms"].size() == 3);
}

TEST_CASE("input errors are single-line records with exit 2") {
  auto missing = run({"eval", "--functional", (work_dir() / "nope.json").string(), "--f", "x"});
  CHECK(missing.code == vf::cli::kInputError);
  CHECK(missing.err.find('\n') == missing.err.size() - 1);
  CHECK(json::parse(missing.err)["error"] == "UsageError");

  auto fn = write("bad_kind.json", R"({"kind": "mystery"})");
  auto f = write("f_any.json", R"({"values": [0]})");
  auto parse = run({"eval", "--functional", fn, "--f", f});
  CHECK(parse.code == vf::cli::kInputError);
  CHECK(json::parse(parse.err)["error"] == "ParseError");

  auto allinf = write("allinf.json", R"({"kind": "sup_form", "rate": ["inf", "inf"]})");
  auto r = run({"dual", "--functional", allinf});
  CHECK(json::parse(r.err)["error"] == "AllInfiniteRate");

  CHECK(json::parse(run({"cramer", "--p", "1.5"}).err)["error"] == "InvalidP");
  CHECK(json::parse(run({"cramer", "--schedule", "4,8"}).err)["error"] == "ScheduleTooShort");
  CHECK(run({}).code == vf::cli::kInputError);
  CHECK(run({"bogus"}).code == vf::cli::kInputError);
}

TEST_CASE("output files and determinism") {
  auto li = write("logint_d.json", R"({"kind": "log_integral", "weights": [0.2, 0.3, 0.5]})");
  auto out1 = (work_dir() / "out1.json").string(), out2 = (work_dir() / "out2.json").string();
  CHECK(run({"check", "--functional", li, "--seed", "7", "--output", out1}).code == vf::cli::kViolations);
  CHECK(run({"check", "--functional", li, "--seed", "7", "--output", out2}).code == vf::cli::kViolations);
  CHECK(read(out1) == read(out2));
  CHECK(!read(out1).empty());
}

TEST_CASE("the installed executable reports exit codes") {
  auto sup = write("supform_x.json", R"({"kind": "sup_form", "rate": [0, 1]})");
  auto li = write("logint_x.json", R"({"kind": "log_integral", "weights": [0.5, 0.5]})");
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const std::string exe = VF_EXE;
  CHECK(status(exe + " check --functional " + sup + " --property maximal --trials 200") == 0);
  CHECK(status(exe + " check --functional " + li + " --property maximal --trials 200") == 1);
  CHECK(status(exe + " dual --functional /nonexistent.json") == 2);
  CHECK(status(exe + " --help") == 0);
}
