#include "conga/cli/manifest.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "conga/error.hpp"
#include "conga/linalg.hpp"
#include "conga/random.hpp"
#include "conga/solver.hpp"
#include "conga/version.hpp"

namespace conga::cli {

namespace fs = std::filesystem;
using nlohmann::json;

const char* RunManifest::kFileName = "manifest.json";

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  }
  return hex.str();
}

json defaults_json() {
  const SolverConfig s;
  const PowerOptions p;
  return {
      {"version", kVersion},
      {"rng", kRngAlgorithm},
      {"solver",
       {{"k", s.k},
        {"inner_tol", s.inner_tol},
        {"outer_tol", s.outer_tol},
        {"max_inner", s.max_inner},
        {"max_outer", s.max_outer},
        {"madmm_rho", s.madmm_rho}}},
      {"power", {{"tol", p.tol}, {"max_iter", p.max_iter}}},
      {"membership_threshold_ratio", 1e-6},
      {"monotone_slack", InnerStats::kMonotoneSlack},
      {"csv_digits", 17},
  };
}

RunManifest::RunManifest(std::string command, fs::path out_dir)
    : command_(std::move(command)), out_dir_(std::move(out_dir)),
      start_(std::chrono::steady_clock::now()) {}

void RunManifest::add_input(const fs::path& path) {
  inputs_[path.string()] = sha256_file(path);
}

void RunManifest::add_output(const std::string& name) {
  outputs_[name] = sha256_file(out_dir_ / name);
}

json RunManifest::entry() const {
  json j;
  j["command"] = command_;
  j["config"] = config_;
  j["seed"] = seed_ ? json(*seed_) : json(nullptr);
  j["defaults"] = defaults_json();
  j["inputs"] = inputs_;
  j["outputs"] = outputs_;
  j["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return j;
}

void RunManifest::write() const {
  const fs::path path = out_dir_ / kFileName;
  json doc;
  if (fs::exists(path)) {
    std::ifstream in(path);
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw DataError(path.string() + ": existing manifest is not valid JSON: " + e.what());
    }
    doc["steps"].push_back(entry());
  } else {
    doc = entry();
    doc["tool"] = "conga";
    doc["steps"] = json::array();
  }
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot write");
  out << doc.dump(2) << "\n";
}

}  // namespace conga::cli
