#include <cmath>
#include <cstring>
#include <fstream>

#include "agentrl/common/error.hpp"
#include "agentrl/policy/policy.hpp"

namespace agentrl {
namespace {

constexpr char kMagic[5] = {'A', 'G', 'R', 'L', '1'};

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

void put_f64(std::string& out, double d) {
  uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

uint32_t get_u32(const char* p) {
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  return v;
}

double get_f64(const char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i)
    v = (v << 8) | static_cast<unsigned char>(p[i]);
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

void save_policy(const Policy& policy, const std::filesystem::path& path) {
  std::string blob;
  blob.reserve(sizeof kMagic + 12 + 8 * policy.theta.size());
  blob.append(kMagic, sizeof kMagic);
  put_u32(blob, policy.dim());
  put_f64(blob, policy.temperature);
  for (double w : policy.theta) put_f64(blob, w);

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw Error(ErrorCode::kValidation,
                "cannot open checkpoint for writing: " + path.string());
  file.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!file)
    throw Error(ErrorCode::kInternal,
                "short write to checkpoint: " + path.string());
}

Policy load_policy(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file)
    throw Error(ErrorCode::kNotFound, "no such checkpoint: " + path.string());
  std::string blob((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());
  if (blob.size() < sizeof kMagic + 12 ||
      std::memcmp(blob.data(), kMagic, sizeof kMagic) != 0)
    throw Error(ErrorCode::kValidation,
                "not a policy checkpoint: " + path.string());
  const char* p = blob.data() + sizeof kMagic;
  uint32_t dim = get_u32(p);
  p += 4;
  if (blob.size() != sizeof kMagic + 12 + 8ull * dim)
    throw Error(ErrorCode::kValidation,
                "truncated policy checkpoint: " + path.string());
  Policy policy;
  policy.temperature = get_f64(p);
  p += 8;
  if (!(policy.temperature > 0.0))
    throw Error(ErrorCode::kValidation, "checkpoint temperature not positive");
  policy.theta.resize(dim);
  for (uint32_t i = 0; i < dim; ++i, p += 8) {
    policy.theta[i] = get_f64(p);
    if (!std::isfinite(policy.theta[i]))
      throw Error(ErrorCode::kValidation, "checkpoint parameter not finite");
  }
  return policy;
}

}  // namespace agentrl
