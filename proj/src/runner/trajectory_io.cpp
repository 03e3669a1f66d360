#include <bit>
#include <cstring>

#include "nlw/runner.hpp"

namespace nlw {

static_assert(std::endian::native == std::endian::little, "trajectory files are little-endian");

namespace {

constexpr char kMagic[4] = {'N', 'L', 'W', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

struct Reader {
  const std::string& bytes;
  std::size_t pos = 0;
  template <class T>
  T get() {
    if (pos + sizeof(T) > bytes.size()) throw IoError("trajectory file truncated");
    T v;
    std::memcpy(&v, bytes.data() + pos, sizeof(T));
    pos += sizeof(T);
    return v;
  }
};

}  // namespace

std::string encode_trajectory(const Trajectory& traj, const RadialGrid& grid) {
  if (traj.states.size() != traj.times.size()) throw ContractViolation("encode_trajectory: states were not kept");
  std::string out(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::int32_t>(out, grid.dim());
  put<std::uint64_t>(out, grid.size());
  put<double>(out, grid.r_max());
  put<double>(out, traj.dt);
  put<std::uint64_t>(out, traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    put<double>(out, traj.times[k]);
    put<double>(out, traj.energy[k]);
    for (double x : traj.states[k].u) put<double>(out, x);
    for (double x : traj.states[k].udot) put<double>(out, x);
  }
  return out;
}

DecodedTrajectory decode_trajectory(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("not a trajectory file");
  Reader r{bytes, 4};
  if (r.get<std::uint32_t>() != kVersion) throw IoError("unsupported trajectory file version");
  const int dim = r.get<std::int32_t>();
  const auto n = r.get<std::uint64_t>();
  const double r_max = r.get<double>();
  DecodedTrajectory d;
  d.grid = make_grid(dim, n, r_max);
  d.traj.dt = r.get<double>();
  const auto count = r.get<std::uint64_t>();
  for (std::uint64_t k = 0; k < count; ++k) {
    d.traj.times.push_back(r.get<double>());
    d.traj.energy.push_back(r.get<double>());
    std::vector<double> u(n), v(n);
    for (auto& x : u) x = r.get<double>();
    for (auto& x : v) x = r.get<double>();
    d.traj.states.emplace_back(d.grid, std::move(u), std::move(v));
  }
  if (r.pos != bytes.size()) throw IoError("trailing bytes in trajectory file");
  return d;
}

}  // namespace nlw
