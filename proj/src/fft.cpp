#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace lpg::detail {

namespace {

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n)
      : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))), size(n) {}
  ~AlignedBuffer() { fftw_free(ptr); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* ptr;
  std::size_t size;
};

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is. Plans live for the process lifetime.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

PlanPair plans_for(const std::vector<int>& shape) {
  static std::map<std::vector<int>, PlanPair> cache;
  std::lock_guard lock(plan_mutex());
  auto it = cache.find(shape);
  if (it != cache.end()) return it->second;
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  AlignedBuffer scratch(n);
  PlanPair p;
  p.forward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch.ptr, scratch.ptr,
                            FFTW_FORWARD, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), scratch.ptr, scratch.ptr,
                             FFTW_BACKWARD, FFTW_ESTIMATE);
  cache.emplace(shape, p);
  return p;
}

void execute(fftw_plan plan, std::span<Complex> data) {
  AlignedBuffer buf(data.size());
  std::memcpy(buf.ptr, data.data(), sizeof(fftw_complex) * data.size());
  fftw_execute_dft(plan, buf.ptr, buf.ptr);
  std::memcpy(static_cast<void*>(data.data()), buf.ptr, sizeof(fftw_complex) * data.size());
}

}  // namespace

void fft_forward(const std::vector<int>& shape, std::span<Complex> data) {
  execute(plans_for(shape).forward, data);
}

void fft_inverse(const std::vector<int>& shape, std::span<Complex> data) {
  execute(plans_for(shape).backward, data);
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
}

std::vector<double> dct2(std::span<const double> in) {
  const int n = static_cast<int>(in.size());
  double* buf = static_cast<double*>(fftw_malloc(sizeof(double) * in.size()));
  std::memcpy(buf, in.data(), sizeof(double) * in.size());
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_r2r_1d(n, buf, buf, FFTW_REDFT10, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> out(buf, buf + n);
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace lpg::detail
