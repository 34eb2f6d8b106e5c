#include "nlprobe/dft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace nlprobe {

struct DftEngine::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<fftw_complex*>(const_cast<cplx*>(p));
}

}  // namespace

DftEngine::DftEngine(const Grid& g) : grid_(g), sign_(g.size()), plans_(std::make_shared<Plans>()) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto [i0, i1] = g.axis_indices(i);
    sign_[i] = ((i0 + i1) % 2 == 0) ? 1.0 : -1.0;
  }
  std::vector<cplx> a(g.size()), b(g.size());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  if (g.dim() == 1) {
    plans_->forward = fftw_plan_dft_1d(g.n(), as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    plans_->backward = fftw_plan_dft_1d(g.n(), as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  } else {
    plans_->forward =
        fftw_plan_dft_2d(g.n(), g.n(), as_fftw(a.data()), as_fftw(b.data()), FFTW_FORWARD, flags);
    plans_->backward =
        fftw_plan_dft_2d(g.n(), g.n(), as_fftw(a.data()), as_fftw(b.data()), FFTW_BACKWARD, flags);
  }
}

const DftEngine& DftEngine::for_grid(const Grid& g) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<DftEngine>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{g.dim(), g.n()}];
  if (!slot) slot.reset(new DftEngine(Grid(g.dim(), g.n(), 1.0)));
  return *slot;
}

void DftEngine::forward(std::span<const cplx> in, std::span<cplx> out) const {
  // The plan is out-of-place; route aliasing calls through a temporary.
  std::vector<cplx> tmp;
  std::span<cplx> dst = out;
  if (in.data() == out.data()) {
    tmp.resize(out.size());
    dst = tmp;
  }
  fftw_execute_dft(plans_->forward, as_fftw(in.data()), as_fftw(dst.data()));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  for (std::size_t i = 0; i < dst.size(); ++i) out[i] = dst[i] * (sign_[i] * scale);
}

void DftEngine::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  std::vector<cplx> signed_in(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) signed_in[i] = in[i] * sign_[i];
  fftw_execute_dft(plans_->backward, as_fftw(signed_in.data()), as_fftw(out.data()));
}

void DftEngine::forward_raw(std::span<const cplx> in, std::span<cplx> out) const {
  std::vector<cplx> src(in.begin(), in.end());
  fftw_execute_dft(plans_->forward, as_fftw(src.data()), as_fftw(out.data()));
}

void DftEngine::backward_raw(std::span<const cplx> in, std::span<cplx> out) const {
  std::vector<cplx> src(in.begin(), in.end());
  fftw_execute_dft(plans_->backward, as_fftw(src.data()), as_fftw(out.data()));
}

}  // namespace nlprobe
