#include "dwalk/minimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace dwalk {

namespace {

struct Thunk1D {
  const std::function<double(double)>* f;
};

double gsl_thunk_1d(double x, void* params) { return (*static_cast<const Thunk1D*>(params)->f)(x); }

struct Minimizer1DDeleter {
  void operator()(gsl_min_fminimizer* m) const { gsl_min_fminimizer_free(m); }
};

}  // namespace

Minimum1D minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      double xtol) {
  if (!(lo < hi) || !(xtol > 0.0)) throw std::invalid_argument("minimize_1d: bad bracket");
  // GSL wants an interior point strictly below both ends; take the best of a
  // coarse sample and bracket it by its neighbours.
  constexpr int kSamples = 9;
  std::array<double, kSamples> xs{}, fs{};
  int best = 0;
  for (int i = 0; i < kSamples; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kSamples - 1);
    fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
    if (fs[static_cast<std::size_t>(i)] < fs[static_cast<std::size_t>(best)]) best = i;
  }
  const auto b = static_cast<std::size_t>(best);
  if (best == 0 || best == kSamples - 1 || !(fs[b] < fs[b - 1] && fs[b] < fs[b + 1])) {
    return {xs[b], fs[b]};
  }

  gsl_set_error_handler_off();
  Thunk1D thunk{&f};
  gsl_function fn{&gsl_thunk_1d, &thunk};
  std::unique_ptr<gsl_min_fminimizer, Minimizer1DDeleter> m(
      gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent));
  if (gsl_min_fminimizer_set_with_values(m.get(), &fn, xs[b], fs[b], xs[b - 1], fs[b - 1],
                                         xs[b + 1], fs[b + 1]) != GSL_SUCCESS) {
    return {xs[b], fs[b]};
  }
  for (int iter = 0; iter < 500; ++iter) {
    if (gsl_min_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    if (gsl_min_test_interval(gsl_min_fminimizer_x_lower(m.get()),
                              gsl_min_fminimizer_x_upper(m.get()), xtol, 0.0) == GSL_SUCCESS) {
      break;
    }
  }
  return {gsl_min_fminimizer_x_minimum(m.get()), gsl_min_fminimizer_f_minimum(m.get())};
}

namespace {

struct Thunk {
  const std::function<double(const std::array<double, 3>&)>* f;
};

double gsl_thunk(const gsl_vector* v, void* params) {
  const auto* t = static_cast<const Thunk*>(params);
  return (*t->f)({gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2)});
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

Minimum3D minimize_3d(const std::function<double(const std::array<double, 3>&)>& f,
                      const std::array<double, 3>& x0, double step, double xtol,
                      int max_iter) {
  if (!(step > 0.0) || !(xtol > 0.0)) throw std::invalid_argument("minimize_3d: bad step");
  gsl_set_error_handler_off();
  Thunk thunk{&f};
  gsl_multimin_function fn{&gsl_thunk, 3, &thunk};

  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(3));
  std::unique_ptr<gsl_vector, VectorDeleter> ss(gsl_vector_alloc(3));
  for (std::size_t i = 0; i < 3; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(ss.get(), step);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3));
  if (gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), ss.get()) != GSL_SUCCESS) {
    throw std::runtime_error("minimize_3d: simplex initialisation failed");
  }
  int iter = 0;
  int status = GSL_CONTINUE;
  while (status == GSL_CONTINUE && iter < max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), xtol);
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  return {{gsl_vector_get(best, 0), gsl_vector_get(best, 1), gsl_vector_get(best, 2)},
          gsl_multimin_fminimizer_minimum(m.get()), iter};
}

}  // namespace dwalk
