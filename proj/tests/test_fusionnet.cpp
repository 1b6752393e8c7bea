#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "srf/fusion_net.hpp"
#include "srf/rng.hpp"
#include "srf/tensor_ops.hpp"

using srf::Tensor;

namespace {

Tensor rand_tensor(const srf::Shape& shape, srf::Rng& rng, double lo = -1.0,
                   double hi = 1.0) {
  Tensor t(shape);
  for (std::int64_t i = 0; i < t.numel(); ++i) t[i] = rng.uniform(lo, hi);
  return t;
}

// A net with converged power-iteration state so the normalization factor
// is accurate during the checks below.
void warm_up_states(srf::FusionNet& net, srf::ParamStore& store, int h, int w) {
  srf::Rng rng(999);
  auto lr = srf::make_constant(
      rand_tensor({1, net.out_channels(), h / 2, w / 2}, rng));
  auto hr = srf::make_constant(rand_tensor(
      {1, net.in_channels() - net.out_channels(), h, w}, rng));
  for (int i = 0; i < 100; ++i) net.forward(store, lr, hr, 2, true);
}

double frob_norm(const Tensor& t) {
  long double acc = 0;
  for (std::int64_t i = 0; i < t.numel(); ++i)
    acc += (long double)t[i] * (long double)t[i];
  return std::sqrt((double)acc);
}

}  // namespace

TEST_CASE("residual block with zero conv weights is the identity") {
  srf::FusionNet net("n", 6, 4, 8, 2, 0.6, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(3);
  net.init_params(store, rng);
  store.get("n.block0.conv1.w")->value.fill(0.0);
  store.get("n.block0.conv2.w")->value.fill(0.0);
  Tensor x = rand_tensor({1, 8, 5, 5}, rng);
  Tensor y = net.resblock_forward(store, 0, srf::make_constant(x), true)->value;
  CHECK(oracle::max_rel_err(x, y) == 0.0);
}

TEST_CASE("residual branch is a contraction with factor lambda^2") {
  const double lambda = 0.6;
  srf::FusionNet net("n", 6, 4, 8, 1, lambda, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(5);
  net.init_params(store, rng);
  // make the raw weights large so the bound is actually exercised
  for (const char* name : {"n.block0.conv1.w", "n.block0.conv2.w"}) {
    auto p = store.get(name);
    for (std::int64_t i = 0; i < p->value.numel(); ++i) p->value[i] *= 7.0;
  }
  warm_up_states(net, store, 6, 6);

  double worst = 0;
  int pairs = 0;
  for (int trial = 0; trial < 1100; ++trial) {
    Tensor a = rand_tensor({1, 8, 4, 4}, rng);
    Tensor b = rand_tensor({1, 8, 4, 4}, rng);
    Tensor ga =
        net.resblock_branch(store, 0, srf::make_constant(a), false)->value;
    Tensor gb =
        net.resblock_branch(store, 0, srf::make_constant(b), false)->value;
    Tensor diff_in(a.shape()), diff_out(a.shape());
    for (std::int64_t i = 0; i < a.numel(); ++i) {
      diff_in[i] = a[i] - b[i];
      diff_out[i] = ga[i] - gb[i];
    }
    const double denom = frob_norm(diff_in);
    if (denom < 1e-9) continue;
    worst = std::max(worst, frob_norm(diff_out) / denom);
    ++pairs;
  }
  REQUIRE(pairs >= 1000);
  CHECK(worst <= lambda * lambda * (1.0 + 5e-2));
}

TEST_CASE("fixed-point iteration inverts residual blocks when lambda < 1") {
  srf::FusionNet net("n", 6, 4, 8, 2, 0.6, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(7);
  net.init_params(store, rng);
  for (const char* name :
       {"n.block0.conv1.w", "n.block0.conv2.w", "n.block1.conv1.w", "n.block1.conv2.w"}) {
    auto p = store.get(name);
    for (std::int64_t i = 0; i < p->value.numel(); ++i) p->value[i] *= 5.0;
  }
  warm_up_states(net, store, 6, 6);

  for (int trial = 0; trial < 20; ++trial) {
    const int block = trial % 2;
    Tensor x = rand_tensor({1, 8, 5, 5}, rng);
    Tensor y =
        net.resblock_forward(store, block, srf::make_constant(x), false)->value;
    Tensor back = net.resblock_invert(store, block, y, 60);
    double worst = 0;
    for (std::int64_t i = 0; i < x.numel(); ++i)
      worst = std::max(worst, std::abs(back[i] - x[i]));
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("normalized block weights respect the spectral-norm budget") {
  const double lambda = 0.6;
  srf::FusionNet net("n", 6, 4, 8, 1, lambda, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(11);
  net.init_params(store, rng);
  for (const char* name : {"n.block0.conv1.w", "n.block0.conv2.w"}) {
    auto p = store.get(name);
    for (std::int64_t i = 0; i < p->value.numel(); ++i) p->value[i] *= 9.0;
  }
  warm_up_states(net, store, 6, 6);

  srf::Rng probe_rng(13);
  Tensor x0 = rand_tensor({1, 8, 4, 4}, probe_rng);
  for (const char* name : {"n.block0.conv1.w", "n.block0.conv2.w"}) {
    auto w = store.get(name);
    std::vector<double> ucopy = store.u_state(name, (int)w->value.dim(0));
    auto normalized = srf::spectral_normalize(srf::make_constant(w->value),
                                              lambda, 100, ucopy, false, false);
    // brute-force top singular value of the flattened kernel
    const int rows = (int)w->value.dim(0);
    const int cols = (int)(w->value.numel() / rows);
    double sigma = oracle::svd_sigma_max(normalized->value.reshaped({rows, cols}));
    CHECK(sigma <= lambda * (1.0 + 1e-6));
    CHECK(sigma >= lambda * (1.0 - 1e-3));  // rescale hits the budget exactly
  }
  (void)x0;
}

TEST_CASE("whole network with zero tail maps any input to zero") {
  srf::FusionNet net("n", 6, 4, 8, 2, 0.6, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(17);
  net.init_params(store, rng);  // tail starts at zero
  auto lr = srf::make_constant(rand_tensor({1, 4, 3, 3}, rng));
  auto hr = srf::make_constant(rand_tensor({1, 2, 6, 6}, rng));
  Tensor out = net.forward(store, lr, hr, 2, true)->value;
  REQUIRE(out.rank() == 4);
  CHECK(out.dim(1) == 4);
  CHECK(out.dim(2) == 6);
  CHECK(out.dim(3) == 6);
  for (std::int64_t i = 0; i < out.numel(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("forward output shape follows the scale factor") {
  srf::Rng rng(19);
  for (int s : {1, 2, 4}) {
    srf::FusionNet net("n", 5, 3, 6, 1, 0.8, true, 1, false);
    srf::ParamStore store;
    net.init_params(store, rng);
    auto lr = srf::make_constant(rand_tensor({1, 3, 4, 2}, rng));
    auto hr = srf::make_constant(rand_tensor({1, 2, 4 * s, 2 * s}, rng));
    Tensor out = net.forward(store, lr, hr, s, true)->value;
    CHECK(out.dim(0) == 1);
    CHECK(out.dim(1) == 3);
    CHECK(out.dim(2) == 4 * s);
    CHECK(out.dim(3) == 2 * s);
  }
}

TEST_CASE("forward rejects mismatched shapes") {
  srf::FusionNet net("n", 6, 4, 8, 1, 0.6, true, 1, false);
  srf::ParamStore store;
  srf::Rng rng(23);
  net.init_params(store, rng);
  auto lr = srf::make_constant(rand_tensor({1, 4, 3, 3}, rng));
  auto hr_bad = srf::make_constant(rand_tensor({1, 2, 5, 6}, rng));
  CHECK_THROWS_AS(net.forward(store, lr, hr_bad, 2, true), srf::ShapeError);
  auto hr_badc = srf::make_constant(rand_tensor({1, 3, 6, 6}, rng));
  CHECK_THROWS_AS(net.forward(store, lr, hr_badc, 2, true), srf::ShapeError);
  auto lr_rank3 = srf::make_constant(rand_tensor({4, 3, 3}, rng));
  auto hr_ok = srf::make_constant(rand_tensor({1, 2, 6, 6}, rng));
  CHECK_THROWS_AS(net.forward(store, lr_rank3, hr_ok, 2, true),
                  srf::ShapeError);
}

TEST_CASE("network gradients match finite differences") {
  srf::FusionNet net("n", 8, 4, 6, 1, 0.7, true, 100, false);
  srf::ParamStore store;
  srf::Rng rng(29);
  net.init_params(store, rng);
  // move the tail off zero so its gradient is informative
  auto tail = store.get("n.tail.w");
  for (std::int64_t i = 0; i < tail->value.numel(); ++i)
    tail->value[i] = rng.uniform(-0.05, 0.05);

  Tensor lr_val = rand_tensor({1, 4, 2, 2}, rng, 0.0, 1.0);
  Tensor hr_val = rand_tensor({1, 4, 8, 8}, rng, 0.0, 1.0);
  Tensor weights = rand_tensor({1, 4, 8, 8}, rng);

  auto run = [&]() {
    auto out = net.forward(store, srf::make_constant(lr_val),
                           srf::make_constant(hr_val), 4, false);
    return srf::sum(srf::mul(out, srf::make_constant(weights)));
  };
  // converge the power-iteration state first so finite differences see a
  // stable normalizer
  for (int i = 0; i < 50; ++i) {
    auto lr = srf::make_constant(lr_val);
    auto hr = srf::make_constant(hr_val);
    net.forward(store, lr, hr, 4, true);
  }
  store.zero_grads();
  srf::backward(run());

  for (const std::string& name : store.names()) {
    auto p = store.get(name);
    REQUIRE(p->grad.defined());
    Tensor fd =
        oracle::fd_gradient(p->value, [&]() { return run()->value[0]; });
    CHECK_MESSAGE(oracle::max_rel_err(p->grad, fd) < 1e-4, name);
  }
}

TEST_CASE("stage networks with separate prefixes register separate params") {
  srf::ParamStore store;
  srf::Rng rng(31);
  srf::FusionNet a("f1", 6, 4, 8, 2, 0.6, true, 1, false);
  srf::FusionNet b("f2", 6, 4, 8, 2, 0.6, true, 1, false);
  a.init_params(store, rng);
  b.init_params(store, rng);
  CHECK(store.has("f1.head.w"));
  CHECK(store.has("f2.head.w"));
  CHECK(store.get("f1.block0.conv1.w")->value.same_shape(
      store.get("f2.block0.conv1.w")->value));
  // independent draws -> different values
  bool any_diff = false;
  auto pa = store.get("f1.block0.conv1.w");
  auto pb = store.get("f2.block0.conv1.w");
  for (std::int64_t i = 0; i < pa->value.numel(); ++i)
    any_diff = any_diff || pa->value[i] != pb->value[i];
  CHECK(any_diff);
}

TEST_CASE("disabling normalization changes the forward map") {
  srf::Rng rng(37);
  Tensor lr_val = rand_tensor({1, 4, 3, 3}, rng);
  Tensor hr_val = rand_tensor({1, 2, 6, 6}, rng);

  srf::ParamStore s1, s2;
  srf::FusionNet with_sn("n", 6, 4, 8, 1, 0.5, true, 1, false);
  srf::FusionNet no_sn("n", 6, 4, 8, 1, 0.5, false, 1, false);
  srf::Rng ra(41), rb(41);
  with_sn.init_params(s1, ra);
  no_sn.init_params(s2, rb);
  // identical tail values so outputs are comparable; push tails off zero
  for (auto* st : {&s1, &s2}) {
    auto tail = st->get("n.tail.w");
    srf::Rng rt(43);
    for (std::int64_t i = 0; i < tail->value.numel(); ++i)
      tail->value[i] = rt.uniform(-0.5, 0.5);
  }
  Tensor o1 = with_sn
                  .forward(s1, srf::make_constant(lr_val),
                           srf::make_constant(hr_val), 2, true)
                  ->value;
  Tensor o2 = no_sn
                  .forward(s2, srf::make_constant(lr_val),
                           srf::make_constant(hr_val), 2, true)
                  ->value;
  double diff = 0;
  for (std::int64_t i = 0; i < o1.numel(); ++i)
    diff = std::max(diff, std::abs(o1[i] - o2[i]));
  CHECK(diff > 1e-6);
}
