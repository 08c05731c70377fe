// Copyright 2026 The Sumkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "sumkit/tensor.hpp"

using namespace sumkit;
using namespace sumkit::num;

namespace {

// Independent brute-force product for the matmul oracle.
std::vector<double> naive_matmul(const std::vector<double>& a, const std::vector<double>& b,
                                 int m, int k, int n) {
  std::vector<double> c(static_cast<std::size_t>(m) * n, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      for (int t = 0; t < k; ++t) c[i * n + j] += a[i * k + t] * b[t * n + j];
  return c;
}

}  // namespace

TEST_CASE("rng: identical seeds give identical streams") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    all_equal = all_equal && x == b.next_u64();
    any_diff = any_diff || x != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("rng: documented first outputs are stable across runs") {
  Rng r(1);
  const auto first = r.next_u64();
  Rng r2(1);
  CHECK(first == r2.next_u64());
  CHECK(r.next_double() >= 0.0);
  CHECK(r.next_double() < 1.0);
}

TEST_CASE("matmul: identity") {
  auto i2 = make_tensor({2, 2}, {1, 0, 0, 1});
  auto a = make_tensor({2, 2}, {3, -1, 2, 5});
  auto c = matmul(i2, a);
  CHECK(c->value == a->value);
}

TEST_CASE("matmul: hand example and brute-force oracle") {
  auto a = make_tensor({2, 2}, {1, 2, 3, 4});
  auto b = make_tensor({2, 1}, {0, 1});
  auto c = matmul(a, b);
  CHECK(c->value[0] == doctest::Approx(2));
  CHECK(c->value[1] == doctest::Approx(4));

  Rng rng(7);
  std::vector<double> av(6), bv(12);
  for (auto& x : av) x = rng.uniform(-2, 2);
  for (auto& x : bv) x = rng.uniform(-2, 2);
  auto got = matmul(make_tensor({2, 3}, av), make_tensor({3, 4}, bv));
  auto want = naive_matmul(av, bv, 2, 3, 4);
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(got->value[i] == doctest::Approx(want[i]).epsilon(1e-12));
}

TEST_CASE("matmul: annihilator and shape errors") {
  auto a = make_tensor({2, 2}, {1, 2, 3, 4});
  auto z = zeros({2, 3});
  auto c = matmul(a, z);
  for (double x : c->value) CHECK(x == 0.0);
  CHECK_THROWS_AS(matmul(a, zeros({3, 2})), std::invalid_argument);
}

TEST_CASE("masked_softmax: uniform logits") {
  auto logits = zeros({1, 4});
  auto y = masked_softmax(logits, BoolMat(1, 4, true));
  for (double x : y->value) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("masked_softmax: single permitted column") {
  auto logits = make_tensor({1, 2}, {10.0, -1e9});
  BoolMat m(1, 2, false);
  m.set(0, 0, true);
  auto y = masked_softmax(logits, m);
  CHECK(y->value[0] == 1.0);
  CHECK(y->value[1] == 0.0);
}

TEST_CASE("masked_softmax: fully forbidden row is all zeros") {
  auto logits = make_tensor({2, 2}, {1, 2, 3, 4});
  BoolMat m(2, 2, false);
  m.set(0, 0, true);
  m.set(0, 1, true);
  auto y = masked_softmax(logits, m);
  CHECK(y->value[2] == 0.0);
  CHECK(y->value[3] == 0.0);
  CHECK(y->value[0] + y->value[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("masked_softmax: permitted rows sum to one, forbidden entries exact zero") {
  Rng rng(11);
  auto logits = zeros({8, 8});
  for (auto& x : logits->value) x = rng.uniform(-5, 5);
  BoolMat m(8, 8, false);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) m.set(i, j, rng.next_double() < 0.5);
  auto y = masked_softmax(logits, m);
  for (int i = 0; i < 8; ++i) {
    double s = 0;
    bool any = false;
    for (int j = 0; j < 8; ++j) {
      if (m.at(i, j)) {
        s += y->value[i * 8 + j];
        any = true;
      } else {
        CHECK(y->value[i * 8 + j] == 0.0);
      }
    }
    if (any) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("layer_norm: constant row maps to bias") {
  auto x = make_tensor({1, 4}, {3, 3, 3, 3});
  auto g = full({4}, 1.0);
  auto b = zeros({4});
  auto y = layer_norm(x, g, b, 1e-8);
  for (double v : y->value) CHECK(v == doctest::Approx(0.0).epsilon(1e-6));

  auto b2 = make_tensor({4}, {1, 2, 3, 4});
  auto y2 = layer_norm(x, zeros({4}), b2, 1e-8);
  for (int j = 0; j < 4; ++j) CHECK(y2->value[j] == doctest::Approx(b2->value[j]));
}

TEST_CASE("layer_norm: [1,-1] row is fixed point as eps -> 0") {
  auto x = make_tensor({1, 2}, {1, -1});
  auto y = layer_norm(x, full({2}, 1.0), zeros({2}), 1e-14);
  CHECK(y->value[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(y->value[1] == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK_THROWS_AS(layer_norm(x, full({2}, 1.0), zeros({2}), 0.0), std::invalid_argument);
}

TEST_CASE("cross_entropy: uniform logits give ln V") {
  auto logits = zeros({3, 7});
  auto loss = cross_entropy(logits, {0, 3, 6}, {0, 0, 0});
  CHECK(loss->scalar() == doctest::Approx(std::log(7.0)).epsilon(1e-12));
}

TEST_CASE("cross_entropy: saturated correct class is near zero") {
  auto logits = zeros({1, 5});
  logits->value[2] = 1e3;
  auto loss = cross_entropy(logits, {2}, {0});
  CHECK(loss->scalar() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("cross_entropy: two-class hand softmax") {
  auto logits = make_tensor({1, 2}, {0.0, std::log(3.0)});
  auto loss = cross_entropy(logits, {0}, {0});
  CHECK(loss->scalar() == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("cross_entropy: all positions padded is an error") {
  auto logits = zeros({2, 3});
  CHECK_THROWS_WITH_AS(cross_entropy(logits, {0, 1}, {1, 1}),
                       "cross_entropy: empty loss", std::invalid_argument);
}

TEST_CASE("backward: x*x at x=3 gives 6") {
  auto x = make_tensor({1, 1}, {3.0});
  auto y = matmul(x, x);
  backward(y);
  CHECK(x->grad[0] == doctest::Approx(6.0));
}

TEST_CASE("backward: second call without reset errors") {
  auto x = make_tensor({1, 1}, {2.0});
  auto y = matmul(x, x);
  backward(y);
  CHECK_THROWS_AS(backward(y), std::runtime_error);
}

TEST_CASE("backward: constant w.r.t. x gives zero grad") {
  auto x = make_tensor({1, 2}, {1.0, 2.0});
  auto c = make_tensor({1, 1}, {5.0});
  auto y = matmul(c, c);
  y->parents.push_back(x);  // reachable but unused
  backward(y);
  CHECK(x->grad[0] == 0.0);
  CHECK(x->grad[1] == 0.0);
}

TEST_CASE("backward: matmul/softmax/layer_norm composite matches finite differences") {
  Rng rng(3);
  auto x = zeros({3, 4});
  auto w = zeros({4, 4});
  for (auto& v : x->value) v = rng.uniform(-1, 1);
  for (auto& v : w->value) v = rng.uniform(-1, 1);
  auto gain = full({4}, 1.0);
  auto bias = zeros({4});
  BoolMat mask(3, 3, true);
  mask.set(0, 2, false);
  auto build = [&]() {
    auto h = layer_norm(matmul(x, w), gain, bias, 1e-6);
    auto att = masked_softmax(matmul_nt(h, h), mask);
    auto out = matmul(att, h);
    std::vector<std::uint8_t> pads(3, 0);
    return cross_entropy(out, {1, 2, 0}, pads);
  };
  const double err = finite_diff_check(build, {x, w, gain, bias}, 1e-5);
  CHECK(err < 1e-4);
}

TEST_CASE("adam: first step moves parameters by about -lr*sign(g)") {
  auto p = make_tensor({1, 3}, {1.0, 2.0, 3.0});
  p->grad = {0.5, -0.25, 2.0};
  AdamState st;
  st.lr = 0.01;
  st.eps = 1e-12;
  st.init({p});
  adam_step({p}, st);
  CHECK(st.t == 1);
  CHECK(p->value[0] == doctest::Approx(1.0 - 0.01).epsilon(1e-6 * 0.01));
  CHECK(p->value[1] == doctest::Approx(2.0 + 0.01).epsilon(1e-6 * 0.01));
  CHECK(p->value[2] == doctest::Approx(3.0 - 0.01).epsilon(1e-6 * 0.01));
}

TEST_CASE("adam: zero gradient on fresh state is a no-op") {
  auto p = make_tensor({1, 2}, {1.5, -2.5});
  p->grad = {0.0, 0.0};
  AdamState st;
  st.init({p});
  adam_step({p}, st);
  CHECK(p->value[0] == 1.5);
  CHECK(p->value[1] == -2.5);
  CHECK(st.t == 1);
}

TEST_CASE("adam: identical calls on copied state are identical") {
  auto run = []() {
    auto p = make_tensor({1, 2}, {0.3, 0.7});
    p->grad = {1.0, -1.0};
    AdamState st;
    st.init({p});
    adam_step({p}, st);
    adam_step({p}, st);
    return p->value;
  };
  CHECK(run() == run());
}

TEST_CASE("lr_schedule: crossover, warmup linearity, plug-in value") {
  CHECK(lr_schedule(4000, 4000, 256) ==
        doctest::Approx(std::pow(256.0, -0.5) * std::pow(4000.0, -0.5)).epsilon(1e-15));
  // Linear below warmup.
  const double r1 = lr_schedule(100, 4000, 256);
  const double r2 = lr_schedule(200, 4000, 256);
  CHECK(r2 == doctest::Approx(2 * r1).epsilon(1e-12));
  CHECK_THROWS_AS(lr_schedule(0, 4000, 256), std::invalid_argument);
}

TEST_CASE("finite_diff_check: quadratic form is essentially exact") {
  auto x = make_tensor({1, 3}, {1.0, -2.0, 0.5});
  auto a = make_tensor({3, 3}, {2, 0, 0, 0, 3, 0, 0, 0, 4});
  auto build = [&]() { return matmul(matmul(x, a), make_tensor({3, 1}, {x->value[0], x->value[1], x->value[2]})); };
  // Quadratic in x through one path only (the second factor is a constant
  // snapshot), so central differences are exact.
  auto build2 = [&]() {
    auto y = matmul(x, a);
    return matmul_nt(y, x);
  };
  const double err = finite_diff_check(build2, {x}, 1e-4);
  CHECK(err < 1e-8);
  CHECK_THROWS_WITH_AS(finite_diff_check(build2, {x}, 0.0),
                       "finite_diff_check: zero step", std::invalid_argument);
  (void)build;
}

TEST_CASE("determinism: same inputs give bit-identical outputs") {
  auto run = []() {
    Rng rng(99);
    auto a = zeros({4, 4});
    for (auto& v : a->value) v = rng.uniform(-1, 1);
    auto y = masked_softmax(matmul(a, a), BoolMat(4, 4, true));
    return y->value;
  };
  CHECK(run() == run());
}
