#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "carbon/carbon.h"

namespace {

struct Config {
  cb_config* ptr = nullptr;
  Config() { REQUIRE(cb_config_default(&ptr) == CB_OK); }
  ~Config() { cb_config_free(ptr); }
  void set(const char* section, const char* key, const char* value) {
    REQUIRE(cb_config_set(ptr, section, key, value) == CB_OK);
  }
};

void coarse(Config& c) {
  c.set("grid", "n_d", "6");
  c.set("grid", "n_e", "100");
  c.set("grid", "n_t", "110");
}

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("status names and last error") {
  CHECK(std::string(cb_status_name(CB_OK)) == "ok");
  CHECK(std::string(cb_status_name(CB_ERR_INSTABILITY)) == "instability");
  Config c;
  CHECK(cb_config_set(c.ptr, "stack", "bogus", "1") == CB_ERR_CONFIG);
  CHECK(std::string(cb_last_error()).find("bogus") != std::string::npos);
  CHECK(cb_config_set(c.ptr, "stack", "theta1", "10") == CB_OK);
  CHECK(std::string(cb_last_error()).empty());
  CHECK(cb_config_set(nullptr, "stack", "theta1", "10") == CB_ERR_ARGUMENT);
}

TEST_CASE("config get buffer contract") {
  Config c;
  size_t needed = 0;
  CHECK(cb_config_get(c.ptr, "scheme", "penalty", nullptr, 0, &needed) == CB_OK);
  CHECK(needed == 4);
  char small[2];
  CHECK(cb_config_get(c.ptr, "scheme", "penalty", small, sizeof small, nullptr) == CB_ERR_ARGUMENT);
  char buf[16];
  CHECK(cb_config_get(c.ptr, "scheme", "penalty", buf, sizeof buf, nullptr) == CB_OK);
  CHECK(std::string(buf) == "100");
  CHECK(cb_config_echo_json(c.ptr, nullptr, 0, &needed) == CB_OK);
  CHECK(needed > 100);
}

TEST_CASE("config parse, clone and validate") {
  cb_config* a = nullptr;
  REQUIRE(cb_config_parse("[demand]\nsigma_bar = 0.9\n", "ini", &a) == CB_OK);
  CHECK(cb_config_validate(a) == CB_ERR_CONFIG);
  cb_config* b = nullptr;
  REQUIRE(cb_config_clone(a, &b) == CB_OK);
  CHECK(cb_config_set(b, "demand", "sigma_bar", "0.05") == CB_OK);
  CHECK(cb_config_validate(b) == CB_OK);
  CHECK(cb_config_validate(a) == CB_ERR_CONFIG);
  cb_config_free(a);
  cb_config_free(b);
  cb_config* j = nullptr;
  CHECK(cb_config_parse("{\"scheme\": {\"penalty\": 25}}", "json", &j) == CB_OK);
  cb_config_free(j);
  CHECK(cb_config_parse("x", "yaml", &j) == CB_ERR_ARGUMENT);
  CHECK(cb_config_load("/nonexistent.ini", &j) == CB_ERR_IO);
}

TEST_CASE("stack functions") {
  Config c;
  double v = 0.0;
  REQUIRE(cb_bau_emissions_rate(c.ptr, 21000.0, &v) == CB_OK);
  CHECK(std::abs(v / 1.2961e8 - 1.0) < 5e-4);
  double lo = 0.0;
  double hi = 0.0;
  REQUIRE(cb_active_set(c.ptr, 0.0, 21000.0, &lo, &hi) == CB_OK);
  CHECK(hi - lo == doctest::Approx(21000.0));
  REQUIRE(cb_electricity_price(c.ptr, 0.0, 30000.0, &v) == CB_OK);
  CHECK(v == doctest::Approx(200.0));
  CHECK(cb_emissions_rate(c.ptr, -1.0, 100.0, &v) == CB_ERR_DOMAIN);
}

TEST_CASE("allowance solve and export") {
  Config c;
  coarse(c);
  cb_history* h = nullptr;
  REQUIRE(cb_price_allowance(c.ptr, 10, &h) == CB_OK);
  cb_grid_info info{};
  REQUIRE(cb_history_info(h, &info) == CB_OK);
  CHECK(info.n_d == 6);
  CHECK(info.levels == 12);
  double t = -1.0;
  REQUIRE(cb_history_level_time(h, 0, &t) == CB_OK);
  CHECK(t == 0.0);
  double top = 0.0;
  REQUIRE(cb_history_value(h, 0, 3, 100, &top) == CB_OK);
  CHECK(top == doctest::Approx(100.0 * std::exp(-0.05)));
  double v = 0.0;
  REQUIRE(cb_history_evaluate(h, 0.0, 21000.0, 0.0, &v) == CB_OK);
  CHECK(v > 0.0);
  CHECK(v < 100.0);
  CHECK(cb_history_value(h, 99, 0, 0, &v) == CB_ERR_ARGUMENT);
  CHECK(cb_history_evaluate(h, 0.0, 40000.0, 0.0, &v) == CB_ERR_DOMAIN);

  const double times[] = {0.0, 0.5};
  REQUIRE(cb_history_write_csv(h, "capi_allowance.csv", times, 2) == CB_OK);
  REQUIRE(cb_history_write_grid_json(h, "capi_allowance_grid.json") == CB_OK);
  const std::string csv = slurp("capi_allowance.csv");
  CHECK(csv.rfind("t,D,E,value\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  std::size_t rows = 0;
  for (char ch : csv) rows += ch == '\n';
  CHECK(rows == 1 + 2 * 7 * 101);
  CHECK(slurp("capi_allowance_grid.json").find("\"n_e\": 100") != std::string::npos);
  CHECK(cb_history_write_csv(h, "/nonexistent/dir/x.csv", nullptr, 0) == CB_ERR_IO);
  cb_history_free(h);
}

TEST_CASE("zero penalty exports a zero surface") {
  Config c;
  coarse(c);
  c.set("scheme", "penalty", "0");
  cb_history* h = nullptr;
  REQUIRE(cb_price_allowance(c.ptr, 110, &h) == CB_OK);
  cb_grid_info info{};
  cb_history_info(h, &info);
  for (size_t l = 0; l < info.levels; ++l)
    for (int i = 0; i <= info.n_d; ++i)
      for (int j = 0; j <= info.n_e; ++j) {
        double v = 1.0;
        cb_history_value(h, l, i, j, &v);
        CHECK(v == 0.0);
      }
  cb_history_free(h);
}

TEST_CASE("solver failures map to status codes") {
  Config c;
  coarse(c);
  c.set("grid", "n_t", "20");
  cb_history* h = nullptr;
  CHECK(cb_price_allowance(c.ptr, 1, &h) == CB_ERR_INSTABILITY);
  CHECK(h == nullptr);
  CHECK(std::string(cb_last_error()).find("band") != std::string::npos);
  Config bad;
  bad.set("demand", "sigma_bar", "0.9");
  CHECK(cb_price_allowance(bad.ptr, 1, &h) == CB_ERR_CONFIG);
  Config off;
  coarse(off);
  off.set("grid", "align_cap", "false");
  CHECK(cb_price_allowance(off.ptr, 1, &h) == CB_ERR_CONFIG);
}

TEST_CASE("two-period solve and call through the C API") {
  Config c;
  coarse(c);
  cb_history* a1 = nullptr;
  cb_history* a2 = nullptr;
  REQUIRE(cb_price_allowance_2p(c.ptr, 110, &a1, &a2) == CB_OK);
  cb_grid_info i1{};
  cb_grid_info i2{};
  cb_history_info(a1, &i1);
  cb_history_info(a2, &i2);
  CHECK(i1.levels == 2);
  CHECK(i2.levels == 1);
  cb_history_free(a1);
  cb_history_free(a2);

  // K = 0 equality needs a monotone (CFL-respecting) mesh.
  c.set("grid", "n_d", "12");
  c.set("grid", "n_e", "200");
  c.set("grid", "n_t", "440");
  c.set("option", "strike", "0");
  cb_history* call = nullptr;
  cb_history* alpha = nullptr;
  REQUIRE(cb_price_call(c.ptr, 1, &call, &alpha) == CB_OK);
  double v = 0.0;
  double a = 0.0;
  cb_history_evaluate(call, 0.0, 21000.0, 1e7, &v);
  cb_history_evaluate(alpha, 0.0, 21000.0, 1e7, &a);
  CHECK(v == a);
  cb_history_free(call);
  cb_history_free(alpha);
}

TEST_CASE("simulation and convergence through the C API") {
  Config c;
  coarse(c);
  c.set("mc", "n_paths", "500");
  c.set("mc", "demand_cells", "300");
  const double pens[] = {0.0, 100.0};
  cb_mc_result r[2];
  REQUIRE(cb_simulate_emissions(c.ptr, pens, 2, r) == CB_OK);
  CHECK(r[0].penalty == 0.0);
  CHECK(r[1].mean_emissions < r[0].mean_emissions);
  cb_mc_result again[2];
  REQUIRE(cb_simulate_emissions(c.ptr, pens, 2, again) == CB_OK);
  CHECK(again[1].mean_emissions == r[1].mean_emissions);
  CHECK(cb_simulate_emissions(c.ptr, pens, 0, r) == CB_ERR_ARGUMENT);

  cb_convergence conv{};
  REQUIRE(cb_convergence_study(c.ptr, 1, 3, &conv) == CB_OK);
  CHECK(conv.n_pairs == 2);
  CHECK(conv.e_max == doctest::Approx(1.17e8 * 100.0 / 70.0));
  CHECK(conv.err_inf[1] < conv.err_inf[0]);
  CHECK(conv.rate_inf > 0.0);
  CHECK(cb_convergence_study(c.ptr, 2, 2, &conv) == CB_ERR_ARGUMENT);
}
