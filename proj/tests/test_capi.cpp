#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "sumdens/sumdens.h"

TEST(CApi, VersionAndErrors) {
  EXPECT_GT(std::strlen(sd_version()), 0u);
  sd_config* cfg = nullptr;
  EXPECT_EQ(sd_config_create("no_such_experiment", &cfg), SD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_NE(std::string(sd_last_error()).find("no_such_experiment"), std::string::npos);
  EXPECT_EQ(sd_config_create(nullptr, &cfg), SD_ERR_INVALID_ARGUMENT);
}

TEST(CApi, RunCustomExperiment) {
  sd_config* cfg = nullptr;
  ASSERT_EQ(sd_config_create("custom", &cfg), SD_OK);
  EXPECT_EQ(sd_config_set_int(cfg, "R", 1000), SD_OK);
  EXPECT_EQ(sd_config_set_int(cfg, "n", 3), SD_OK);
  EXPECT_EQ(sd_config_set_string(cfg, "grid_values", "1,2.5"), SD_OK);
  EXPECT_EQ(sd_config_set_string(cfg, "methods", "sensitivity,cond"), SD_OK);
  EXPECT_EQ(sd_config_set_int(cfg, "timing", 0), SD_OK);
  EXPECT_EQ(sd_config_set_int(cfg, "bogus", 1), SD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sd_config_set_string(cfg, "spacing", "cubic"), SD_ERR_INVALID_ARGUMENT);

  sd_result* res = nullptr;
  ASSERT_EQ(sd_run_experiment(cfg, &res), SD_OK) << sd_last_error();
  ASSERT_EQ(sd_result_rows(res), 4u);
  double s = 0, est = 0, se = 0, w = 0;
  const char* method = nullptr;
  ASSERT_EQ(sd_result_row(res, 1, &s, &method, &est, &se, &w), SD_OK);
  EXPECT_EQ(s, 1.0);
  EXPECT_STREQ(method, "cond");
  EXPECT_GT(est, 0.0);
  EXPECT_TRUE(std::isnan(w));
  EXPECT_EQ(sd_result_row(res, 99, &s, nullptr, nullptr, nullptr, nullptr), SD_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(sd_result_metadata(res)).find("replicate_hash"), std::string::npos);

  const std::string path = ::testing::TempDir() + "capi.csv";
  ASSERT_EQ(sd_result_write(res, path.c_str(), "csv"), SD_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "s,method,estimate,std_error,sqrt_wnrv");
  EXPECT_EQ(sd_result_write(res, path.c_str(), "xml"), SD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sd_result_write(res, "/nonexistent-dir/x.csv", "csv"), SD_ERR_IO);
  sd_result_destroy(res);
  sd_config_destroy(cfg);
}

TEST(CApi, CapabilityErrorForFrankExtended) {
  sd_config* cfg = nullptr;
  ASSERT_EQ(sd_config_create("frank_lognormal", &cfg), SD_OK);
  ASSERT_EQ(sd_config_set_string(cfg, "methods", "ext_cond"), SD_OK);
  sd_result* res = nullptr;
  EXPECT_EQ(sd_run_experiment(cfg, &res), SD_ERR_CAPABILITY);
  EXPECT_EQ(res, nullptr);
  sd_config_destroy(cfg);
}

TEST(CApi, ModelDensityAndScore) {
  const char* specs[] = {"exp:1", "exp:1"};
  sd_model* m = nullptr;
  ASSERT_EQ(sd_model_create("independence", 0.0, 2, specs, &m), SD_OK);
  const double x[] = {1.0, 1.0};
  double lp = 0.0;
  ASSERT_EQ(sd_model_log_density(m, x, 2, &lp), SD_OK);
  EXPECT_NEAR(lp, -2.0, 1e-15);
  double g[2];
  ASSERT_EQ(sd_model_score(m, x, 2, g), SD_OK);
  EXPECT_EQ(g[0], -1.0);
  EXPECT_EQ(sd_model_score(m, x, 3, g), SD_ERR_INVALID_ARGUMENT);
  const double edge[] = {0.0, 1.0};
  EXPECT_EQ(sd_model_score(m, edge, 2, g), SD_ERR_DOMAIN);
  sd_model_destroy(m);

  ASSERT_EQ(sd_model_create("clayton", 1.0, 2, specs, &m), SD_OK);
  const double half[] = {std::log(2.0), std::log(2.0)};
  ASSERT_EQ(sd_model_log_density(m, half, 2, &lp), SD_OK);
  EXPECT_NEAR(std::exp(lp), 32.0 / 27.0 * 0.25, 1e-14);
  sd_model_destroy(m);

  ASSERT_EQ(sd_model_create("gaussian", 0.0, 2, specs, &m), SD_OK);
  ASSERT_EQ(sd_model_log_density(m, x, 2, &lp), SD_OK);
  EXPECT_NEAR(lp, -2.0, 1e-10);
  sd_model_destroy(m);

  EXPECT_EQ(sd_model_create("vine", 1.0, 2, specs, &m), SD_ERR_INVALID_ARGUMENT);
  const char* bad[] = {"exp:1", "weibull:1"};
  EXPECT_EQ(sd_model_create("independence", 0.0, 2, bad, &m), SD_ERR_INVALID_ARGUMENT);
}

TEST(CApi, BayesConfigKeys) {
  sd_bayes_config* cfg = nullptr;
  ASSERT_EQ(sd_bayes_config_create(&cfg), SD_OK);
  EXPECT_EQ(sd_bayes_config_set_int(cfg, "keep", 500), SD_OK);
  EXPECT_EQ(sd_bayes_config_set_double(cfg, "step_var", 0.01), SD_OK);
  EXPECT_EQ(sd_bayes_config_set_string(cfg, "coef", "glu"), SD_OK);
  EXPECT_EQ(sd_bayes_config_set_string(cfg, "bogus", "x"), SD_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sd_bayes_config_set_string(cfg, "data", "/nonexistent.csv"), SD_OK);
  sd_result* res = nullptr;
  EXPECT_EQ(sd_run_bayes(cfg, &res), SD_ERR_IO);
  sd_bayes_config_destroy(cfg);
}
