#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "sewkit/sewkit.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

#define NEAR(a, b, tol) EXPECT(fabs((a) - (b)) <= (tol))

static void controls(void) {
  sewkit_control* c = NULL;
  double v = 0, w[3];
  EXPECT(sewkit_control_power(1.0, 1.0, 2.0, &c) == SEWKIT_OK);
  EXPECT(sewkit_control_eval(c, 0.25, 0.75, &v) == SEWKIT_OK);
  NEAR(v, 0.25, 1e-15);
  EXPECT(sewkit_control_midpoint(c, 0.0, 1.0, &v) == SEWKIT_OK);
  NEAR(v, sqrt(0.5), 1e-12);
  EXPECT(sewkit_control_eval(c, 0.75, 0.25, &v) == SEWKIT_DOMAIN);
  EXPECT(strlen(sewkit_last_error()) > 0);

  double pts[9];
  size_t count = 0;
  EXPECT(sewkit_control_dyadic_points(c, 0.0, 1.0, 3, pts, 4, &count) == SEWKIT_INVALID_ARGUMENT);
  EXPECT(count == 9);
  EXPECT(sewkit_control_dyadic_points(c, 0.0, 1.0, 3, pts, 9, &count) == SEWKIT_OK);
  NEAR(pts[4], sqrt(0.5), 1e-12);
  EXPECT(sewkit_control_dyadic_points(c, 0.0, 1.0, 40, pts, 9, &count) == SEWKIT_LEVEL_OVERFLOW);
  EXPECT(sewkit_control_mesh(c, pts, 9, &v) == SEWKIT_OK);
  EXPECT(v <= 1.0 / 8 + 1e-12);
  EXPECT(sewkit_control_check_superadditive(c, 32, &v, w) == SEWKIT_OK);
  EXPECT(v <= 1e-12);
  sewkit_control_free(c);

  EXPECT(sewkit_control_power(1.0, 1.0, 0.5, &c) == SEWKIT_INVALID_ARGUMENT);
  EXPECT(sewkit_control_from_json("{\"kind\": \"linear\", \"T\": 2}", &c) == SEWKIT_OK);
  EXPECT(sewkit_control_eval(c, 0.5, 2.0, &v) == SEWKIT_OK);
  NEAR(v, 1.5, 1e-15);
  sewkit_control_free(c);
  EXPECT(sewkit_control_from_json("{not json", &c) == SEWKIT_CONFIG);

  double profile[4] = {1, 1, 1, 1};
  EXPECT(sewkit_control_besov_data(1.0, profile, 4, 2.0, 0.25, 1.0, &c) == SEWKIT_OK);
  EXPECT(sewkit_control_eval(c, 0.0, 0.5, &v) == SEWKIT_OK);
  NEAR(v, 0.5, 1e-12);
  sewkit_control_free(c);

  double tab[9] = {0, 1, 2, 0, 0, 1, 0, 0, 0};
  EXPECT(sewkit_control_tabulated(1.0, 2, tab, &c) == SEWKIT_OK);
  EXPECT(sewkit_control_eval(c, 0.25, 0.75, &v) == SEWKIT_OK);
  NEAR(v, 1.0, 1e-12);
  sewkit_control_free(c);
  sewkit_control_free(NULL);
}

static void sewing(void) {
  sewkit_control* c = NULL;
  EXPECT(sewkit_control_linear(1.0, &c) == SEWKIT_OK);
  double pts[5] = {0, 0.1, 0.4, 0.45, 1};
  double table[25];
  for (int i = 0; i < 25; ++i) table[i] = sin(1.0 + i);
  double lhs, rhs, rel;
  EXPECT(sewkit_allocation_identity(c, pts, 5, table, &lhs, &rhs, &rel) == SEWKIT_OK);
  double direct = -table[4];
  for (int i = 0; i < 4; ++i) direct += table[i * 5 + i + 1];
  NEAR(lhs, direct, 1e-14);
  NEAR(lhs, rhs, 1e-12);
  EXPECT(rel <= 1e-12);

  sewkit_germ_bounds b = {1, 1, 0, 1, 0, 1, 2, 2, INFINITY};
  double v;
  EXPECT(sewkit_rate_bound(&b, c, 0, 1, 0.25, 2.0, &v) == SEWKIT_OK);
  NEAR(v, 2 * 0.25, 1e-15);
  b.p_hat = 3;
  EXPECT(sewkit_rate_bound(&b, c, 0, 1, 0.25, 2.0, &v) == SEWKIT_INVALID_ARGUMENT);
  sewkit_control_free(c);
}

static void fbm(void) {
  double v;
  EXPECT(sewkit_rho(0.25, 0.0, 1.0, &v) == SEWKIT_OK);
  NEAR(v, 2.0, 1e-15);
  sewkit_fbm_path* p = NULL;
  EXPECT(sewkit_fbm_simulate(0.5, 1, 1.0, 0.0, 64, 7, &p) == SEWKIT_OK);
  EXPECT(sewkit_fbm_steps(p) == 64);
  double b = 0, m = 0;
  EXPECT(sewkit_fbm_value(p, 0, 0.25, &b) == SEWKIT_OK);
  EXPECT(sewkit_fbm_conditional_mean(p, 0, 0.25, 0.75, &m) == SEWKIT_OK);
  NEAR(m, b, 1e-14);
  EXPECT(sewkit_fbm_value(p, 0, 0.3, &b) == SEWKIT_OFF_GRID);
  EXPECT(sewkit_fbm_value(p, 3, 0.25, &b) == SEWKIT_INVALID_ARGUMENT);
  sewkit_fbm_free(p);
  EXPECT(sewkit_fbm_simulate(1.5, 1, 1.0, 0.0, 64, 7, &p) == SEWKIT_INVALID_ARGUMENT);
}

static void grids(void) {
  sewkit_grid* d = NULL;
  sewkit_grid* h = NULL;
  EXPECT(sewkit_grid_dirac(1, 64, 4.0, &d) == SEWKIT_OK);
  EXPECT(sewkit_grid_size(d) == 64);
  EXPECT(sewkit_grid_heat(d, 0.5, &h) == SEWKIT_OK);
  double re[64], im[64];
  EXPECT(sewkit_grid_values(h, re, im, 64) == SEWKIT_OK);
  double mass = 0;
  for (int i = 0; i < 64; ++i) mass += re[i] * 0.125;
  NEAR(mass, 1.0, 1e-12);
  /* Peak of the heat kernel with variance 1/2 at x = 0, node 32. */
  NEAR(re[32], 1 / sqrt(2 * M_PI * 0.5), 1e-6);
  EXPECT(sewkit_grid_values(h, re, im, 10) == SEWKIT_INVALID_ARGUMENT);

  double norm;
  EXPECT(sewkit_grid_besov_norm(h, 0, 2, 2, &norm) == SEWKIT_OK);
  EXPECT(norm > 0);
  sewkit_grid* blk = NULL;
  int beyond = 0;
  EXPECT(sewkit_grid_lp_block(h, 20, &blk, &beyond) == SEWKIT_OK);
  EXPECT(beyond == 1);
  sewkit_grid_free(blk);

  double y[1] = {0.5};
  sewkit_grid* s = NULL;
  EXPECT(sewkit_grid_shift(h, y, &s) == SEWKIT_OK);
  double sre[64], sim[64];
  sewkit_grid_values(s, sre, sim, 64);
  NEAR(sre[28], re[32], 1e-12);
  sewkit_grid_free(s);

  const char* path = "capi_grid.bin";
  EXPECT(sewkit_grid_write_binary(h, path) == SEWKIT_OK);
  sewkit_grid* back = NULL;
  EXPECT(sewkit_grid_read_binary(path, &back) == SEWKIT_OK);
  EXPECT(sewkit_grid_size(back) == 64);
  sewkit_grid_free(back);
  remove(path);
  EXPECT(sewkit_grid_read_binary("does/not/exist.bin", &back) == SEWKIT_IO);
  sewkit_grid_free(h);
  sewkit_grid_free(d);
}

static void budgets(void) {
  double g, b, ph;
  EXPECT(sewkit_regularity_budget(0.25, 1, 2, 0, 2, 2, &g, &b, &ph) == SEWKIT_OK);
  NEAR(g, 2.0, 1e-15);
  NEAR(ph, 2.0, 0);
  double r;
  EXPECT(sewkit_sign_martingale_type_ratio(8, 1.5, 1.5, 2, &r) == SEWKIT_OK);
  NEAR(r, 1.0, 1e-12);
  EXPECT(sewkit_sign_martingale_type_ratio(40, 1.5, 1.5, 2, &r) != SEWKIT_OK);
}

static void experiments(void) {
  EXPECT(strstr(sewkit_experiment_names(), "sew-study") != NULL);
  char summary[4096];
  size_t len = 0;
  const char* cfg = "{\"germ\": \"young\", \"level_min\": 4, \"level_max\": 12, \"checks\": {\"enabled\": false}}";
  EXPECT(sewkit_run_experiment("sew-study", cfg, NULL, "capi_out", 1, summary, sizeof summary, &len) == SEWKIT_OK);
  EXPECT(len > 0 && strstr(summary, "\"all_pass\": true") != NULL);
  EXPECT(sewkit_run_experiment("sew-study", "{\"bogus\": 1}", NULL, "capi_out", 1, summary, sizeof summary, &len) ==
         SEWKIT_CONFIG);
  EXPECT(sewkit_run_experiment("nope", "{}", NULL, "capi_out", 1, NULL, 0, &len) != SEWKIT_OK);
  EXPECT(strcmp(sewkit_status_name(SEWKIT_BUDGET), "budget") == 0);
}

int main(void) {
  controls();
  sewing();
  fbm();
  grids();
  budgets();
  experiments();
  if (failures) fprintf(stderr, "%d failures\n", failures);
  else printf("all C API checks passed (%s)\n", sewkit_version());
  return failures ? 1 : 0;
}
