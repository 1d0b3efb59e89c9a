/* Resolve the walking arrow and count homotopy classes of maps into itself. */
#include <stdio.h>
#include "thetacat.h"

static int check(tc_status s, const char *what) {
  if (s != TC_STATUS_OK) {
    fprintf(stderr, "%s: status %d: %s\n", what, (int)s, tc_last_error());
    return 1;
  }
  return 0;
}

int main(void) {
  tc_precat *arrow = NULL;
  tc_resolution *res = NULL;
  size_t f0 = 0, f1 = 0, maps = 0, classes = 0;
  bool is_cat = false;
  if (check(tc_precat_from_json(tc_fixture("arrow"), 1, 0, &arrow), "parse")) return 1;
  if (check(tc_precat_is_ncategory(arrow, &is_cat), "check")) return 1;
  if (check(tc_resolve(arrow, 0, false, &res), "resolve")) return 1;
  if (check(tc_resolution_cells(res, &f0, &f1), "cells")) return 1;
  if (check(tc_hom_classes(res, arrow, &maps, &classes), "classes")) return 1;
  printf("thetacat %s: category=%d F0=%zu F1=%zu maps=%zu classes=%zu\n", tc_version(), is_cat, f0, f1, maps,
         classes);
  if (tc_precat_from_json("{", 1, 0, &arrow) != TC_STATUS_INVALID) return 1;
  printf("bad input: %s\n", tc_last_error());
  tc_resolution_free(res);
  tc_precat_free(arrow);
  return classes == 3 ? 0 : 1;
}
