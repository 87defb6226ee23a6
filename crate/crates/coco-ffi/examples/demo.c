/* Walks the C interface end to end: build a configuration, analyze it,
 * and screen a quadrangle order. Compile from the repository root with
 *
 *   cargo build --release -p coco-ffi
 *   cc crates/coco-ffi/examples/demo.c \
 *      -Icrates/coco-ffi/include \
 *      target/release/libcoco_ffi.a -lm -o coco_demo
 */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "coco.h"

static int expect(CocoStatus status, const char *what) {
  if (status != COCO_STATUS_OK) {
    fprintf(stderr, "%s failed (%d): %s\n", what, (int)status,
            coco_last_error());
    return 1;
  }
  return 0;
}

int main(void) {
  CocoOptions opts = coco_options_default();

  CocoConfig *cfg = NULL;
  if (expect(coco_config_generate("gq-w2", -1, &cfg), "generate"))
    return 1;
  printf("points=%zu colors=%zu fibers=%zu\n", coco_config_points(cfg),
         coco_config_rank(cfg), coco_config_fiber_count(cfg));

  char *report = NULL;
  if (expect(coco_analyze(cfg, opts, &report), "analyze")) {
    coco_config_free(cfg);
    return 1;
  }
  printf("analysis report: %zu bytes of JSON\n", strlen(report));
  coco_string_free(report);
  coco_config_free(cfg);

  char *verdict = NULL;
  if (expect(coco_gq_feasibility(2, 5, &verdict), "screening"))
    return 1;
  printf("%s\n", verdict);
  coco_string_free(verdict);
  return 0;
}
