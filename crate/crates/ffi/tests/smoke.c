/* SPDX-License-Identifier: Apache-2.0 */
#include <stdio.h>
#include <string.h>

#include "cdgl.h"

int main(void) {
    CdglModel *m = NULL;
    int64_t n = 3;
    if (cdgl_model_builtin("sphere", &n, 1, 4, &m) != CDGL_STATUS_OK) {
        fprintf(stderr, "%s\n", cdgl_last_error());
        return 1;
    }
    size_t dims[3];
    if (cdgl_homology_dims(m, 1, 3, dims) != CDGL_STATUS_OK || dims[0] != 0 || dims[1] != 1 || dims[2] != 0) {
        return 2;
    }
    cdgl_model_free(m);

    CdglTask *t = cdgl_task_new("h0");
    cdgl_task_set(t, "model", "wedge(1,1)");
    cdgl_task_set(t, "truncate", "2");
    char *report = NULL;
    CdglStatus s = cdgl_task_run(t, CDGL_FORMAT_CANONICAL, &report);
    int ok = s == CDGL_STATUS_OK && strstr(report, "\"dim\": 3") != NULL;
    cdgl_string_free(report);
    cdgl_task_free(t);
    if (!ok) {
        return 3;
    }
    puts("ok");
    return 0;
}
