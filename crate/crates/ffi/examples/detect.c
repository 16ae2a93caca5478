/* Detects beats in a synthetic pulse train and matches them to the truth.
 *
 *   cc examples/detect.c -Iinclude -L../../target/release -lqrs_ffi -lm -lpthread -ldl
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "qrs_ffi.h"

int main(void) {
    const double fs = 200.0;
    const size_t n = 60 * 200;
    double *x = calloc(n, sizeof *x);
    size_t truth[60];
    for (size_t k = 0; k < 60; k++) {
        size_t c = 100 + 200 * k;
        truth[k] = c;
        for (int d = -8; d <= 8; d++) {
            x[c + d] = 0.5 * (1.0 + cos(3.141592653589793 * d / 8.0));
        }
    }

    QrsRecord *rec = NULL;
    QrsBeats *found = NULL, *ann = NULL;
    QrsParams *params = qrs_params_new();
    if (qrs_record_from_samples(x, n, fs, &rec) != QRS_STATUS_OK ||
        qrs_detect(rec, params, &found) != QRS_STATUS_OK ||
        qrs_beats_from_indices(truth, 60, fs, &ann) != QRS_STATUS_OK) {
        fprintf(stderr, "qrs: %s\n", qrs_last_error());
        return 1;
    }

    QrsMatchReport rep;
    qrs_match(ann, found, 150.0, &rep);
    printf("beats=%zu tp=%zu fp=%zu fn=%zu se=%.2f ppv=%.2f\n",
           qrs_beats_len(found), rep.tp, rep.fp, rep.fn_, rep.se, rep.ppv);

    qrs_beats_free(found);
    qrs_beats_free(ann);
    qrs_record_free(rec);
    qrs_params_free(params);
    free(x);
    return rep.tp == 60 ? 0 : 2;
}
