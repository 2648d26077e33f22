#include <math.h>
#include <stdio.h>
#include "eigqr.h"

static int check(EqrStatus s, const char *what) {
    if (s != EQR_STATUS_OK) {
        const char *msg = eqr_last_error_message();
        fprintf(stderr, "%s: %s (%s)\n", what, eqr_status_string(s), msg ? msg : "");
        return 1;
    }
    return 0;
}

int main(void) {
    const double re[9] = {0, -1, 0, 1, 0, 0, 0, 0, 1};
    EqrMatrix *m = NULL;
    EqrReport *r = NULL;
    if (check(eqr_matrix_new(3, 3, re, NULL, &m), "matrix_new")) return 1;

    EqrConfig cfg = eqr_config_default();
    if (check(eqr_eig(m, &cfg, &r), "eig")) return 1;

    size_t n = eqr_report_eigenvalue_count(r);
    double lr[3], li[3];
    if (check(eqr_report_eigenvalues(r, lr, li, 3), "eigenvalues")) return 1;
    double sum_re = 0, sum_abs_im = 0;
    for (size_t k = 0; k < n; k++) {
        printf("%.12f %+.12fi\n", lr[k], li[k]);
        sum_re += lr[k];
        sum_abs_im += fabs(li[k]);
    }
    printf("iterations=%zu converged=%d\n", eqr_report_iterations(r), eqr_report_converged(r));

    EqrStatus bad = eqr_eig(NULL, NULL, &r);
    printf("null matrix -> %d\n", (int)bad);

    eqr_report_free(r);
    eqr_matrix_free(m);
    return (n == 3 && fabs(sum_re - 1) < 1e-9 && fabs(sum_abs_im - 2) < 1e-9 && bad == EQR_STATUS_USAGE) ? 0 : 1;
}
