#include <math.h>
#include <stdio.h>
#include <string.h>
#include "twobridge.h"

int main(void) {
    const int64_t twists[] = {4, 2};
    TbReport *r = NULL;
    if (tb_compute_twists(twists, 2, 0, true, &r) != TB_STATUS_OK) return 10;
    TbComplex tau, omega;
    double vol;
    if (tb_report_tau(r, &tau) != TB_STATUS_OK || tb_report_omega(r, &omega) != TB_STATUS_OK) return 11;
    if (tb_report_volume(r, &vol) != TB_STATUS_OK) return 12;
    if (fabs(fabs(tau.re) - 0.487465) > 1e-6 || fabs(fabs(tau.im) - 1.738045) > 1e-6) return 13;
    if (fabs(vol - 3.163963) > 1e-6) return 14;
    char *json = tb_report_json(r);
    if (json == NULL || strstr(json, "\"tau\"") == NULL) return 15;
    tb_string_free(json);
    tb_report_free(r);

    r = NULL;
    if (tb_compute_twists(twists, 1, 0, false, &r) != TB_STATUS_NOT_HYPERBOLIC || r != NULL) return 16;
    if (tb_last_error_message() == NULL) return 17;
    printf("ok %s\n", tb_version());
    return 0;
}
