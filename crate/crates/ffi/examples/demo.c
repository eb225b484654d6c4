#include <stdio.h>
#include "bcn_hyper.h"

int main(void) {
    BcnModel *model = NULL;
    BcnStatus s = bcn_model_new(2, 1.0, 1, 0.5, &model);
    if (s != BCN_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", bcn_status_name(s), bcn_last_error_message());
        return 1;
    }
    const double lambda[2] = {3.0, 1.0};
    const double t[2] = {1.0, 0.4};
    BcnResult r;
    s = bcn_evaluate(model, BCN_TARGET_F, lambda, NULL, t, 2, &r);
    if (s != BCN_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", bcn_status_name(s), bcn_last_error_message());
        bcn_model_free(model);
        return 1;
    }
    printf("%.16e %.16e\n", r.value_re, r.value_im);

    const double bad_t[2] = {0.4, 1.0};
    s = bcn_evaluate(model, BCN_TARGET_F, lambda, NULL, bad_t, 2, &r);
    printf("%s\n", bcn_status_name(s));
    bcn_model_free(model);
    return 0;
}
