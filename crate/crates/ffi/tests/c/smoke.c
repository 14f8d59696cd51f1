#include <math.h>
#include <stdio.h>
#include <string.h>

#include "cipc.h"

static int failures = 0;

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,    \
                    __LINE__, #cond);                                 \
            failures++;                                               \
        }                                                             \
    } while (0)

int main(void) {
    CipcSystemParams params = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.1};
    CipcSchemeConfig config = {CIPC_SCHEME_CONVENTIONAL, 0.0, 1.0, 1.0, 0.5, 0.1};
    CipcModel *model = NULL;
    CHECK(cipc_model_new(&params, &config, &model) == CIPC_STATUS_OK);
    CHECK(model != NULL);

    double v = 0.0;
    CHECK(cipc_xi_star(model, 1.0, &v) == CIPC_STATUS_OK);
    CHECK(fabs(v - (1.0 - log(2.0))) < 1e-12);

    CHECK(cipc_optimal_threshold(model, 1.0, &v) == CIPC_STATUS_OK);
    CHECK(fabs(v - 2.0) < 1e-15);

    CipcEctResult best;
    CHECK(cipc_optimize(model, true, &best) == CIPC_STATUS_OK);
    CHECK(best.decodable);
    CHECK(best.ect > 0.0 && best.ect <= best.asymptotic_bound);

    CHECK(cipc_ei(0.0, &v) == CIPC_STATUS_DOMAIN);
    CHECK(strlen(cipc_last_error_message()) > 0);
    CHECK(cipc_ei(-1.0, &v) == CIPC_STATUS_OK);
    CHECK(fabs(v + 0.21938393439552027) < 1e-15);

    config.rate = 10.0;
    CipcModel *bad = NULL;
    CHECK(cipc_model_new(&params, &config, &bad) == CIPC_STATUS_INVALID_PARAMETER);
    CHECK(bad == NULL);

    cipc_model_free(model);
    cipc_model_free(NULL);
    if (failures == 0) {
        printf("c smoke test passed\n");
    }
    return failures == 0 ? 0 : 1;
}
