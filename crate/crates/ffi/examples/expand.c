#include <stdio.h>
#include "hecke_mahler.h"

int main(int argc, char **argv) {
    const char *slope = argc > 1 ? argv[1] : "per:[;1]";
    const char *rho = argc > 2 ? argv[2] : "digits[]";
    HmExpansion *h = NULL;
    HmStatus s = hm_expansion_new(slope, rho, 2, 1, 7, &h);
    if (s != HM_STATUS_OK) {
        fprintf(stderr, "error %d: %s\n", (int)s, hm_last_error());
        return (int)s;
    }
    for (size_t i = 0; i < hm_expansion_len(h); i++) {
        char *t = NULL;
        if (hm_expansion_term(h, i, &t) == HM_STATUS_OK) {
            printf(i ? " %s" : "%s", t);
            hm_string_free(t);
        }
    }
    printf("\n");
    hm_expansion_free(h);
    return 0;
}
