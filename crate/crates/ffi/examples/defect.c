/* cc defect.c -I../include -L../../../target/debug -lsincov_ffi */
#include <stdio.h>
#include "sincov.h"

int main(void) {
    SincovKernel *k = NULL;
    if (sincov_generate_e1(10, 1.0, &k) != SINCOV_STATUS_OK) {
        fprintf(stderr, "error: %s\n", sincov_last_error());
        return 1;
    }
    SincovDefect d;
    sincov_defect(k, &d);
    printf("points %zu, defect %.17g over %llu triples\n", sincov_kernel_size(k), d.defect,
           (unsigned long long)d.triple_count);
    sincov_kernel_free(k);
    return 0;
}
