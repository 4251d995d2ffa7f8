#include <stdio.h>
#include <string.h>
#include "qcliff.h"

int main(void) {
    size_t d = 0;
    if (qc_cell_dim(2, 2, 2, &d) != QC_STATUS_OK) return 1;
    printf("cell 2 2 %zu\n", d);

    qc_multivector *a = NULL, *b = NULL, *c = NULL;
    if (qc_spinor_monomial(2, 1, &a) != QC_STATUS_OK) return 2;
    if (qc_spinor_monomial(2, 2, &b) != QC_STATUS_OK) return 3;
    if (qc_multivector_product(a, b, &c) != QC_STATUS_OK) return 4;
    char *json = NULL;
    if (qc_multivector_to_json(c, &json) != QC_STATUS_OK) return 5;
    if (strstr(json, "\"dim\":8") == NULL) return 6;
    qc_string_free(json);
    qc_multivector_free(a);
    qc_multivector_free(b);
    qc_multivector_free(c);

    qc_multivector *bad = NULL;
    qc_status st = qc_multivector_from_json("not json", &bad);
    printf("error %d %s\n", (int)st, qc_last_error());

    char *table = NULL;
    if (qc_emit_table(1, QC_TABLE_DIMS, QC_FORMAT_TEXT, &table) != QC_STATUS_OK) return 7;
    qc_string_free(table);
    return 0;
}
