/* Evaluates x1 + theta1*theta2 at an A-point over the Grassmann algebra on two generators. */
#include <stdio.h>
#include "superweil.h"

static int check(SwStatus s, const char *what) {
    if (s != SW_STATUS_OK) {
        fprintf(stderr, "%s: %d %s\n", what, (int)s, sw_last_error());
        return 1;
    }
    return 0;
}

int main(void) {
    SwAlgebra *alg = NULL;
    SwSection *sec = NULL;
    SwPoint *pt = NULL;
    char *json = NULL;
    double coeffs[4];

    if (check(sw_algebra_parse("grassmann:2", &alg), "algebra")) return 1;
    if (check(sw_section_parse("x1 + theta1*theta2", 1, 2, &sec), "section")) return 1;
    if (check(sw_point_parse(alg, "x1=2, th1=z1, th2=z2", 1, 2, &pt), "point")) return 1;
    if (check(sw_eval_json(pt, sec, 1, &json), "eval")) return 1;
    printf("%s\n", json);
    sw_string_free(json);
    if (check(sw_eval_f64(pt, sec, coeffs, 4), "eval_f64")) return 1;
    printf("%g %g %g %g\n", coeffs[0], coeffs[1], coeffs[2], coeffs[3]);
    if (sw_algebra_parse("grassmann:", &alg) != SW_STATUS_SYNTAX) return 1;

    sw_point_free(pt);
    sw_section_free(sec);
    sw_algebra_free(alg);
    return 0;
}
