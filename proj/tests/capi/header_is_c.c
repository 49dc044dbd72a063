/* Compiles the public header as C and makes a few calls through it. */
#include <stdio.h>
#include <string.h>

#include "star/star.h"

int main(void) {
  star_orders* orders = NULL;
  star_pairwise* pairwise = NULL;
  double q[] = {1.0, 2.0, 3.0}, p[] = {2.0, 2.0}, o[] = {4.0};
  double total = 0.0;
  int failures = 0;

  if (star_orders_all(&orders) != STAR_OK || star_orders_count(orders) != 24) ++failures;
  if (strcmp(star_orders_surface(orders, 0), "[A][C][O][S]") != 0) ++failures;
  if (star_pairwise_all(&pairwise) != STAR_OK || star_pairwise_count(pairwise) != 16) ++failures;
  if (star_loss_balanced(q, 3, p, 2, o, 1, &total) != STAR_OK || total != 8.0) ++failures;
  if (star_loss_balanced(q, 0, p, 2, o, 1, &total) != STAR_ERR_EMPTY_GROUP) ++failures;
  star_orders_free(orders);
  star_pairwise_free(pairwise);
  if (failures) fprintf(stderr, "%d C API checks failed\n", failures);
  return failures ? 1 : 0;
}
