/* shapes.c - polygon measures over geometry and io_util. */

#include <stdio.h>
#include "geometry.h"
#include "io_util.h"

double last_perimeter = 0.0;

int is_odd_len(int n);

double perimeter(Point *pts, int n)
{
  double total = 0.0;
  int i;
  for (i = 0; i < n; i++) {
    Point *a = &pts[i];
    Point *b = &pts[(i + 1) % n];
    total = total + dist2(a, b);
  }
  last_perimeter = total;
  return total;
}

double total_scaled(Point *pts, int n, double k)
{
  int i;
  for (i = 0; i < n; i++) {
    scale_point(&pts[i], k);
  }
  return perimeter(pts, n);
}

int is_even_len(int n)
{
  if (n == 0) {
    return 1;
  }
  return is_odd_len(n - 1);
}

int is_odd_len(int n)
{
  if (n == 0) {
    return 0;
  }
  return is_even_len(n - 1);
}

void report(Point *pts, int n)
{
  int q = quadrant(&pts[0]);
  printf("%squadrant=%d n=%d\n", LOG_PREFIX, q, n);
}
