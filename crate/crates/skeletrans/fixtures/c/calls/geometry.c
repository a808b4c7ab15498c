/* geometry.c - planar point helpers. */

#include "geometry.h"

double dist2(Point *a, Point *b)
{
  double dx = a->x - b->x;
  double dy = a->y - b->y;
  return dx * dx + dy * dy;
}

void scale_point(Point *p, double k)
{
  p->x = p->x * k;
  p->y = p->y * k;
}

int quadrant(Point *p)
{
  if (p->x >= 0.0 && p->y >= 0.0) {
    return 1;
  }
  if (p->x < 0.0 && p->y >= 0.0) {
    return 2;
  }
  if (p->x < 0.0) {
    return 3;
  }
  return 4;
}
