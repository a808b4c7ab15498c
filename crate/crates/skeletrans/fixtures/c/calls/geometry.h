/* geometry.h - planar point helpers. */

typedef struct Point {
  double x;
  double y;
} Point;

double dist2(Point *a, Point *b);
void scale_point(Point *p, double k);
int quadrant(Point *p);
