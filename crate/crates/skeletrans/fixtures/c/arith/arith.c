/* arith.c - integer arithmetic and loop kernels. */

#include "arith.h"

int call_count = 0;

int add(int a, int b)
{
  return a + b;
}

int clamp(int v, int lo, int hi)
{
  if (v < lo) {
    return lo;
  }
  if (v > hi) {
    return hi;
  }
  return v;
}

int sum_array(int *a, int n)
{
  int s = 0;
  int i;
  for (i = 0; i < n; i++) {
    s = s + a[i];
  }
  return s;
}

int count_down(int n)
{
  int c = 0;
  do {
    c = c + 1;
    n = n - 1;
  } while (n > 0);
  return c;
}

int classify(int code)
{
  int score = 0;
  switch (code) {
    case 0:
      score = score + 1;
    case 1:
      score = score + 2;
      break;
    case 2:
      score = score + 10;
      break;
    default:
      score = -1;
      break;
  }
  return score;
}

unsigned int wrap16(unsigned int v)
{
  return (unsigned short)(v * 3u) + 1u;
}

int abs_val(int x)
{
  if (x < 0) {
    return -x;
  }
  return x;
}

int polyval(int *coef, int n, int x)
{
  int acc = 0;
  int i;
  for (i = n - 1; i >= 0; i--) {
    acc = acc * x + coef[i];
  }
  return acc;
}

void vec_scale(int *v, int n, int k)
{
  int i;
  for (i = 0; i < n; i++) {
    v[i] = v[i] * k;
  }
}

int gcd(int a, int b)
{
  int t;
  while (b != 0) {
    t = b;
    b = a % b;
    a = t;
  }
  return a;
}

int swap_test(int a, int b)
{
  int tmp;
  int *pa = &a;
  int *pb = &b;
  tmp = *pa;
  *pa = *pb;
  *pb = tmp;
  return a * 100 + b;
}

int fib(int n)
{
  if (n < 2) {
    return n;
  }
  return fib(n - 1) + fib(n - 2);
}

score_t squared_plus(int v)
{
  return SQ(v) + SCALE;
}

int status_score(int s)
{
  if (s == ERR_CODE) {
    return -1;
  }
  return s + OK_CODE;
}

int bump(void)
{
  call_count = call_count + 1;
  return call_count;
}
