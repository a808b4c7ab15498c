/* io_util.c - logging and reduction utilities. */

#include <string.h>
#include "io_util.h"

FILE *log_open(const char *path)
{
  return fopen(path, "w");
}

void log_line(FILE *f, const char *fmt, ...)
{
  va_list args;
  va_start(args, fmt);
  emit(f, fmt, args);
  va_end(args);
}

int emit(FILE *f, const char *msg, va_list args)
{
  char line[MAX_LINE];
  int n = vsnprintf(line, MAX_LINE, msg, args);
  if (n > 0) {
    fwrite(line, 1, (size_t)n, f);
  }
  return n;
}

int apply2(Reducer r, int a, int b)
{
  return r(a, b);
}

int reduce_array(int *xs, int n, Reducer r)
{
  int acc = xs[0];
  int i;
  for (i = 1; i < n; i++) {
    acc = apply2(r, acc, xs[i]);
  }
  return acc;
}
