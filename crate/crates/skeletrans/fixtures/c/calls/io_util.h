/* io_util.h - logging and reduction utilities. */

#include <stdio.h>
#include <stdarg.h>

typedef int (*Reducer)(int, int);

#define LOG_PREFIX "calls: "
#define MAX_LINE 256

FILE *log_open(const char *path);
void log_line(FILE *f, const char *fmt, ...);
int emit(FILE *f, const char *msg, va_list args);
int apply2(Reducer r, int a, int b);
int reduce_array(int *xs, int n, Reducer r);
