/* C oracle for the runtime conformance probes: prints the same name=value
 * lines the Rust probe program prints. */

#include <stdio.h>
#include <stdint.h>
#include <string.h>
#include <stdlib.h>

static int sgn(int v) { return (v > 0) - (v < 0); }

int main(void)
{
  /* ptr_arith */
  {
    int a[5] = {10, 11, 12, 13, 14};
    int *p = a;
    int *q = p + 2;
    printf("ptr_arith=%d,%ld,%d\n", q[0], (long)(q - p), p < q);
  }

  /* array_decay */
  {
    int arr3[3] = {1, 2, 3};
    int *dp = (int *)arr3;
    printf("array_decay=%d\n", dp[0] + dp[1] + dp[2]);
  }

  /* cstr */
  {
    const char *s = "Hello World!";
    printf("cstr=%d,%zu\n", s[12], strlen(s));
  }

  /* cast_wrap */
  {
    int big = 70000;
    unsigned short w = (unsigned short)big;
    printf("cast_wrap=%u\n", w);
  }

  /* ptr_int */
  {
    int a[5] = {10, 11, 12, 13, 14};
    int *p = a;
    int *q = p + 2;
    unsigned long pi = (unsigned long)p;
    unsigned long qi = (unsigned long)q;
    printf("ptr_int=%lu,%d\n", qi - pi, pi != 0);
  }

  /* cast_chain */
  {
    long long a64 = -70000;
    unsigned short c1 = (unsigned short)a64;
    int c2 = (int)c1;
    printf("cast_chain=%d\n", c2);
  }

  /* c_for */
  {
    int counts[3];
    int ns[3] = {0, 1, 7};
    int k;
    int odd_sum = 0;
    int i;
    for (k = 0; k < 3; k++) {
      int hits = 0;
      for (i = 0; i < ns[k]; i++) {
        hits++;
      }
      counts[k] = hits;
    }
    for (i = 0; i < 10; i++) {
      if (i % 2 == 0) {
        continue;
      }
      odd_sum += i;
    }
    printf("c_for=%d,%d,%d,%d\n", counts[0], counts[1], counts[2], odd_sum);
  }

  /* c_do */
  {
    int n = 0;
    int body_runs = 0;
    do {
      body_runs++;
      n--;
    } while (n > 0);
    printf("c_do=%d\n", body_runs);
  }

  /* c_switch */
  {
    int outs[4];
    int codes[4] = {0, 1, 2, 9};
    int k;
    for (k = 0; k < 4; k++) {
      int score = 0;
      switch (codes[k]) {
        case 0:
          score += 1;
        case 1:
          score += 2;
          break;
        case 2:
          score += 10;
          break;
        default:
          score = -1;
          break;
      }
      outs[k] = score;
    }
    printf("c_switch=%d,%d,%d,%d\n", outs[0], outs[1], outs[2], outs[3]);
  }

  /* global (single-threaded reference for the shared-counter total) */
  {
    int counter = 0;
    int t;
    int i;
    for (t = 0; t < 4; t++) {
      for (i = 0; i < 1000; i++) {
        counter += 1;
      }
    }
    printf("global=%d\n", counter);
  }

  /* global_once (reference: one initialization, four readers of 42) */
  {
    int init_calls = 1;
    int sum = 4 * 42;
    printf("global_once=%d,%d\n", init_calls, sum == 4 * 42);
  }

  /* va */
  {
    char out[32];
    snprintf(out, sizeof out, "%d-%s", 7, "x");
    printf("va=%s\n", out);
  }

  /* snprintf truncation */
  {
    char buf[8];
    snprintf(buf, 8, "value=%d", 1234);
    printf("snprintf=%s,%zu\n", buf, strlen(buf));
  }

  /* sizeof */
  {
    int sized[3] = {7, 8, 9};
    printf("sizeof=%zu,%zu\n", sizeof(int), sizeof(sized));
  }

  /* incdec */
  {
    int x = 5;
    int r1 = x++;
    int r2 = x;
    int r3 = ++x;
    int r4 = x--;
    int r5 = --x;
    printf("incdec=%d,%d,%d,%d,%d\n", r1, r2, r3, r4, r5);
  }

  /* c_ref */
  {
    int b = 5;
    int *pb = &b;
    *pb = 7;
    printf("c_ref=%d\n", b);
  }

  /* memmove over overlapping ranges */
  {
    unsigned char m[16];
    int i;
    for (i = 0; i < 16; i++) {
      m[i] = (unsigned char)i;
    }
    memmove(m + 3, m, 13);
    printf("memmove=");
    for (i = 0; i < 16; i++) {
      printf(i == 0 ? "%d" : ",%d", m[i]);
    }
    printf("\n");
  }

  /* strcmp */
  printf("strcmp=%d,%d,%d\n", sgn(strcmp("abc", "abc")), sgn(strcmp("abc", "abd")),
         sgn(strcmp("abd", "abc")));

  /* malloc */
  {
    unsigned char *mem = (unsigned char *)malloc(4);
    mem[0] = 77;
    printf("malloc=%d\n", mem[0]);
    free(mem);
  }

  /* memcpy */
  {
    const char *src = "wxyz";
    char dst[5];
    char *ret = (char *)memcpy(dst, src, 5);
    printf("memcpy=%s,%d\n", ret, ret == dst);
  }

  return 0;
}
