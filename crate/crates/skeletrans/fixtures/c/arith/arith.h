/* arith.h - integer arithmetic and loop kernels. */

#define SCALE 3
#define SQ(x) ((x) * (x))

typedef int score_t;

typedef enum {
  OK_CODE = 0,
  ERR_CODE = 5
} status_t;

int add(int a, int b);
int clamp(int v, int lo, int hi);
int sum_array(int *a, int n);
int count_down(int n);
int classify(int code);
unsigned int wrap16(unsigned int v);
int abs_val(int x);
int polyval(int *coef, int n, int x);
void vec_scale(int *v, int n, int k);
int gcd(int a, int b);
int swap_test(int a, int b);
int fib(int n);
score_t squared_plus(int v);
int status_score(int s);
int bump(void);
