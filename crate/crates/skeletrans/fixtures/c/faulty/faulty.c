/* faulty.c - three translatable kernels and one that is not. */

int ok_double(int x)
{
  return x * 2;
}

int ok_sum_to(int n)
{
  int s = 0;
  int i;
  for (i = 1; i <= n; i++) {
    s = s + i;
  }
  return s;
}

int ok_parity(int n)
{
  if (n % 2 == 0) {
    return 0;
  }
  return 1;
}

int bad_goto(int n)
{
  int acc = 0;
again:
  acc = acc + n;
  n = n - 1;
  if (n > 0) {
    goto again;
  }
  return acc;
}
