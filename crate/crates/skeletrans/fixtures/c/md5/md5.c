/* md5.c - MD5 message-digest algorithm. */

#include "md5.h"

#define S11 7
#define S12 12
#define S13 17
#define S14 22
#define S21 5
#define S22 9
#define S23 14
#define S24 20
#define S31 4
#define S32 11
#define S33 16
#define S34 23
#define S41 6
#define S42 10
#define S43 15
#define S44 21

#define F(x, y, z) (((x) & (y)) | ((~x) & (z)))
#define G(x, y, z) (((x) & (z)) | ((y) & (~z)))
#define H(x, y, z) ((x) ^ (y) ^ (z))
#define I(x, y, z) ((y) ^ ((x) | (~z)))

static void MD5Transform(unsigned int state[4], unsigned char block[64]);
static void Encode(unsigned char *output, unsigned int *input, unsigned int len);
static void Decode(unsigned int *output, unsigned char *input, unsigned int len);
static void MD5_memcpy(unsigned char *output, unsigned char *input, unsigned int len);
static void MD5_memset(unsigned char *output, int value, unsigned int len);

static unsigned char PADDING[64] = { 0x80 };

void MD5Init(MD5_CTX *context)
{
  context->count[0] = 0;
  context->count[1] = 0;
  context->state[0] = 0x67452301u;
  context->state[1] = 0xefcdab89u;
  context->state[2] = 0x98badcfeu;
  context->state[3] = 0x10325476u;
}

void MD5Update(MD5_CTX *context, unsigned char *input, unsigned int inputLen)
{
  unsigned int i;
  unsigned int index;
  unsigned int partLen;

  index = (context->count[0] >> 3) & 0x3F;
  context->count[0] += inputLen << 3;
  if (context->count[0] < (inputLen << 3)) {
    context->count[1] += 1;
  }
  context->count[1] += inputLen >> 29;
  partLen = 64 - index;

  if (inputLen >= partLen) {
    MD5_memcpy(&context->buffer[index], input, partLen);
    MD5Transform(context->state, context->buffer);
    for (i = partLen; i + 63 < inputLen; i += 64) {
      MD5Transform(context->state, &input[i]);
    }
    index = 0;
  } else {
    i = 0;
  }
  MD5_memcpy(&context->buffer[index], &input[i], inputLen - i);
}

void MD5Final(unsigned char digest[16], MD5_CTX *context)
{
  unsigned char bits[8];
  unsigned int index;
  unsigned int padLen;

  Encode(bits, context->count, 8);
  index = (context->count[0] >> 3) & 0x3f;
  padLen = (index < 56) ? (56 - index) : (120 - index);
  MD5Update(context, PADDING, padLen);
  MD5Update(context, bits, 8);
  Encode(digest, context->state, 16);
  MD5_memset((unsigned char *)context, 0, sizeof(*context));
}

static void MD5Transform(unsigned int state[4], unsigned char block[64])
{
  unsigned int a = state[0];
  unsigned int b = state[1];
  unsigned int c = state[2];
  unsigned int d = state[3];
  unsigned int x[16];

  Decode(x, block, 64);

  /* Round 1 */
  a += F(b, c, d) + x[0] + 0xd76aa478u;
  a = ((a << S11) | (a >> (32 - S11))) + b;
  d += F(a, b, c) + x[1] + 0xe8c7b756u;
  d = ((d << S12) | (d >> (32 - S12))) + a;
  c += F(d, a, b) + x[2] + 0x242070dbu;
  c = ((c << S13) | (c >> (32 - S13))) + d;
  b += F(c, d, a) + x[3] + 0xc1bdceeeu;
  b = ((b << S14) | (b >> (32 - S14))) + c;
  a += F(b, c, d) + x[4] + 0xf57c0fafu;
  a = ((a << S11) | (a >> (32 - S11))) + b;
  d += F(a, b, c) + x[5] + 0x4787c62au;
  d = ((d << S12) | (d >> (32 - S12))) + a;
  c += F(d, a, b) + x[6] + 0xa8304613u;
  c = ((c << S13) | (c >> (32 - S13))) + d;
  b += F(c, d, a) + x[7] + 0xfd469501u;
  b = ((b << S14) | (b >> (32 - S14))) + c;
  a += F(b, c, d) + x[8] + 0x698098d8u;
  a = ((a << S11) | (a >> (32 - S11))) + b;
  d += F(a, b, c) + x[9] + 0x8b44f7afu;
  d = ((d << S12) | (d >> (32 - S12))) + a;
  c += F(d, a, b) + x[10] + 0xffff5bb1u;
  c = ((c << S13) | (c >> (32 - S13))) + d;
  b += F(c, d, a) + x[11] + 0x895cd7beu;
  b = ((b << S14) | (b >> (32 - S14))) + c;
  a += F(b, c, d) + x[12] + 0x6b901122u;
  a = ((a << S11) | (a >> (32 - S11))) + b;
  d += F(a, b, c) + x[13] + 0xfd987193u;
  d = ((d << S12) | (d >> (32 - S12))) + a;
  c += F(d, a, b) + x[14] + 0xa679438eu;
  c = ((c << S13) | (c >> (32 - S13))) + d;
  b += F(c, d, a) + x[15] + 0x49b40821u;
  b = ((b << S14) | (b >> (32 - S14))) + c;

  /* Round 2 */
  a += G(b, c, d) + x[1] + 0xf61e2562u;
  a = ((a << S21) | (a >> (32 - S21))) + b;
  d += G(a, b, c) + x[6] + 0xc040b340u;
  d = ((d << S22) | (d >> (32 - S22))) + a;
  c += G(d, a, b) + x[11] + 0x265e5a51u;
  c = ((c << S23) | (c >> (32 - S23))) + d;
  b += G(c, d, a) + x[0] + 0xe9b6c7aau;
  b = ((b << S24) | (b >> (32 - S24))) + c;
  a += G(b, c, d) + x[5] + 0xd62f105du;
  a = ((a << S21) | (a >> (32 - S21))) + b;
  d += G(a, b, c) + x[10] + 0x02441453u;
  d = ((d << S22) | (d >> (32 - S22))) + a;
  c += G(d, a, b) + x[15] + 0xd8a1e681u;
  c = ((c << S23) | (c >> (32 - S23))) + d;
  b += G(c, d, a) + x[4] + 0xe7d3fbc8u;
  b = ((b << S24) | (b >> (32 - S24))) + c;
  a += G(b, c, d) + x[9] + 0x21e1cde6u;
  a = ((a << S21) | (a >> (32 - S21))) + b;
  d += G(a, b, c) + x[14] + 0xc33707d6u;
  d = ((d << S22) | (d >> (32 - S22))) + a;
  c += G(d, a, b) + x[3] + 0xf4d50d87u;
  c = ((c << S23) | (c >> (32 - S23))) + d;
  b += G(c, d, a) + x[8] + 0x455a14edu;
  b = ((b << S24) | (b >> (32 - S24))) + c;
  a += G(b, c, d) + x[13] + 0xa9e3e905u;
  a = ((a << S21) | (a >> (32 - S21))) + b;
  d += G(a, b, c) + x[2] + 0xfcefa3f8u;
  d = ((d << S22) | (d >> (32 - S22))) + a;
  c += G(d, a, b) + x[7] + 0x676f02d9u;
  c = ((c << S23) | (c >> (32 - S23))) + d;
  b += G(c, d, a) + x[12] + 0x8d2a4c8au;
  b = ((b << S24) | (b >> (32 - S24))) + c;

  /* Round 3 */
  a += H(b, c, d) + x[5] + 0xfffa3942u;
  a = ((a << S31) | (a >> (32 - S31))) + b;
  d += H(a, b, c) + x[8] + 0x8771f681u;
  d = ((d << S32) | (d >> (32 - S32))) + a;
  c += H(d, a, b) + x[11] + 0x6d9d6122u;
  c = ((c << S33) | (c >> (32 - S33))) + d;
  b += H(c, d, a) + x[14] + 0xfde5380cu;
  b = ((b << S34) | (b >> (32 - S34))) + c;
  a += H(b, c, d) + x[1] + 0xa4beea44u;
  a = ((a << S31) | (a >> (32 - S31))) + b;
  d += H(a, b, c) + x[4] + 0x4bdecfa9u;
  d = ((d << S32) | (d >> (32 - S32))) + a;
  c += H(d, a, b) + x[7] + 0xf6bb4b60u;
  c = ((c << S33) | (c >> (32 - S33))) + d;
  b += H(c, d, a) + x[10] + 0xbebfbc70u;
  b = ((b << S34) | (b >> (32 - S34))) + c;
  a += H(b, c, d) + x[13] + 0x289b7ec6u;
  a = ((a << S31) | (a >> (32 - S31))) + b;
  d += H(a, b, c) + x[0] + 0xeaa127fau;
  d = ((d << S32) | (d >> (32 - S32))) + a;
  c += H(d, a, b) + x[3] + 0xd4ef3085u;
  c = ((c << S33) | (c >> (32 - S33))) + d;
  b += H(c, d, a) + x[6] + 0x04881d05u;
  b = ((b << S34) | (b >> (32 - S34))) + c;
  a += H(b, c, d) + x[9] + 0xd9d4d039u;
  a = ((a << S31) | (a >> (32 - S31))) + b;
  d += H(a, b, c) + x[12] + 0xe6db99e5u;
  d = ((d << S32) | (d >> (32 - S32))) + a;
  c += H(d, a, b) + x[15] + 0x1fa27cf8u;
  c = ((c << S33) | (c >> (32 - S33))) + d;
  b += H(c, d, a) + x[2] + 0xc4ac5665u;
  b = ((b << S34) | (b >> (32 - S34))) + c;

  /* Round 4 */
  a += I(b, c, d) + x[0] + 0xf4292244u;
  a = ((a << S41) | (a >> (32 - S41))) + b;
  d += I(a, b, c) + x[7] + 0x432aff97u;
  d = ((d << S42) | (d >> (32 - S42))) + a;
  c += I(d, a, b) + x[14] + 0xab9423a7u;
  c = ((c << S43) | (c >> (32 - S43))) + d;
  b += I(c, d, a) + x[5] + 0xfc93a039u;
  b = ((b << S44) | (b >> (32 - S44))) + c;
  a += I(b, c, d) + x[12] + 0x655b59c3u;
  a = ((a << S41) | (a >> (32 - S41))) + b;
  d += I(a, b, c) + x[3] + 0x8f0ccc92u;
  d = ((d << S42) | (d >> (32 - S42))) + a;
  c += I(d, a, b) + x[10] + 0xffeff47du;
  c = ((c << S43) | (c >> (32 - S43))) + d;
  b += I(c, d, a) + x[1] + 0x85845dd1u;
  b = ((b << S44) | (b >> (32 - S44))) + c;
  a += I(b, c, d) + x[8] + 0x6fa87e4fu;
  a = ((a << S41) | (a >> (32 - S41))) + b;
  d += I(a, b, c) + x[15] + 0xfe2ce6e0u;
  d = ((d << S42) | (d >> (32 - S42))) + a;
  c += I(d, a, b) + x[6] + 0xa3014314u;
  c = ((c << S43) | (c >> (32 - S43))) + d;
  b += I(c, d, a) + x[13] + 0x4e0811a1u;
  b = ((b << S44) | (b >> (32 - S44))) + c;
  a += I(b, c, d) + x[4] + 0xf7537e82u;
  a = ((a << S41) | (a >> (32 - S41))) + b;
  d += I(a, b, c) + x[11] + 0xbd3af235u;
  d = ((d << S42) | (d >> (32 - S42))) + a;
  c += I(d, a, b) + x[2] + 0x2ad7d2bbu;
  c = ((c << S43) | (c >> (32 - S43))) + d;
  b += I(c, d, a) + x[9] + 0xeb86d391u;
  b = ((b << S44) | (b >> (32 - S44))) + c;
  state[0] += a;
  state[1] += b;
  state[2] += c;
  state[3] += d;

  MD5_memset((unsigned char *)x, 0, sizeof(x));
}

static void Encode(unsigned char *output, unsigned int *input, unsigned int len)
{
  unsigned int i;
  unsigned int j;

  for (i = 0, j = 0; j < len; i++, j += 4) {
    output[j] = (unsigned char)(input[i] & 0xff);
    output[j + 1] = (unsigned char)((input[i] >> 8) & 0xff);
    output[j + 2] = (unsigned char)((input[i] >> 16) & 0xff);
    output[j + 3] = (unsigned char)((input[i] >> 24) & 0xff);
  }
}

static void Decode(unsigned int *output, unsigned char *input, unsigned int len)
{
  unsigned int i;
  unsigned int j;

  for (i = 0, j = 0; j < len; i++, j += 4) {
    output[i] = ((unsigned int)input[j]) | (((unsigned int)input[j + 1]) << 8) |
                (((unsigned int)input[j + 2]) << 16) | (((unsigned int)input[j + 3]) << 24);
  }
}

static void MD5_memcpy(unsigned char *output, unsigned char *input, unsigned int len)
{
  unsigned int i;

  for (i = 0; i < len; i++) {
    output[i] = input[i];
  }
}

static void MD5_memset(unsigned char *output, int value, unsigned int len)
{
  unsigned int i;

  for (i = 0; i < len; i++) {
    output[i] = (unsigned char)value;
  }
}
