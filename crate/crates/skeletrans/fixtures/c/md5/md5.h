/* md5.h - MD5 message-digest algorithm interface (RFC 1321 layout). */

typedef struct {
  unsigned int state[4];   /* A, B, C, D */
  unsigned int count[2];   /* bit count, little-endian */
  unsigned char buffer[64];
} MD5_CTX;

void MD5Init(MD5_CTX *context);
void MD5Update(MD5_CTX *context, unsigned char *input, unsigned int inputLen);
void MD5Final(unsigned char digest[16], MD5_CTX *context);
