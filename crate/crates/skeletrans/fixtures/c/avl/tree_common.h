/* tree_common.h - shared tree declarations. */

#pragma once

#define T_MAX(a, b) ((a) > (b) ? (a) : (b))
#define T_MIN(a, b) ((a) < (b) ? (a) : (b))
#define T_ABS(x) ((x) < 0 ? -(x) : (x))
#define T_CLAMP(x, lo, hi) (T_MAX((lo), T_MIN((x), (hi))))
#define T_SQ(x) ((x) * (x))
#define TREE_VERSION 2
#define TREE_NAME "tree"
#define TREE_CAP 64
#define TREE_DEPTH_LIMIT 32

typedef int (*CmpFunc)(const void *, const void *);

typedef enum {
  TREE_OK = 0,
  TREE_ERR = 1
} TreeStatus;

typedef unsigned int TreeSize;
