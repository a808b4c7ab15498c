/* node.h - tree node records. */

#pragma once

#include "tree_common.h"

#define NODE_LIMIT 4096
#define KEY_SENTINEL 0x7fffffff
#define NODE_POOL_BLOCK 16
#define NODE_IS_LEAF(n) ((n)->left == 0 && (n)->right == 0)

typedef struct AvlNode {
  int key;
  int height;
  struct AvlNode *left;
  struct AvlNode *right;
} AvlNode;

typedef struct RbtNode {
  int key;
  int color;
  struct RbtNode *left;
  struct RbtNode *right;
  struct RbtNode *parent;
} RbtNode;

typedef struct KeyRange {
  int lo;
  int hi;
} KeyRange;

AvlNode *AvlNodeNew(int key);
void AvlNodeFree(AvlNode *n);
RbtNode *RbtNodeNew(int key);
void RbtNodeFree(RbtNode *n);
int NodeKeySum(AvlNode *n);
int NodeDepth(AvlNode *n);
