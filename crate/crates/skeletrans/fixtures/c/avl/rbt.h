/* rbt.h - red-black tree on top of node.h. */

#pragma once

#include "node.h"

#define RBT_RED 0
#define RBT_BLACK 1
#define RBT_FLIP(c) (1 - (c))
#define RBT_NIL_KEY (-2147483647)
#define RBT_IS_RED(n) ((n) != 0 && (n)->color == RBT_RED)
#define RBT_COLOR_OF(n) ((n) == 0 ? RBT_BLACK : (n)->color)

typedef struct RbtTree {
  RbtNode *root;
  TreeSize size;
} RbtTree;

RbtTree *RbtNew(void);
void RbtFree(RbtTree *t);
RbtNode *RbtRotateLeft(RbtTree *t, RbtNode *x);
RbtNode *RbtRotateRight(RbtTree *t, RbtNode *y);
void RbtFixup(RbtTree *t, RbtNode *z);
TreeStatus RbtInsert(RbtTree *t, int key);
int RbtContains(RbtTree *t, int key);
TreeSize RbtSize(RbtTree *t);
int RbtBlackHeight(RbtNode *n);
