/* avl.h - AVL tree on top of node.h. */

#pragma once

#include "node.h"

#define AVL_LEFT_HEAVY 1
#define AVL_RIGHT_HEAVY (-1)
#define AVL_BALANCED 0
#define AVL_REBALANCE_THRESHOLD 2
#define AVL_DEFAULT_HEIGHT 1
#define AVL_HEIGHT_OF(n) ((n) == 0 ? 0 : (n)->height)

typedef struct AvlTree {
  AvlNode *root;
  TreeSize size;
} AvlTree;

AvlTree *AvlNew(void);
void AvlFree(AvlTree *t);
int AvlHeight(AvlNode *n);
int AvlBalanceFactor(AvlNode *n);
AvlNode *AvlRotateLeft(AvlNode *x);
AvlNode *AvlRotateRight(AvlNode *y);
AvlNode *AvlInsertNode(AvlNode *n, int key);
TreeStatus AvlInsert(AvlTree *t, int key);
int AvlContains(AvlTree *t, int key);
TreeSize AvlSize(AvlTree *t);
