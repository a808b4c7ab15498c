/* avl.c - AVL tree on top of node.h. */

#include <stdlib.h>
#include "avl.h"

AvlTree *AvlNew(void)
{
  AvlTree *t = (AvlTree *)malloc(sizeof(AvlTree));
  t->root = 0;
  t->size = 0;
  return t;
}

void AvlFree(AvlTree *t)
{
  if (t == 0) {
    return;
  }
  AvlNodeFree(t->root);
  free(t);
}

int AvlHeight(AvlNode *n)
{
  if (n == 0) {
    return 0;
  }
  return n->height;
}

int AvlBalanceFactor(AvlNode *n)
{
  if (n == 0) {
    return AVL_BALANCED;
  }
  return AvlHeight(n->left) - AvlHeight(n->right);
}

AvlNode *AvlRotateLeft(AvlNode *x)
{
  AvlNode *y = x->right;
  x->right = y->left;
  y->left = x;
  x->height = 1 + T_MAX(AvlHeight(x->left), AvlHeight(x->right));
  y->height = 1 + T_MAX(AvlHeight(y->left), AvlHeight(y->right));
  return y;
}

AvlNode *AvlRotateRight(AvlNode *y)
{
  AvlNode *x = y->left;
  y->left = x->right;
  x->right = y;
  y->height = 1 + T_MAX(AvlHeight(y->left), AvlHeight(y->right));
  x->height = 1 + T_MAX(AvlHeight(x->left), AvlHeight(x->right));
  return x;
}

AvlNode *AvlInsertNode(AvlNode *n, int key)
{
  int balance;
  if (n == 0) {
    return AvlNodeNew(key);
  }
  if (key < n->key) {
    n->left = AvlInsertNode(n->left, key);
  } else if (key > n->key) {
    n->right = AvlInsertNode(n->right, key);
  } else {
    return n;
  }
  n->height = 1 + T_MAX(AvlHeight(n->left), AvlHeight(n->right));
  balance = AvlBalanceFactor(n);
  if (balance >= AVL_REBALANCE_THRESHOLD && key < n->left->key) {
    return AvlRotateRight(n);
  }
  if (balance <= -AVL_REBALANCE_THRESHOLD && key > n->right->key) {
    return AvlRotateLeft(n);
  }
  if (balance >= AVL_REBALANCE_THRESHOLD) {
    n->left = AvlRotateLeft(n->left);
    return AvlRotateRight(n);
  }
  if (balance <= -AVL_REBALANCE_THRESHOLD) {
    n->right = AvlRotateRight(n->right);
    return AvlRotateLeft(n);
  }
  return n;
}

TreeStatus AvlInsert(AvlTree *t, int key)
{
  if (t == 0) {
    return TREE_ERR;
  }
  t->root = AvlInsertNode(t->root, key);
  t->size = t->size + 1;
  return TREE_OK;
}

int AvlContains(AvlTree *t, int key)
{
  AvlNode *cur = t->root;
  while (cur != 0) {
    if (key == cur->key) {
      return 1;
    }
    if (key < cur->key) {
      cur = cur->left;
    } else {
      cur = cur->right;
    }
  }
  return 0;
}

TreeSize AvlSize(AvlTree *t)
{
  if (t == 0) {
    return 0;
  }
  return t->size;
}
