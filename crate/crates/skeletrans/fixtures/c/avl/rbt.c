/* rbt.c - red-black tree on top of node.h. */

#include <stdlib.h>
#include "rbt.h"

RbtTree *RbtNew(void)
{
  RbtTree *t = (RbtTree *)malloc(sizeof(RbtTree));
  t->root = 0;
  t->size = 0;
  return t;
}

void RbtFree(RbtTree *t)
{
  if (t == 0) {
    return;
  }
  RbtNodeFree(t->root);
  free(t);
}

RbtNode *RbtRotateLeft(RbtTree *t, RbtNode *x)
{
  RbtNode *y = x->right;
  x->right = y->left;
  if (y->left != 0) {
    y->left->parent = x;
  }
  y->parent = x->parent;
  if (x->parent == 0) {
    t->root = y;
  } else if (x == x->parent->left) {
    x->parent->left = y;
  } else {
    x->parent->right = y;
  }
  y->left = x;
  x->parent = y;
  return y;
}

RbtNode *RbtRotateRight(RbtTree *t, RbtNode *y)
{
  RbtNode *x = y->left;
  y->left = x->right;
  if (x->right != 0) {
    x->right->parent = y;
  }
  x->parent = y->parent;
  if (y->parent == 0) {
    t->root = x;
  } else if (y == y->parent->left) {
    y->parent->left = x;
  } else {
    y->parent->right = x;
  }
  x->right = y;
  y->parent = x;
  return x;
}

void RbtFixup(RbtTree *t, RbtNode *z)
{
  while (z->parent != 0 && z->parent->color == RBT_RED) {
    RbtNode *gp = z->parent->parent;
    if (gp == 0) {
      break;
    }
    if (z->parent == gp->left) {
      RbtNode *uncle = gp->right;
      if (uncle != 0 && uncle->color == RBT_RED) {
        z->parent->color = RBT_BLACK;
        uncle->color = RBT_BLACK;
        gp->color = RBT_RED;
        z = gp;
      } else {
        if (z == z->parent->right) {
          z = z->parent;
          RbtRotateLeft(t, z);
        }
        z->parent->color = RBT_BLACK;
        gp->color = RBT_RED;
        RbtRotateRight(t, gp);
      }
    } else {
      RbtNode *uncle = gp->left;
      if (uncle != 0 && uncle->color == RBT_RED) {
        z->parent->color = RBT_BLACK;
        uncle->color = RBT_BLACK;
        gp->color = RBT_RED;
        z = gp;
      } else {
        if (z == z->parent->left) {
          z = z->parent;
          RbtRotateRight(t, z);
        }
        z->parent->color = RBT_BLACK;
        gp->color = RBT_RED;
        RbtRotateLeft(t, gp);
      }
    }
  }
  t->root->color = RBT_BLACK;
}

TreeStatus RbtInsert(RbtTree *t, int key)
{
  RbtNode *z;
  RbtNode *y = 0;
  RbtNode *x;
  if (t == 0) {
    return TREE_ERR;
  }
  x = t->root;
  while (x != 0) {
    y = x;
    if (key == x->key) {
      return TREE_OK;
    }
    if (key < x->key) {
      x = x->left;
    } else {
      x = x->right;
    }
  }
  z = RbtNodeNew(key);
  z->parent = y;
  if (y == 0) {
    t->root = z;
  } else if (key < y->key) {
    y->left = z;
  } else {
    y->right = z;
  }
  z->color = RBT_RED;
  RbtFixup(t, z);
  t->size = t->size + 1;
  return TREE_OK;
}

int RbtContains(RbtTree *t, int key)
{
  RbtNode *cur = t->root;
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

TreeSize RbtSize(RbtTree *t)
{
  if (t == 0) {
    return 0;
  }
  return t->size;
}

int RbtBlackHeight(RbtNode *n)
{
  int h = 0;
  while (n != 0) {
    if (n->color == RBT_BLACK) {
      h = h + 1;
    }
    n = n->left;
  }
  return h;
}
