/* node.c - tree node records. */

#include <stdlib.h>
#include "node.h"

static int node_alloc_count = 0;

AvlNode *AvlNodeNew(int key)
{
  AvlNode *n = (AvlNode *)malloc(sizeof(AvlNode));
  n->key = key;
  n->height = 1;
  n->left = 0;
  n->right = 0;
  node_alloc_count = node_alloc_count + 1;
  return n;
}

void AvlNodeFree(AvlNode *n)
{
  if (n == 0) {
    return;
  }
  AvlNodeFree(n->left);
  AvlNodeFree(n->right);
  free(n);
}

RbtNode *RbtNodeNew(int key)
{
  RbtNode *n = (RbtNode *)malloc(sizeof(RbtNode));
  n->key = key;
  n->color = 0;
  n->left = 0;
  n->right = 0;
  n->parent = 0;
  node_alloc_count = node_alloc_count + 1;
  return n;
}

void RbtNodeFree(RbtNode *n)
{
  if (n == 0) {
    return;
  }
  RbtNodeFree(n->left);
  RbtNodeFree(n->right);
  free(n);
}

int NodeKeySum(AvlNode *n)
{
  if (n == 0) {
    return 0;
  }
  return n->key + NodeKeySum(n->left) + NodeKeySum(n->right);
}

int NodeDepth(AvlNode *n)
{
  if (n == 0) {
    return 0;
  }
  return 1 + T_MAX(NodeDepth(n->left), NodeDepth(n->right));
}
