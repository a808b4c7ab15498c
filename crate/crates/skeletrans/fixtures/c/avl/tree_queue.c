/* tree_queue.c - fixed-capacity pointer queue for traversals. */

#include "tree_queue.h"

void QueueInit(NodeQueue *q)
{
  int i;
  q->head = 0;
  q->tail = 0;
  for (i = 0; i < QUEUE_CAP; i++) {
    q->items[i] = 0;
  }
}

int QueuePush(NodeQueue *q, void *item)
{
  if (q->tail - q->head >= QUEUE_CAP) {
    return 1;
  }
  q->items[q->tail % QUEUE_CAP] = item;
  q->tail = q->tail + 1;
  return 0;
}

void *QueuePop(NodeQueue *q)
{
  void *item;
  if (q->head == q->tail) {
    return 0;
  }
  item = q->items[q->head % QUEUE_CAP];
  q->head = q->head + 1;
  return item;
}

int QueueLen(NodeQueue *q)
{
  return q->tail - q->head;
}
