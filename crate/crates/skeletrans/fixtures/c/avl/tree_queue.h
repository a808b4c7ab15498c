/* tree_queue.h - fixed-capacity pointer queue for traversals. */

#pragma once

#define QUEUE_CAP 64
#define QUEUE_EMPTY(q) ((q)->head == (q)->tail)
#define QUEUE_FULL(q) ((q)->tail - (q)->head >= QUEUE_CAP)
#define QUEUE_RESET(q) ((q)->head = (q)->tail = 0)

typedef struct NodeQueue {
  void *items[QUEUE_CAP];
  int head;
  int tail;
} NodeQueue;

void QueueInit(NodeQueue *q);
int QueuePush(NodeQueue *q, void *item);
void *QueuePop(NodeQueue *q);
int QueueLen(NodeQueue *q);
