// Acceptance suite: populated once the pipeline is complete.
