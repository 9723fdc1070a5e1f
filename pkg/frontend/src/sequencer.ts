/**
 * Guards against out-of-order async responses: each view load takes a
 * ticket, and only the holder of the latest ticket may render.
 */

export class RequestSequencer {
  private counter = 0;

  next(): number {
    this.counter += 1;
    return this.counter;
  }

  isCurrent(ticket: number): boolean {
    return ticket === this.counter;
  }
}
