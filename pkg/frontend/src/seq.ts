/** Per-panel request sequencing: only the latest in-flight response applies. */

export class SequenceGate {
  private latest = new Map<string, number>();

  /** Register a new request for a panel and get its sequence number. */
  begin(panel: string): number {
    const next = (this.latest.get(panel) ?? 0) + 1;
    this.latest.set(panel, next);
    return next;
  }

  /** True when `seq` is still the newest request for the panel. */
  isCurrent(panel: string, seq: number): boolean {
    return this.latest.get(panel) === seq;
  }
}
