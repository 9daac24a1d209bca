/** Countdown from a server snapshot: the server reports seconds remaining at
 * response time; the client decays that locally between fetches. */

export interface CountdownSnapshot {
  seconds: number;
  takenAt: number;
}

export function takeSnapshot(
  seconds: number | null,
  now: number,
): CountdownSnapshot | null {
  if (seconds === null) {
    return null;
  }
  return { seconds, takenAt: now };
}

export function remainingSeconds(
  snapshot: CountdownSnapshot | null,
  now: number,
): number | null {
  if (snapshot === null) {
    return null;
  }
  const elapsed = (now - snapshot.takenAt) / 1000;
  return Math.max(0, snapshot.seconds - elapsed);
}

/** m:ss, rounded up so the display hits 0:00 exactly at the deadline. */
export function formatCountdown(seconds: number): string {
  const whole = Math.ceil(seconds);
  const minutes = Math.floor(whole / 60);
  const rest = whole % 60;
  return `${minutes}:${String(rest).padStart(2, "0")}`;
}
