/**
 * Error taxonomy for document handling, mirroring the pipeline's own
 * exception names so messages shown in the viewer line up with what the
 * command-line tool would say about the same document.
 */

export class DctError extends Error {
  constructor(message: string) {
    super(message);
    this.name = new.target.name;
  }
}

export class MalformedDocument extends DctError {}

export class UnsupportedVersion extends DctError {}

export class InvariantViolation extends DctError {
  readonly path: string;

  constructor(path: string, message: string) {
    super(`${path}: ${message}`);
    this.path = path;
  }
}

export class SummaryMismatch extends DctError {}

export class KeyMismatch extends DctError {}

export class InvalidReport extends DctError {}

export class UnknownKey extends DctError {}

export class InvalidName extends DctError {}

export class EmptyGroup extends DctError {}

/** Viewer-side: export requested while nothing is selected. */
export class EmptySelection extends DctError {}
