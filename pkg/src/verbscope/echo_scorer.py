"""Reference external scorer: logprob = -(character count of the text).

Exercises the child-process protocol end to end. Answers are emitted in
reverse request order on purpose, to prove the caller reassembles by id.
The misbehavior modes exist so protocol-violation handling can be tested
against a real child process:

    python -m verbscope.echo_scorer --mode positive   # emits a logprob > 0
    python -m verbscope.echo_scorer --mode drop       # skips the last id
    python -m verbscope.echo_scorer --mode garbage    # emits a non-JSON line
"""

from __future__ import annotations

import argparse
import json
import sys


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--mode",
        choices=("ok", "positive", "drop", "garbage"),
        default="ok",
    )
    args = parser.parse_args(argv)

    rows = [json.loads(line) for line in sys.stdin if line.strip()]
    if args.mode == "drop" and rows:
        rows = rows[:-1]
    for i, row in enumerate(reversed(rows)):
        if args.mode == "garbage" and i == 0:
            sys.stdout.write("this is not json\n")
            continue
        text = row["text"]
        logprob = 0.5 if args.mode == "positive" and i == 0 else -float(len(text))
        sys.stdout.write(
            json.dumps(
                {
                    "id": row["id"],
                    "logprob": logprob,
                    "num_tokens": max(1, len(text.split())),
                }
            )
            + "\n"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
