#!/usr/bin/env python3
"""Scripted UCI responder for engine-client tests.

Replays canned search results so the subprocess protocol path can be
tested without a real engine. Behavior hooks:
  - depth >= 18 gets a different (deeper) canned score than shallower goes
  - the position 7k/8/5KQ1/8/8/8/8/8 w answers with a mate score
  - any position containing "moves h2h4" makes the process exit mid-search
  - any position containing "moves a2a3" emits a malformed score line
  - "setoption name BadOption" is rejected
"""
import sys


def say(line):
    sys.stdout.write(line + "\n")
    sys.stdout.flush()


def main():
    position = ""
    for raw in sys.stdin:
        line = raw.strip()
        if line == "uci":
            say("id name Scripted UCI 1.2")
            say("id author fixture")
            say("option name Hash type spin default 16 min 1 max 1024")
            say("uciok")
        elif line.startswith("setoption"):
            if "BadOption" in line:
                say("No such option: BadOption")
        elif line == "isready":
            say("readyok")
        elif line.startswith("position"):
            position = line
        elif line.startswith("go"):
            depth = 12
            parts = line.split()
            if "depth" in parts:
                depth = int(parts[parts.index("depth") + 1])
            if "moves h2h4" in position:
                sys.exit(3)
            if "moves a2a3" in position:
                say("info depth 1 score cp banana")
                say("bestmove a2a3")
            elif "fen 7k/8/5KQ1/8/8/8/8/8 w" in position:
                say("info depth %d score mate 3 pv g6g7" % depth)
                say("bestmove g6g7")
            elif depth >= 18:
                say("info depth 18 seldepth 24 score cp 74 nodes 424242 pv e2e4")
                say("bestmove e2e4")
            else:
                say("info depth %d score cp 31 pv d2d4" % depth)
                say("bestmove d2d4")
        elif line == "quit":
            return


if __name__ == "__main__":
    main()
