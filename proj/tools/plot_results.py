# Copyright 2026 The LLES Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Plot per-epoch mean cost with a min/max band from an `lles summarize` JSON.

    python3 tools/plot_results.py results/ground_state.summary.json -o cost.png
"""

import argparse
import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def label(cfg):
    parts = [cfg["method"], f"lr={cfg['lr']}"]
    if cfg["sigma"] != "nan":
        parts.append(f"sigma={float(cfg['sigma']):.4g}")
    if cfg["noise_lambda"] not in ("0", "nan"):
        parts.append(f"lambda={cfg['noise_lambda']}")
    return " ".join(parts)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("summary")
    ap.add_argument("-o", "--output", default="cost.png")
    ap.add_argument("--metric", choices=["cost", "accuracy"], default="cost")
    args = ap.parse_args()

    with open(args.summary) as f:
        summary = json.load(f)

    fig, ax = plt.subplots(figsize=(7, 4))
    for cfg in summary["configs"]:
        rows = [e for e in cfg["epochs"] if e[args.metric] is not None]
        if not rows:
            continue
        x = [e["epoch"] for e in rows]
        mean = [e[args.metric]["mean"] for e in rows]
        lo = [e[args.metric]["min"] for e in rows]
        hi = [e[args.metric]["max"] for e in rows]
        (line,) = ax.plot(x, mean, label=label(cfg))
        ax.fill_between(x, lo, hi, color=line.get_color(), alpha=0.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel(args.metric)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=120)


if __name__ == "__main__":
    main()
