#!/usr/bin/env python3
"""Generate a JSON report with gamma tables and closed-form agreement for tm, pd, vtm and trib."""

import argparse

from app.core.families import family_for, tm_gamma_closed, vtm_gamma_closed
from app.core.log_setup import install_logging
from app.core.sequences import builtin_spec
from app.services.gamma_sweep import gamma_table
from app.services.reporting import write_report

CLOSED_FORMS = {
    "tm": tm_gamma_closed,
    "vtm": vtm_gamma_closed,
    "pd": lambda n: 1 if n == 1 else 2,
    "trib": lambda n: 1 if n == 1 else (2 if n <= 3 else 3),
}
FAMILY_MIN_N = {"tm": 12, "pd": 6, "vtm": 13, "trib": 4}


def build_summary(n_max: int, threads: int) -> dict:
    summary = {}
    for name, closed in CLOSED_FORMS.items():
        records = gamma_table(builtin_spec(name), n_max, threads=threads)
        mismatches = [record.n for record in records if record.proven and record.gamma != closed(record.n)]
        family_failures = []
        for n in range(FAMILY_MIN_N[name], n_max + 1):
            result = family_for(name, n)
            if result.applicable and not result.verified:
                family_failures.append(n)
        summary[name] = {
            "gamma": [record.gamma for record in records],
            "unproven": [record.n for record in records if not record.proven],
            "closed_form_mismatches": mismatches,
            "family_failures": family_failures,
        }
    return summary


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=32)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    install_logging()
    summary = build_summary(args.n_max, args.threads)
    path = write_report("gamma_report", {"n_max": args.n_max, "sequences": summary})
    disagreements = sum(len(entry["closed_form_mismatches"]) + len(entry["family_failures"]) for entry in summary.values())
    print(f"Checked {len(summary)} sequences up to n={args.n_max}; {disagreements} disagreements. Report saved to {path}.")


if __name__ == "__main__":
    main()
