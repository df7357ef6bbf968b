import os
import sys

from typing import Any

import yaml

from src.sepscope.__main__ import main as sepscope_main

# HPC Job Number:
#   Name of the environment variable for the HPC job number.
HPC_JOB_NUMBER: str = "PBS_ARRAY_INDEX"

# REPRODUCTION_FILE:
#   The reproduction file holding the targets, one per array job.
REPRODUCTION_FILE: str = os.path.join("input_data", "reproduction.yaml")


def load_targets(file_path: str) -> list[dict[str, Any]]:
    with open(file_path, "r", encoding="UTF-8") as file:
        return yaml.safe_load(file)["targets"]


def main(args: list[Any]) -> int:
    """
    Wrapper around sepscope when run on the HPC.

    The array index selects the target to reproduce, in the order of the reproduction
    file, and any further arguments are passed on to the reproduce command.
    """
    # Determine the run that is to be carried out.
    try:
        hpc_job_number = int(os.getenv(HPC_JOB_NUMBER))  # type: ignore
    except (ValueError, TypeError) as e:
        print(
            f"HPC environmental variable {HPC_JOB_NUMBER} was not of type int or not "
            "set.",
            e,
        )
        raise

    # Determine the run.
    run_number: int = hpc_job_number - 1

    # Get the target name based on the job number.
    targets = load_targets(REPRODUCTION_FILE)
    try:
        target = targets[run_number]["name"]
    except IndexError:
        print(
            f"Invalid job number {run_number}. Check the number of targets available."
        )
        raise

    # Reproduce the target with the worker count of the node.
    return sepscope_main(
        [
            "--log-file",
            f"sepscope_{target}.log",
            "reproduce",
            target,
            "--n-jobs",
            os.getenv("NCPUS", "1"),
            *args,
        ]
    )


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
