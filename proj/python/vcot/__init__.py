"""Python surface of the evaluation pipeline core.

The heavy lifting lives in the compiled ``vcot._core`` extension; this
package re-exports its operations under friendlier names.
"""

from ._core import (
    accuracy_tenths,
    cli_main,
    extract_rule,
    first_sentence,
    format_tenths,
    make_donor_map,
    records_accuracy,
    sample_frame_indices,
)

__all__ = [
    "accuracy_tenths",
    "cli_main",
    "extract_rule",
    "first_sentence",
    "format_tenths",
    "make_donor_map",
    "records_accuracy",
    "sample_frame_indices",
]
