"""Two-copy Floer complexes, the filling exact sequence and chain-level moves."""

from .moves import (
    BirthDeath,
    CheckResult,
    MovePrecondition,
    birth_death_move,
    complete_square,
    handle_slide_move,
    homotopy_from_images,
    homotopy_square_check,
    join_map_check,
    single_entry_mutations,
    ungraded_slide_map,
)
from .twocopy import (
    ASSUMPTIONS,
    TwoCopySequence,
    ConnectingData,
    FillVerdict,
    MorseComplexData,
    TwoCopyComplex,
    TwoCopyError,
    assemble_two_copy,
    block_identities,
    two_copy_sequence,
    fillability_check,
    long_name,
    make_two_copy,
    morse_data,
)
