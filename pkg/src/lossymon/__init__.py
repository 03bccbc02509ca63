"""Monitor synthesis for finite-state safety properties over lossy event
streams: loss models, provably complete (false-positive-free) alternate
monitors, a brute-force verification oracle, and a simulation harness.
"""

from .automata import (
    Dfa,
    Nfa,
    Nft,
    Gnft,
    compile_regex,
    determinize,
    minimize,
    intersect,
    is_empty,
    includes,
    states_reachable_via,
    gnft_to_nft,
)
from .errors import (
    LossymonError,
    RegexParseError,
    AlphabetMismatchError,
    StateExplosionError,
    CapExceededError,
    UnknownSymbolError,
    ModelError,
    SpecValidationError,
    TrivialPropertyWarning,
)
from .lossmodel import (
    LossModel,
    RegularLang,
    Singleton,
    StateMap,
    dropped_count,
    silent_drop,
    frequency_count,
    merged_objects,
    loop_summary,
    lossless,
    inverse_reach,
    loss_model_from_json,
)
from .synthesis import (
    AlternateMonitor,
    synthesize_optimal,
    synthesize_sound,
    monitorable,
    approximate,
    default_keep_heuristic,
)
from .runtime import MonitorSession, Verdict, run
from .injector import LossConfig, inject_dropped_count, apply_filter, substream
from .oracle import (
    Classification,
    completions,
    classify,
    check_monitor_against_oracle,
)
from .specio import PropertySpec, parse_spec, build_property, bundled_examples

__version__ = "0.1.0"
